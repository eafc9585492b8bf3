#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tep {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Bus {
    int id = 0;
    double demand = 0.0;        // d_n, per-unit
    double gen_capacity = 0.0;  // 0 when the bus has no generator
    double gen_cost = 0.0;      // per unit of generated power
};

struct Line {
    double reactance = 0.0;   // > 0
    double susceptance = 0.0; // always -1/reactance after parse
    double capacity = 0.0;    // > 0
    double build_cost = 0.0;  // 0 for existing lines
};

struct Corridor {
    int from_bus = -1; // always < to_bus
    int to_bus = -1;
    double angle_limit = 0.0; // radians
    std::vector<Line> existing;
    std::vector<Line> candidates;

    bool established() const { return !existing.empty(); }
};

/// Immutable after construction; shareable across threads.
struct TepInstance {
    double sigma = 1.0;
    double default_angle_limit = 0.0;
    std::vector<Bus> buses;
    std::vector<Corridor> corridors;

    int num_buses() const { return static_cast<int>(buses.size()); }
    int num_corridors() const { return static_cast<int>(corridors.size()); }
    int num_candidate_lines() const;
    int num_existing_lines() const;

    /// Index of the corridor joining buses a and b (order-insensitive), -1 if none.
    int corridor_between(int a, int b) const;
};

/// Parses the JSON instance schema:
///   { "sigma": s, "default_angle_limit": t,
///     "buses": [ {"id", "demand", "gen_capacity", "gen_cost"} ],
///     "corridors": [ {"from", "to", "angle_limit"?,
///                     "existing": [ {"x", "capacity", "b"?} ],
///                     "candidates": [ {"x", "capacity", "cost", "b"?} ] } ] }
/// Susceptance "b" is optional and derived as -1/x when absent.
/// Throws ParseError on malformed documents and ValidationError (listing all
/// failures) on invariant violations.
TepInstance parse_instance(const std::string& text);

/// Deterministic serialization; parse(serialize(x)) == x field-for-field.
std::string serialize_instance(const TepInstance& inst);

TepInstance load_instance(const std::string& path);

/// Subgraph over buses with one edge per corridor having at least one
/// existing line, weighted by min over existing lines of x * capacity.
struct EstablishedGraph {
    struct Edge {
        int corridor = -1;
        int u = -1, v = -1;
        double weight = 0.0;
    };
    int num_buses = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<std::pair<int, double>>> adjacency; // (neighbor, weight)
};

EstablishedGraph established_subgraph(const TepInstance& inst);

/// Dijkstra distances from src; unreachable buses get +infinity.
std::vector<double> shortest_distances(const EstablishedGraph& g, int src);

} // namespace tep
