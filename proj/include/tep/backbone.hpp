#pragma once

#include <string>
#include <vector>

#include "tep/instance.hpp"
#include "tep/simplex.hpp"

namespace tep {

/// Directed same-direction flow graph over corridors. At most one direction
/// per corridor; direction +1 points from_bus -> to_bus.
struct FlowOverlay {
    int num_buses = 0;
    std::vector<int> corridor_dir; // per corridor: 0 (absent), +1, -1
    std::vector<std::string> source_labels;

    struct Arc {
        int corridor = -1;
        int tail = -1;
        int head = -1;
    };
    std::vector<Arc> arcs(const TepInstance& inst) const;
};

/// Net corridor flow of a solved model's point: existing flows always count;
/// candidate flows count only when the line is built (y within 1e-5 of 1)
/// for models with binaries, and always for the linear relaxation.
FlowOverlay extract_flow_directions(const MilpModel& model, const std::vector<double>& values,
                                    const TepInstance& inst, double eps_flow = 1e-4);

/// Arc kept iff present with identical direction in every input graph.
FlowOverlay intersect_overlays(const std::vector<FlowOverlay>& graphs);

struct DirectedPath {
    std::vector<int> buses;     // i_0 .. i_|rho|
    std::vector<int> corridors; // one per hop

    int start() const { return buses.front(); }
    int end() const { return buses.back(); }
};

struct PathCaps {
    int max_len = 20;          // maximum number of buses per path
    int max_per_start = 1000;  // maximum paths recorded per starting bus
};

/// Breadth-first simple-path enumeration from every bus, deterministic order
/// (start bus ascending, then BFS layer, then lexicographic successor).
std::vector<DirectedPath> enumerate_paths(const FlowOverlay& overlay, const TepInstance& inst,
                                          const PathCaps& caps = {});

struct ParallelFamily {
    int start = -1;
    int end = -1;
    std::vector<int> members; // indices into the enumerated path list
};

/// Greedy maximal grouping per (start, end) of pairwise intermediate-disjoint
/// paths; families always have >= 2 members.
std::vector<ParallelFamily> group_parallel(const std::vector<DirectedPath>& paths);

std::string dump_overlay(const FlowOverlay& overlay, const TepInstance& inst);
std::string dump_paths(const std::vector<DirectedPath>& paths);

} // namespace tep
