#include "tep/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace tep {

namespace {

using json = nlohmann::ordered_json;

double require_number(const json& j, const std::string& field, const std::string& where) {
    if (!j.contains(field))
        throw ParseError("missing field '" + field + "' in " + where);
    const auto& v = j.at(field);
    if (!v.is_number())
        throw ParseError("field '" + field + "' in " + where + " is not a number");
    return v.get<double>();
}

int require_int(const json& j, const std::string& field, const std::string& where) {
    if (!j.contains(field))
        throw ParseError("missing field '" + field + "' in " + where);
    const auto& v = j.at(field);
    if (!v.is_number_integer())
        throw ParseError("field '" + field + "' in " + where + " is not an integer");
    return v.get<int>();
}

Line parse_line(const json& j, bool candidate, const std::string& where,
                std::vector<std::string>& problems) {
    Line line;
    line.reactance = require_number(j, "x", where);
    line.capacity = require_number(j, "capacity", where);
    line.build_cost = candidate ? require_number(j, "cost", where) : 0.0;
    if (j.contains("b")) {
        line.susceptance = require_number(j, "b", where);
        if (line.reactance > 0.0) {
            const double expected = -1.0 / line.reactance;
            if (std::abs(line.susceptance - expected) > 1e-9 * std::abs(expected))
                problems.push_back(where + ": susceptance " + std::to_string(line.susceptance) +
                                   " is not -1/x within 1e-9");
        }
    } else if (line.reactance > 0.0) {
        line.susceptance = -1.0 / line.reactance;
    }
    if (line.reactance <= 0.0)
        problems.push_back(where + ": reactance must be > 0");
    if (line.capacity <= 0.0)
        problems.push_back(where + ": capacity must be > 0");
    if (line.build_cost < 0.0)
        problems.push_back(where + ": cost must be >= 0");
    return line;
}

} // namespace

int TepInstance::num_candidate_lines() const {
    int n = 0;
    for (const auto& c : corridors) n += static_cast<int>(c.candidates.size());
    return n;
}

int TepInstance::num_existing_lines() const {
    int n = 0;
    for (const auto& c : corridors) n += static_cast<int>(c.existing.size());
    return n;
}

int TepInstance::corridor_between(int a, int b) const {
    for (int c = 0; c < num_corridors(); ++c) {
        const auto& co = corridors[c];
        if ((co.from_bus == a && co.to_bus == b) || (co.from_bus == b && co.to_bus == a))
            return c;
    }
    return -1;
}

TepInstance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance document is not valid JSON: ") + e.what());
    }

    TepInstance inst;
    std::vector<std::string> problems;

    inst.sigma = doc.contains("sigma") ? require_number(doc, "sigma", "header") : 1.0;
    inst.default_angle_limit = require_number(doc, "default_angle_limit", "header");

    if (!doc.contains("buses") || !doc.at("buses").is_array())
        throw ParseError("missing 'buses' array");
    if (!doc.contains("corridors") || !doc.at("corridors").is_array())
        throw ParseError("missing 'corridors' array");

    for (const auto& jb : doc.at("buses")) {
        const std::string where = "buses[" + std::to_string(inst.buses.size()) + "]";
        Bus b;
        b.id = require_int(jb, "id", where);
        b.demand = require_number(jb, "demand", where);
        b.gen_capacity = require_number(jb, "gen_capacity", where);
        b.gen_cost = require_number(jb, "gen_cost", where);
        if (b.demand < 0.0) problems.push_back(where + ": demand must be >= 0");
        if (b.gen_capacity < 0.0) problems.push_back(where + ": gen_capacity must be >= 0");
        if (b.gen_cost < 0.0) problems.push_back(where + ": gen_cost must be >= 0");
        inst.buses.push_back(b);
    }

    // ids must be unique and dense 0..|B|-1; normalize storage order by id
    std::sort(inst.buses.begin(), inst.buses.end(),
              [](const Bus& a, const Bus& b) { return a.id < b.id; });
    for (int i = 0; i < inst.num_buses(); ++i) {
        if (inst.buses[i].id != i) {
            problems.push_back("bus ids must be unique and dense 0.." +
                               std::to_string(inst.num_buses() - 1));
            break;
        }
    }

    for (const auto& jc : doc.at("corridors")) {
        const std::string where = "corridors[" + std::to_string(inst.corridors.size()) + "]";
        Corridor c;
        c.from_bus = require_int(jc, "from", where);
        c.to_bus = require_int(jc, "to", where);
        c.angle_limit = jc.contains("angle_limit")
                            ? require_number(jc, "angle_limit", where)
                            : inst.default_angle_limit;
        if (c.from_bus >= c.to_bus)
            problems.push_back(where + ": 'from' must be < 'to'");
        if (c.from_bus < 0 || c.from_bus >= inst.num_buses() || c.to_bus < 0 ||
            c.to_bus >= inst.num_buses())
            problems.push_back(where + ": references an unknown bus id");
        if (c.angle_limit <= 0.0)
            problems.push_back(where + ": angle_limit must be > 0");
        if (jc.contains("existing"))
            for (const auto& jl : jc.at("existing"))
                c.existing.push_back(parse_line(
                    jl, false, where + ".existing[" + std::to_string(c.existing.size()) + "]",
                    problems));
        if (jc.contains("candidates"))
            for (const auto& jl : jc.at("candidates"))
                c.candidates.push_back(parse_line(
                    jl, true, where + ".candidates[" + std::to_string(c.candidates.size()) + "]",
                    problems));
        inst.corridors.push_back(c);
    }

    for (size_t a = 0; a < inst.corridors.size(); ++a)
        for (size_t b = a + 1; b < inst.corridors.size(); ++b)
            if (inst.corridors[a].from_bus == inst.corridors[b].from_bus &&
                inst.corridors[a].to_bus == inst.corridors[b].to_bus)
                problems.push_back("corridors[" + std::to_string(b) +
                                   "]: duplicate corridor for bus pair");

    double total_demand = 0.0, total_capacity = 0.0;
    for (const auto& b : inst.buses) {
        total_demand += b.demand;
        total_capacity += b.gen_capacity;
    }
    if (total_capacity < total_demand)
        problems.push_back("total gen_capacity " + std::to_string(total_capacity) +
                           " is below total demand " + std::to_string(total_demand));

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "instance validation failed:";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw ValidationError(msg.str());
    }
    return inst;
}

std::string serialize_instance(const TepInstance& inst) {
    json doc;
    doc["sigma"] = inst.sigma;
    doc["default_angle_limit"] = inst.default_angle_limit;
    doc["buses"] = json::array();
    for (const auto& b : inst.buses) {
        json jb;
        jb["id"] = b.id;
        jb["demand"] = b.demand;
        jb["gen_capacity"] = b.gen_capacity;
        jb["gen_cost"] = b.gen_cost;
        doc["buses"].push_back(jb);
    }
    doc["corridors"] = json::array();
    for (const auto& c : inst.corridors) {
        json jc;
        jc["from"] = c.from_bus;
        jc["to"] = c.to_bus;
        jc["angle_limit"] = c.angle_limit;
        jc["existing"] = json::array();
        for (const auto& l : c.existing) {
            json jl;
            jl["x"] = l.reactance;
            jl["b"] = l.susceptance;
            jl["capacity"] = l.capacity;
            jc["existing"].push_back(jl);
        }
        jc["candidates"] = json::array();
        for (const auto& l : c.candidates) {
            json jl;
            jl["x"] = l.reactance;
            jl["b"] = l.susceptance;
            jl["capacity"] = l.capacity;
            jl["cost"] = l.build_cost;
            jc["candidates"].push_back(jl);
        }
        doc["corridors"].push_back(jc);
    }
    return doc.dump(2) + "\n";
}

TepInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open instance file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

EstablishedGraph established_subgraph(const TepInstance& inst) {
    EstablishedGraph g;
    g.num_buses = inst.num_buses();
    g.adjacency.resize(g.num_buses);
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        if (co.existing.empty()) continue;
        double w = std::numeric_limits<double>::infinity();
        for (const auto& l : co.existing)
            w = std::min(w, l.reactance * l.capacity);
        g.edges.push_back({c, co.from_bus, co.to_bus, w});
        g.adjacency[co.from_bus].emplace_back(co.to_bus, w);
        g.adjacency[co.to_bus].emplace_back(co.from_bus, w);
    }
    return g;
}

std::vector<double> shortest_distances(const EstablishedGraph& g, int src) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.num_buses, inf);
    if (src < 0 || src >= g.num_buses) return dist;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.emplace(0.0, src);
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (auto [v, w] : g.adjacency[u]) {
            if (dist[u] + w < dist[v]) {
                dist[v] = dist[u] + w;
                pq.emplace(dist[v], v);
            }
        }
    }
    return dist;
}

} // namespace tep
