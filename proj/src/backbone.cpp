#include "tep/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace tep {

std::vector<FlowOverlay::Arc> FlowOverlay::arcs(const TepInstance& inst) const {
    std::vector<Arc> out;
    for (int c = 0; c < static_cast<int>(corridor_dir.size()); ++c) {
        if (corridor_dir[c] == 0) continue;
        const auto& co = inst.corridors[c];
        if (corridor_dir[c] > 0) out.push_back({c, co.from_bus, co.to_bus});
        else out.push_back({c, co.to_bus, co.from_bus});
    }
    return out;
}

FlowOverlay extract_flow_directions(const MilpModel& model, const std::vector<double>& values,
                                    const TepInstance& inst, double eps_flow) {
    FlowOverlay g;
    g.num_buses = inst.num_buses();
    g.corridor_dir.assign(inst.num_corridors(), 0);
    g.source_labels.push_back(to_string(model.label));
    const bool gate_on_build = !model.binaries.empty();
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        double net = 0.0;
        for (int k = 0; k < static_cast<int>(co.existing.size()); ++k)
            net += values[model.index_of(VarKind::FlowExisting, c, k)];
        for (int k = 0; k < static_cast<int>(co.candidates.size()); ++k) {
            const int p = model.index_of(VarKind::FlowCandidate, c, k);
            const int y = model.index_of(VarKind::Build, c, k);
            if (p < 0) continue;
            if (gate_on_build && (y < 0 || values[y] < 1.0 - 1e-5)) continue;
            net += values[p];
        }
        if (net > eps_flow) g.corridor_dir[c] = 1;
        else if (net < -eps_flow) g.corridor_dir[c] = -1;
    }
    return g;
}

FlowOverlay intersect_overlays(const std::vector<FlowOverlay>& graphs) {
    if (graphs.empty()) throw UsageError("intersect_overlays: need at least one graph");
    FlowOverlay out = graphs.front();
    for (size_t i = 1; i < graphs.size(); ++i) {
        const auto& g = graphs[i];
        for (size_t c = 0; c < out.corridor_dir.size(); ++c)
            if (out.corridor_dir[c] != g.corridor_dir[c]) out.corridor_dir[c] = 0;
        for (const auto& label : g.source_labels) out.source_labels.push_back(label);
    }
    return out;
}

std::vector<DirectedPath> enumerate_paths(const FlowOverlay& overlay, const TepInstance& inst,
                                          const PathCaps& caps) {
    if (caps.max_len < 2 || caps.max_per_start < 1)
        throw UsageError("enumerate_paths: max_len >= 2 and max_per_start >= 1 required");

    // successor lists, sorted for the deterministic lexicographic order
    std::vector<std::vector<std::pair<int, int>>> succ(overlay.num_buses); // (head, corridor)
    for (const auto& a : overlay.arcs(inst)) succ[a.tail].emplace_back(a.head, a.corridor);
    for (auto& s : succ) std::sort(s.begin(), s.end());

    std::vector<DirectedPath> out;
    for (int start = 0; start < overlay.num_buses; ++start) {
        int recorded = 0;
        std::deque<DirectedPath> queue;
        queue.push_back({{start}, {}});
        while (!queue.empty() && recorded < caps.max_per_start) {
            DirectedPath p = std::move(queue.front());
            queue.pop_front();
            if (static_cast<int>(p.buses.size()) >= caps.max_len) continue;
            for (auto [head, corridor] : succ[p.buses.back()]) {
                if (std::find(p.buses.begin(), p.buses.end(), head) != p.buses.end())
                    continue; // keep paths simple
                DirectedPath q = p;
                q.buses.push_back(head);
                q.corridors.push_back(corridor);
                out.push_back(q);
                if (++recorded >= caps.max_per_start) break;
                queue.push_back(std::move(q));
            }
        }
    }
    return out;
}

std::vector<ParallelFamily> group_parallel(const std::vector<DirectedPath>& paths) {
    std::vector<ParallelFamily> families; // grown greedily, singletons dropped at the end

    auto intermediates_disjoint = [&](const DirectedPath& a, const DirectedPath& b) {
        for (size_t i = 1; i + 1 < a.buses.size(); ++i)
            for (size_t j = 1; j + 1 < b.buses.size(); ++j)
                if (a.buses[i] == b.buses[j]) return false;
        return true;
    };

    for (int pi = 0; pi < static_cast<int>(paths.size()); ++pi) {
        const auto& p = paths[pi];
        bool placed = false;
        for (auto& fam : families) {
            if (fam.start != p.start() || fam.end != p.end()) continue;
            bool ok = true;
            for (int other : fam.members)
                if (!intermediates_disjoint(p, paths[other])) {
                    ok = false;
                    break;
                }
            if (ok) {
                fam.members.push_back(pi);
                placed = true;
                break;
            }
        }
        if (!placed) families.push_back({p.start(), p.end(), {pi}});
    }

    std::erase_if(families, [](const ParallelFamily& f) { return f.members.size() < 2; });
    return families;
}

std::string dump_overlay(const FlowOverlay& overlay, const TepInstance& inst) {
    std::ostringstream out;
    for (const auto& a : overlay.arcs(inst))
        out << a.tail << "->" << a.head << "\tcorridor=" << a.corridor << "\n";
    return out.str();
}

std::string dump_paths(const std::vector<DirectedPath>& paths) {
    std::ostringstream out;
    for (size_t i = 0; i < paths.size(); ++i) {
        out << i << "\t";
        for (size_t j = 0; j < paths[i].buses.size(); ++j)
            out << (j ? "," : "") << paths[i].buses[j];
        out << "\n";
    }
    return out.str();
}

} // namespace tep
