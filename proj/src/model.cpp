#include "tep/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace tep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct PotentialGraph {
    std::vector<std::vector<std::pair<int, double>>> adjacency;
    double total_weight = 0.0;
};

// One edge per corridor, weight = max over all lines (existing and
// candidate) of x * capacity.
PotentialGraph potential_graph(const TepInstance& inst) {
    PotentialGraph g;
    g.adjacency.resize(inst.num_buses());
    for (const auto& co : inst.corridors) {
        double w = 0.0;
        for (const auto& l : co.existing) w = std::max(w, l.reactance * l.capacity);
        for (const auto& l : co.candidates) w = std::max(w, l.reactance * l.capacity);
        g.adjacency[co.from_bus].emplace_back(co.to_bus, w);
        g.adjacency[co.to_bus].emplace_back(co.from_bus, w);
        g.total_weight += w;
    }
    return g;
}

void longest_path_dfs(const PotentialGraph& g, int u, int target, double acc,
                      std::vector<char>& visited, double& best) {
    if (u == target) {
        best = std::max(best, acc);
        return;
    }
    for (auto [v, w] : g.adjacency[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        longest_path_dfs(g, v, target, acc + w, visited, best);
        visited[v] = 0;
    }
}

} // namespace

std::string to_string(ModelLabel label) {
    switch (label) {
        case ModelLabel::Full: return "full";
        case ModelLabel::LinearRelax: return "linear_relax";
        case ModelLabel::TransportationRelax: return "transportation_relax";
        case ModelLabel::HybridRelax: return "hybrid_relax";
    }
    return "?";
}

std::string to_string(RelaxationKind kind) {
    switch (kind) {
        case RelaxationKind::Linear: return "linear";
        case RelaxationKind::Transportation: return "transportation";
        case RelaxationKind::Hybrid: return "hybrid";
    }
    return "?";
}

int MilpModel::index_of(VarKind kind, int major, int minor) const {
    auto it = index_.find(VariableRef{kind, major, minor});
    return it == index_.end() ? -1 : it->second;
}

int MilpModel::add_variable(VariableRef ref, double lb, double ub, std::string name) {
    const int idx = num_vars();
    variables.push_back({ref, lb, ub, std::move(name)});
    objective.push_back(0.0);
    index_[ref] = idx;
    return idx;
}

double big_m_for_pair(const TepInstance& inst, const EstablishedGraph& established,
                      int a, int b, const BigMOptions& opts) {
    const auto dist = shortest_distances(established, a);
    if (b >= 0 && b < static_cast<int>(dist.size()) && std::isfinite(dist[b]))
        return dist[b];

    const PotentialGraph pot = potential_graph(inst);
    if (inst.num_buses() <= opts.exact_threshold) {
        std::vector<char> visited(inst.num_buses(), 0);
        visited[a] = 1;
        double best = -1.0;
        longest_path_dfs(pot, a, b, 0.0, visited, best);
        if (best >= 0.0) return best;
    }
    return pot.total_weight;
}

BigMTable compute_big_m(const TepInstance& inst, const BigMOptions& opts) {
    BigMTable table;
    const auto established = established_subgraph(inst);
    table.per_corridor.reserve(inst.corridors.size());
    for (const auto& co : inst.corridors)
        table.per_corridor.push_back(
            big_m_for_pair(inst, established, co.from_bus, co.to_bus, opts));
    return table;
}

std::string big_m_report(const TepInstance& inst, const BigMTable& table) {
    std::ostringstream out;
    out << "corridor\tbig_m\n";
    for (int c = 0; c < inst.num_corridors(); ++c)
        out << inst.corridors[c].from_bus << "-" << inst.corridors[c].to_bus << "\t"
            << fmt(table.per_corridor[c]) << "\n";
    return out.str();
}

MilpModel build_full_model(const TepInstance& inst, const BigMTable& big_m,
                           const BuildOptions& opts) {
    MilpModel m;
    m.label = ModelLabel::Full;
    m.reference_bus = opts.reference_bus;

    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        const std::string tag = std::to_string(co.from_bus) + "_" + std::to_string(co.to_bus);
        for (int k = 0; k < static_cast<int>(co.candidates.size()); ++k) {
            const int idx = m.add_variable({VarKind::Build, c, k}, 0.0, 1.0,
                                           "y_" + tag + "_" + std::to_string(k + 1));
            m.objective[idx] = co.candidates[k].build_cost;
            m.binaries.push_back(idx);
        }
    }
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        const std::string tag = std::to_string(co.from_bus) + "_" + std::to_string(co.to_bus);
        for (int k = 0; k < static_cast<int>(co.existing.size()); ++k)
            m.add_variable({VarKind::FlowExisting, c, k}, -co.existing[k].capacity,
                           co.existing[k].capacity, "p0_" + tag + "_" + std::to_string(k + 1));
    }
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        const std::string tag = std::to_string(co.from_bus) + "_" + std::to_string(co.to_bus);
        for (int k = 0; k < static_cast<int>(co.candidates.size()); ++k)
            m.add_variable({VarKind::FlowCandidate, c, k}, -co.candidates[k].capacity,
                           co.candidates[k].capacity, "pc_" + tag + "_" + std::to_string(k + 1));
    }
    for (const auto& bus : inst.buses) {
        if (bus.gen_capacity <= 0.0) continue;
        const int idx = m.add_variable({VarKind::Generation, bus.id, -1}, 0.0, bus.gen_capacity,
                                       "g_" + std::to_string(bus.id));
        m.objective[idx] = inst.sigma * bus.gen_cost;
    }
    for (const auto& bus : inst.buses) {
        const bool is_ref = bus.id == opts.reference_bus;
        m.add_variable({VarKind::Angle, bus.id, -1}, is_ref ? 0.0 : -kInf, is_ref ? 0.0 : kInf,
                       "th_" + std::to_string(bus.id));
    }

    // power balance: inflow - outflow + generation = demand
    for (const auto& bus : inst.buses) {
        Row row;
        row.sense = Sense::Eq;
        row.rhs = bus.demand;
        row.name = "bal_" + std::to_string(bus.id);
        for (int c = 0; c < inst.num_corridors(); ++c) {
            const auto& co = inst.corridors[c];
            double sign = 0.0;
            if (co.from_bus == bus.id) sign = -1.0;
            else if (co.to_bus == bus.id) sign = 1.0;
            else continue;
            for (int k = 0; k < static_cast<int>(co.existing.size()); ++k)
                row.coeffs.emplace_back(m.index_of(VarKind::FlowExisting, c, k), sign);
            for (int k = 0; k < static_cast<int>(co.candidates.size()); ++k)
                row.coeffs.emplace_back(m.index_of(VarKind::FlowCandidate, c, k), sign);
        }
        if (int g = m.index_of(VarKind::Generation, bus.id); g >= 0)
            row.coeffs.emplace_back(g, 1.0);
        m.rows.push_back(std::move(row));
    }

    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        const std::string tag = std::to_string(co.from_bus) + "_" + std::to_string(co.to_bus);
        const int th_i = m.index_of(VarKind::Angle, co.from_bus);
        const int th_j = m.index_of(VarKind::Angle, co.to_bus);

        // x * P0 = theta_i - theta_j for every existing line
        for (int k = 0; k < static_cast<int>(co.existing.size()); ++k) {
            Row row;
            row.sense = Sense::Eq;
            row.rhs = 0.0;
            row.name = "kcl0_" + tag + "_" + std::to_string(k + 1);
            row.coeffs.emplace_back(m.index_of(VarKind::FlowExisting, c, k),
                                    co.existing[k].reactance);
            row.coeffs.emplace_back(th_i, -1.0);
            row.coeffs.emplace_back(th_j, 1.0);
            m.rows.push_back(std::move(row));
        }

        const double M = big_m.per_corridor.empty() ? 0.0 : big_m.per_corridor[c];
        for (int k = 0; k < static_cast<int>(co.candidates.size()); ++k) {
            const int y = m.index_of(VarKind::Build, c, k);
            const int p = m.index_of(VarKind::FlowCandidate, c, k);
            const double x = co.candidates[k].reactance;
            const double cap = co.candidates[k].capacity;
            const std::string suffix = tag + "_" + std::to_string(k + 1);

            Row hi;
            hi.sense = Sense::Le;
            hi.rhs = M;
            hi.name = "bigm_hi_" + suffix;
            hi.coeffs = {{p, x}, {th_i, -1.0}, {th_j, 1.0}, {y, M}};
            m.rows.push_back(std::move(hi));

            Row lo;
            lo.sense = Sense::Ge;
            lo.rhs = -M;
            lo.name = "bigm_lo_" + suffix;
            lo.coeffs = {{p, x}, {th_i, -1.0}, {th_j, 1.0}, {y, -M}};
            m.rows.push_back(std::move(lo));

            Row link_hi;
            link_hi.sense = Sense::Le;
            link_hi.rhs = 0.0;
            link_hi.name = "link_hi_" + suffix;
            link_hi.coeffs = {{p, 1.0}, {y, -cap}};
            m.rows.push_back(std::move(link_hi));

            Row link_lo;
            link_lo.sense = Sense::Ge;
            link_lo.rhs = 0.0;
            link_lo.name = "link_lo_" + suffix;
            link_lo.coeffs = {{p, 1.0}, {y, cap}};
            m.rows.push_back(std::move(link_lo));
        }

        Row ang_hi;
        ang_hi.sense = Sense::Le;
        ang_hi.rhs = co.angle_limit;
        ang_hi.name = "ang_hi_" + tag;
        ang_hi.coeffs = {{th_i, 1.0}, {th_j, -1.0}};
        m.rows.push_back(std::move(ang_hi));

        Row ang_lo;
        ang_lo.sense = Sense::Ge;
        ang_lo.rhs = -co.angle_limit;
        ang_lo.name = "ang_lo_" + tag;
        ang_lo.coeffs = {{th_i, 1.0}, {th_j, -1.0}};
        m.rows.push_back(std::move(ang_lo));
    }

    return m;
}

MilpModel build_relaxation(const TepInstance& inst, const BigMTable& big_m,
                           RelaxationKind kind, const BuildOptions& opts) {
    MilpModel m = build_full_model(inst, big_m, opts);
    switch (kind) {
        case RelaxationKind::Linear:
            m.label = ModelLabel::LinearRelax;
            m.binaries.clear();
            break;
        case RelaxationKind::Transportation:
            m.label = ModelLabel::TransportationRelax;
            std::erase_if(m.rows, [](const Row& r) {
                return r.name.starts_with("kcl0_") || r.name.starts_with("bigm_");
            });
            break;
        case RelaxationKind::Hybrid:
            m.label = ModelLabel::HybridRelax;
            std::erase_if(m.rows, [](const Row& r) { return r.name.starts_with("bigm_"); });
            break;
    }
    return m;
}

bool candidates_interchangeable(const TepInstance& inst) {
    for (const auto& co : inst.corridors)
        for (size_t k = 1; k < co.candidates.size(); ++k) {
            const auto& a = co.candidates[0];
            const auto& b = co.candidates[k];
            if (a.reactance != b.reactance || a.capacity != b.capacity ||
                a.build_cost != b.build_cost)
                return false;
        }
    return true;
}

void add_symmetry_breaking(MilpModel& model, const TepInstance& inst) {
    if (!candidates_interchangeable(inst))
        throw UsageError("symmetry-breaking refused: a corridor has non-identical candidate "
                         "lines; ordering constraints would cut optimal solutions");
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& co = inst.corridors[c];
        const std::string tag = std::to_string(co.from_bus) + "_" + std::to_string(co.to_bus);
        for (int k = 0; k + 1 < static_cast<int>(co.candidates.size()); ++k) {
            Row row;
            row.sense = Sense::Le;
            row.rhs = 0.0;
            row.name = "sym_" + tag + "_" + std::to_string(k + 1);
            row.coeffs = {{model.index_of(VarKind::Build, c, k + 1), 1.0},
                          {model.index_of(VarKind::Build, c, k), -1.0}};
            model.rows.push_back(std::move(row));
        }
    }
}

std::string export_model_text(const MilpModel& model) {
    std::ostringstream out;
    out << "\\ tep model export: label=" << to_string(model.label) << "\n";
    out << "Minimize\n obj:";
    bool any = false;
    for (int j = 0; j < model.num_vars(); ++j) {
        const double c = model.objective[j];
        if (c == 0.0) continue;
        out << (c < 0 ? " - " : (any ? " + " : " ")) << fmt(std::abs(c)) << " "
            << model.variables[j].name;
        any = true;
    }
    if (!any) out << " 0 " << model.variables.at(0).name;
    out << "\nSubject To\n";
    for (const auto& row : model.rows) {
        out << " " << row.name << ":";
        bool first = true;
        for (const auto& [j, c] : row.coeffs) {
            if (c == 0.0) continue;
            out << (c < 0 ? " - " : (first ? " " : " + ")) << fmt(std::abs(c)) << " "
                << model.variables[j].name;
            first = false;
        }
        if (first) out << " 0 " << model.variables.at(0).name;
        switch (row.sense) {
            case Sense::Le: out << " <= "; break;
            case Sense::Eq: out << " = "; break;
            case Sense::Ge: out << " >= "; break;
        }
        out << fmt(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : model.variables) {
        if (v.lb == -kInf && v.ub == kInf) {
            out << " " << v.name << " free\n";
        } else if (v.lb == v.ub) {
            out << " " << v.name << " = " << fmt(v.lb) << "\n";
        } else {
            out << " ";
            if (v.lb != -kInf) out << fmt(v.lb) << " <= ";
            out << v.name;
            if (v.ub != kInf) out << " <= " << fmt(v.ub);
            out << "\n";
        }
    }
    if (!model.binaries.empty()) {
        out << "Binary\n";
        for (int j : model.binaries) out << " " << model.variables[j].name << "\n";
    }
    out << "End\n";
    return out.str();
}

} // namespace tep
