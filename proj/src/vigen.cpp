#include "tep/vigen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tep {

namespace {

std::string path_label(const DirectedPath& path) {
    std::ostringstream out;
    out << "path ";
    for (size_t i = 0; i < path.buses.size(); ++i) out << (i ? "-" : "") << path.buses[i];
    return out.str();
}

int min_weight_line(const std::vector<Line>& lines) {
    int best = -1;
    for (int k = 0; k < static_cast<int>(lines.size()); ++k)
        if (best < 0 || lines[k].reactance * lines[k].capacity <
                            lines[best].reactance * lines[best].capacity)
            best = k;
    return best;
}

const Line& pick_line(const Corridor& co, const LineSelection::Pick& pick) {
    const auto& pool = pick.candidate ? co.candidates : co.existing;
    if (pick.line < 0 || pick.line >= static_cast<int>(pool.size()))
        throw UsageError("line selection index out of range");
    return pool[pick.line];
}

/// Applies the validity guard: a bound below the path's capacity-reactance
/// product cannot be combined with two or more relaxation terms, so it is
/// replaced by the always-valid network-wide sum bound.
double guarded_bound(double bound, double cr, int num_expansion, double safe_bound) {
    if (num_expansion >= 2 && bound < cr - 1e-12) return safe_bound;
    return bound;
}

PathVi theorem_vi(Provenance provenance, const DirectedPath& path, double cr,
                  const std::vector<VariableRef>& build_refs, double bound) {
    PathVi vi;
    vi.provenance = provenance;
    vi.source = path_label(path);
    vi.expr.emplace_back(VariableRef{VarKind::Angle, path.start(), -1}, 1.0);
    vi.expr.emplace_back(VariableRef{VarKind::Angle, path.end(), -1}, -1.0);
    const double slack = bound - cr; // relaxation per unbuilt expansion corridor
    vi.upper.constant = cr + slack * static_cast<double>(build_refs.size());
    vi.lower.constant = -vi.upper.constant;
    for (const auto& ref : build_refs) {
        vi.upper.build_terms.emplace_back(ref, -slack);
        vi.lower.build_terms.emplace_back(ref, slack);
    }
    return vi;
}

} // namespace

LineSelection min_cr_existing_selection(const DirectedPath& path, const TepInstance& inst) {
    LineSelection sel;
    for (int c : path.corridors) {
        const auto& co = inst.corridors[c];
        if (!co.established())
            throw UsageError("min_cr_existing_selection: corridor " + std::to_string(c) +
                             " has no existing lines");
        sel.picks.push_back({false, min_weight_line(co.existing)});
    }
    return sel;
}

LineSelection min_cr_line_selection(const DirectedPath& path, const TepInstance& inst) {
    LineSelection sel;
    for (int c : path.corridors) {
        const auto& co = inst.corridors[c];
        if (co.established()) sel.picks.push_back({false, min_weight_line(co.existing)});
        else if (!co.candidates.empty()) sel.picks.push_back({true, min_weight_line(co.candidates)});
        else throw UsageError("min_cr_line_selection: corridor " + std::to_string(c) +
                              " has no lines at all");
    }
    return sel;
}

CrValue cr_product(const DirectedPath& path, const TepInstance& inst,
                   const LineSelection& selection) {
    if (selection.picks.size() != path.corridors.size())
        throw UsageError("cr_product: selection does not match path length");
    CrValue cr;
    cr.selection = selection;
    for (size_t h = 0; h < path.corridors.size(); ++h) {
        const Line& line = pick_line(inst.corridors[path.corridors[h]], selection.picks[h]);
        cr.value += line.reactance * line.capacity;
    }
    return cr;
}

PathVi lemma1_cut(const DirectedPath& path, const TepInstance& inst,
                  const LineSelection& selection) {
    if (selection.picks.size() != path.corridors.size())
        throw UsageError("lemma1_cut: selection does not match path length");
    PathVi vi;
    vi.provenance = Provenance::Lemma1;
    vi.source = path_label(path);
    double bound = 0.0;
    for (size_t h = 0; h < path.corridors.size(); ++h) {
        const int c = path.corridors[h];
        const auto& co = inst.corridors[c];
        const auto& pick = selection.picks[h];
        if (pick.candidate)
            throw UsageError("lemma1_cut: corridor " + std::to_string(c) +
                             " selected a candidate line");
        const Line& line = pick_line(co, pick);
        // traversal u -> v; x * P = theta_from - theta_to, so the signed term
        // x * s * P equals theta_v - theta_u and the sum telescopes
        const int u = path.buses[h];
        const double sign = (u == co.from_bus) ? -1.0 : 1.0;
        vi.expr.emplace_back(VariableRef{VarKind::FlowExisting, c, pick.line},
                             sign * line.reactance);
        bound += line.reactance * line.capacity;
    }
    vi.lower.constant = -bound;
    vi.upper.constant = bound;
    return vi;
}

std::vector<PathVi> lemma2_cuts(const ParallelFamily& family,
                                const std::vector<DirectedPath>& paths, const TepInstance& inst,
                                const std::vector<LineSelection>& selections) {
    if (family.members.size() < 2)
        throw UsageError("lemma2_cuts: family needs at least two members");
    double min_bound = 0.0;
    bool first = true;
    for (int m : family.members) {
        const double cr = cr_product(paths[m], inst, selections[m]).value;
        if (first || cr < min_bound) min_bound = cr;
        first = false;
    }
    std::vector<PathVi> out;
    for (int m : family.members) {
        PathVi vi = lemma1_cut(paths[m], inst, selections[m]);
        vi.provenance = Provenance::Lemma2;
        vi.lower.constant = -min_bound;
        vi.upper.constant = min_bound;
        vi.source += " (family " + std::to_string(family.start) + "->" +
                     std::to_string(family.end) + ")";
        out.push_back(std::move(vi));
    }
    return out;
}

TheoremContext theorem_context(const TepInstance& inst, const EstablishedGraph& established,
                               int n, int m, const BigMOptions& opts) {
    TheoremContext ctx;
    ctx.upper_bound = big_m_for_pair(inst, established, n, m, opts);
    const auto dist = shortest_distances(established, n);
    if (std::isfinite(dist[m])) ctx.min_established_cr = dist[m];
    for (const auto& co : inst.corridors) {
        double w = 0.0;
        for (const auto& l : co.existing) w = std::max(w, l.reactance * l.capacity);
        for (const auto& l : co.candidates) w = std::max(w, l.reactance * l.capacity);
        ctx.safe_upper_bound += w;
    }
    return ctx;
}

std::vector<PathVi> theorem1_cut(const DirectedPath& path, const TepInstance& inst,
                                 const TheoremContext& ctx) {
    double cr = 0.0;
    std::vector<VariableRef> build_refs;
    for (int c : path.corridors) {
        const auto& co = inst.corridors[c];
        if (co.established()) {
            cr += co.existing[min_weight_line(co.existing)].reactance *
                  co.existing[min_weight_line(co.existing)].capacity;
        } else {
            if (co.candidates.empty())
                throw UsageError("theorem1_cut: corridor " + std::to_string(c) + " has no lines");
            const int k = min_weight_line(co.candidates);
            cr += co.candidates[k].reactance * co.candidates[k].capacity;
            // the path can only exist when at least one line is built; under
            // the ordering convention that is exactly the first build variable
            build_refs.emplace_back(VariableRef{VarKind::Build, c, 0});
        }
    }
    if (build_refs.empty())
        throw UsageError("theorem1_cut: path has no expansion corridors");

    const int ne = static_cast<int>(build_refs.size());
    std::vector<PathVi> out;
    out.push_back(theorem_vi(Provenance::Theorem1, path, cr, build_refs,
                             guarded_bound(ctx.upper_bound, cr, ne, ctx.safe_upper_bound)));
    if (ctx.min_established_cr)
        out.push_back(theorem_vi(
            Provenance::Theorem1Strengthened, path, cr, build_refs,
            guarded_bound(*ctx.min_established_cr, cr, ne, ctx.safe_upper_bound)));
    return out;
}

std::vector<PathVi> theorem2_cut(const LinePath& line_path, const TepInstance& inst,
                                 const TheoremContext& ctx) {
    const auto& path = line_path.path;
    const auto& sel = line_path.selection;
    if (sel.picks.size() != path.corridors.size())
        throw UsageError("theorem2_cut: selection does not match path length");
    double cr = 0.0;
    std::vector<VariableRef> build_refs;
    for (size_t h = 0; h < path.corridors.size(); ++h) {
        const int c = path.corridors[h];
        const auto& pick = sel.picks[h];
        const Line& line = pick_line(inst.corridors[c], pick);
        cr += line.reactance * line.capacity;
        if (pick.candidate) build_refs.emplace_back(VariableRef{VarKind::Build, c, pick.line});
    }
    const int ne = static_cast<int>(build_refs.size());
    std::vector<PathVi> out;
    out.push_back(theorem_vi(Provenance::Theorem2, path, cr, build_refs,
                             guarded_bound(ctx.upper_bound, cr, ne, ctx.safe_upper_bound)));
    if (ctx.min_established_cr) {
        PathVi vi = theorem_vi(
            Provenance::Theorem2, path, cr, build_refs,
            guarded_bound(*ctx.min_established_cr, cr, ne, ctx.safe_upper_bound));
        out.push_back(std::move(vi));
    }
    return out;
}

CutPool generate_cut_pool(const TepInstance& inst, const FlowOverlay& overlay,
                          const PathCaps& caps, const FamilyToggles& toggles,
                          bool symmetry_active, const BigMOptions& big_m_opts) {
    CutPool pool;
    const EstablishedGraph established = established_subgraph(inst);
    const std::vector<DirectedPath> paths = enumerate_paths(overlay, inst, caps);

    std::vector<DirectedPath> lemma_paths;
    std::vector<LineSelection> lemma_selections;
    std::vector<const DirectedPath*> mixed_paths;
    for (const auto& p : paths) {
        const bool all_established =
            std::all_of(p.corridors.begin(), p.corridors.end(),
                        [&](int c) { return inst.corridors[c].established(); });
        if (all_established) {
            lemma_paths.push_back(p);
            lemma_selections.push_back(min_cr_existing_selection(p, inst));
        } else {
            mixed_paths.push_back(&p);
        }
    }

    if (toggles.lemma1)
        for (size_t i = 0; i < lemma_paths.size(); ++i)
            pool.add(lemma1_cut(lemma_paths[i], inst, lemma_selections[i]));

    if (toggles.lemma2)
        for (const auto& family : group_parallel(lemma_paths))
            for (auto& vi : lemma2_cuts(family, lemma_paths, inst, lemma_selections))
                pool.add(std::move(vi));

    const bool use_theorem1 = toggles.theorem1 && symmetry_active;
    const bool use_theorem2 = toggles.theorem2 || (toggles.theorem1 && !symmetry_active);
    if (use_theorem1 || use_theorem2) {
        std::map<std::pair<int, int>, TheoremContext> contexts;
        auto context_for = [&](int a, int b) -> const TheoremContext& {
            const auto key = std::minmax(a, b);
            auto it = contexts.find(key);
            if (it == contexts.end())
                it = contexts.emplace(key, theorem_context(inst, established, key.first,
                                                           key.second, big_m_opts)).first;
            return it->second;
        };
        for (const DirectedPath* p : mixed_paths) {
            const TheoremContext& ctx = context_for(p->start(), p->end());
            if (use_theorem1)
                for (auto& vi : theorem1_cut(*p, inst, ctx)) pool.add(std::move(vi));
            if (use_theorem2)
                for (auto& vi : theorem2_cut({*p, min_cr_line_selection(*p, inst)}, inst, ctx))
                    pool.add(std::move(vi));
        }
    }
    return pool;
}

} // namespace tep
