#include "tep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace tep {

namespace {

/// Per-corridor candidate counts and offsets into model.binaries, plus
/// whether the corridor's candidates are interchangeable.
struct BinaryLayout {
    std::vector<std::pair<int, int>> corridor_line; // (corridor, line) per binary
    std::vector<bool> interchangeable_corridor;     // per corridor
};

BinaryLayout binary_layout(const TepInstance& inst, const MilpModel& model) {
    BinaryLayout layout;
    for (int j : model.binaries) {
        const auto& ref = model.variables[j].ref;
        layout.corridor_line.emplace_back(ref.major, ref.minor);
    }
    layout.interchangeable_corridor.resize(inst.num_corridors(), true);
    for (int c = 0; c < inst.num_corridors(); ++c) {
        const auto& cand = inst.corridors[c].candidates;
        for (size_t k = 1; k < cand.size(); ++k)
            if (cand[k].reactance != cand[0].reactance || cand[k].capacity != cand[0].capacity ||
                cand[k].build_cost != cand[0].build_cost)
                layout.interchangeable_corridor[c] = false;
    }
    return layout;
}

bool ordering_respected(const std::vector<int>& build, const BinaryLayout& layout) {
    for (size_t i = 0; i + 1 < build.size(); ++i) {
        const auto [c, k] = layout.corridor_line[i];
        const auto [c2, k2] = layout.corridor_line[i + 1];
        if (c == c2 && k2 == k + 1 && layout.interchangeable_corridor[c] &&
            build[i + 1] > build[i])
            return false;
    }
    return true;
}

} // namespace

int EnumeratedSolutionSet::feasible_count() const {
    int n = 0;
    for (const auto& a : assignments)
        if (a.feasible()) ++n;
    return n;
}

std::uint64_t instance_fingerprint(const TepInstance& inst) {
    return std::hash<std::string>{}(serialize_instance(inst));
}

EnumeratedSolutionSet enumerate_feasible(const TepInstance& inst, const MilpModel& full_model,
                                         const EnumerateOptions& opts) {
    const int nb = static_cast<int>(full_model.binaries.size());
    if (nb > opts.max_binaries)
        throw UsageError("enumerate_feasible: " + std::to_string(nb) +
                         " binaries exceed the enumeration cap of " +
                         std::to_string(opts.max_binaries));

    const BinaryLayout layout = binary_layout(inst, full_model);

    EnumeratedSolutionSet set;
    set.instance_fingerprint = instance_fingerprint(inst);
    set.total_assignments = 1L << nb;

    std::vector<int> build(nb, 0);
    std::vector<BoundOverride> overrides(nb);
    for (long mask = 0; mask < set.total_assignments; ++mask) {
        for (int i = 0; i < nb; ++i) build[i] = static_cast<int>((mask >> i) & 1);
        if (opts.skip_symmetric_duplicates && !ordering_respected(build, layout)) {
            ++set.skipped_symmetric;
            continue;
        }
        for (int i = 0; i < nb; ++i)
            overrides[i] = {full_model.binaries[i], static_cast<double>(build[i]),
                            static_cast<double>(build[i])};
        const LpSolution lp = solve_lp(full_model, {}, overrides);
        if (lp.status != LpStatus::Optimal && lp.status != LpStatus::Infeasible)
            throw UsageError("enumerate_feasible: LP " + to_string(lp.status) +
                             " at assignment " + std::to_string(mask));
        if (lp.status == LpStatus::Optimal &&
            (set.best_index < 0 || lp.objective < set.best_objective)) {
            set.best_index = static_cast<int>(set.assignments.size());
            set.best_objective = lp.objective;
        }
        set.assignments.push_back({build, lp.status, lp.objective, lp.values});
    }
    return set;
}

CutVerdict verify_cut_validity(const PathVi& cut, const MilpModel& full_model,
                               const EnumeratedSolutionSet& solutions, double tol) {
    std::vector<double> max_obj(full_model.num_vars(), 0.0);
    for (const auto& [ref, coef] : cut.expr) {
        const int j = full_model.index_of(ref.kind, ref.major, ref.minor);
        if (j < 0) throw UsageError("verify_cut_validity: cut references an absent variable");
        max_obj[j] = -coef; // the solver minimizes; negate to maximize the expression
    }
    std::vector<double> min_obj(full_model.num_vars(), 0.0);
    for (int j = 0; j < full_model.num_vars(); ++j) min_obj[j] = -max_obj[j];

    CutVerdict verdict;
    const int nb = static_cast<int>(full_model.binaries.size());
    std::vector<BoundOverride> overrides(nb);
    for (size_t a = 0; a < solutions.assignments.size(); ++a) {
        const auto& asg = solutions.assignments[a];
        if (!asg.feasible()) continue;
        for (int i = 0; i < nb; ++i)
            overrides[i] = {full_model.binaries[i], static_cast<double>(asg.build[i]),
                            static_cast<double>(asg.build[i])};
        const LpSolution hi = solve_lp_with_objective(full_model, max_obj, {}, overrides);
        const LpSolution lo = solve_lp_with_objective(full_model, min_obj, {}, overrides);
        if (hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal)
            throw UsageError("verify_cut_validity: violation LP did not solve");
        const double expr_max = -hi.objective;
        const double expr_min = lo.objective;
        const double ub = cut.upper.eval(full_model, asg.values);
        const double lb = cut.lower.eval(full_model, asg.values);
        const double viol = std::max(expr_max - ub, lb - expr_min);
        if (viol > verdict.worst_violation) {
            verdict.worst_violation = viol;
            verdict.witness = static_cast<int>(a);
        }
    }
    verdict.valid = verdict.worst_violation <= tol;
    return verdict;
}

std::vector<CutVerdict> verify_pool(const CutPool& pool, const MilpModel& full_model,
                                    const EnumeratedSolutionSet& solutions, double tol) {
    std::vector<CutVerdict> out;
    out.reserve(pool.cuts.size());
    for (const auto& cut : pool.cuts)
        out.push_back(verify_cut_validity(cut, full_model, solutions, tol));
    return out;
}

double lr_objective_delta(const MilpModel& linear_relax, const CutPool& pool) {
    std::vector<Row> rows;
    for (int i = 0; i < pool.size(); ++i)
        for (auto& r : pool.cuts[i].rows(linear_relax, i)) rows.push_back(std::move(r));
    const LpSolution base = solve_lp(linear_relax);
    const LpSolution with = solve_lp(linear_relax, rows);
    if (base.status != LpStatus::Optimal || with.status != LpStatus::Optimal)
        throw UsageError("lr_objective_delta: relaxation LP did not solve");
    return with.objective - base.objective;
}

std::string dump_verdicts(const CutPool& pool, const std::vector<CutVerdict>& verdicts) {
    if (pool.cuts.size() != verdicts.size())
        throw UsageError("dump_verdicts: pool and verdict sizes differ");
    std::ostringstream out;
    out << "cut\tprovenance\tsource\tvalid\tworst_violation\twitness\n";
    for (size_t i = 0; i < verdicts.size(); ++i)
        out << i << "\t" << to_string(pool.cuts[i].provenance) << "\t" << pool.cuts[i].source
            << "\t" << (verdicts[i].valid ? "yes" : "no") << "\t" << verdicts[i].worst_violation
            << "\t" << verdicts[i].witness << "\n";
    return out.str();
}

} // namespace tep
