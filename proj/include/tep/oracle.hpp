#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tep/bnb.hpp"
#include "tep/cuts.hpp"
#include "tep/model.hpp"
#include "tep/simplex.hpp"

namespace tep {

/// One 0/1 build assignment with the status and cheapest dispatch of its
/// fixed-assignment LP.
struct EnumeratedAssignment {
    std::vector<int> build;     // aligned with model.binaries
    LpStatus status = LpStatus::Failed;
    double objective = 0.0;     // investment + generation cost, when Optimal
    std::vector<double> values; // full LP point, when Optimal

    bool feasible() const { return status == LpStatus::Optimal; }
};

/// Exhaustive ground truth for one instance: every build assignment (minus
/// symmetry-skipped duplicates) with its LP verdict.
struct EnumeratedSolutionSet {
    std::uint64_t instance_fingerprint = 0; // hash of the serialized instance
    std::vector<EnumeratedAssignment> assignments;
    long total_assignments = 0; // 2^(number of binaries)
    long skipped_symmetric = 0;
    double best_objective = 0.0;
    int best_index = -1; // -1 when nothing is feasible

    int feasible_count() const;
};

struct EnumerateOptions {
    /// Skip assignments violating the candidate-ordering convention in
    /// corridors whose candidate lines are interchangeable.
    bool skip_symmetric_duplicates = true;
    int max_binaries = 20; // refuse larger enumerations
};

std::uint64_t instance_fingerprint(const TepInstance& inst);

/// Brute force over all build assignments of the full model, solving the
/// fixed-assignment LP for each. Independent of branch-and-bound.
EnumeratedSolutionSet enumerate_feasible(const TepInstance& inst, const MilpModel& full_model,
                                         const EnumerateOptions& opts = {});

struct CutVerdict {
    bool valid = true;
    double worst_violation = 0.0; // max over assignments, clamped at 0 when valid
    int witness = -1;             // assignment index achieving the worst violation
};

/// For every feasible assignment, maximizes and minimizes the cut expression
/// over the fixed-assignment polytope and compares against the cut's bounds
/// evaluated at that assignment. Valid iff no violation exceeds `tol`.
CutVerdict verify_cut_validity(const PathVi& cut, const MilpModel& full_model,
                               const EnumeratedSolutionSet& solutions, double tol = 1e-6);

std::vector<CutVerdict> verify_pool(const CutPool& pool, const MilpModel& full_model,
                                    const EnumeratedSolutionSet& solutions, double tol = 1e-6);

/// Objective change of a linear model when the pool's rows are appended
/// (positive = the cuts tightened the relaxation).
double lr_objective_delta(const MilpModel& linear_relax, const CutPool& pool);

/// One line per cut: provenance, source, verdict, worst violation, witness.
std::string dump_verdicts(const CutPool& pool, const std::vector<CutVerdict>& verdicts);

} // namespace tep
