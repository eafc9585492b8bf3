#pragma once

#include <span>
#include <string>
#include <vector>

#include "tep/model.hpp"

namespace tep {

enum class LpStatus { Optimal, Infeasible, Unbounded, Failed };

std::string to_string(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Failed;
    double objective = 0.0;
    std::vector<double> values; // aligned with model.variables
    int iterations = 0;
};

/// Per-variable bound replacement used by branch-and-bound node fixings.
struct BoundOverride {
    int var = -1;
    double lb = 0.0;
    double ub = 0.0;
};

struct LpTolerances {
    double feasibility = 1e-7; // row and phase-1 residual tolerance
    double reduced_cost = 1e-9;
    double pivot = 1e-9;
    int degenerate_before_bland = 200;
};

/// Bounded-variable primal simplex (two phases, dense basis inverse with
/// periodic refactorization). Integrality marks are ignored.
LpSolution solve_lp(const MilpModel& model, std::span<const Row> extra_rows = {},
                    std::span<const BoundOverride> overrides = {},
                    const LpTolerances& tol = {});

/// Same problem with the model objective replaced (used by the oracle's
/// violation LPs and randomized-objective sampling).
LpSolution solve_lp_with_objective(const MilpModel& model, const std::vector<double>& objective,
                                   std::span<const Row> extra_rows = {},
                                   std::span<const BoundOverride> overrides = {});

struct FeasibilityReport {
    bool feasible = true;
    std::vector<std::string> violated; // row or bound names
};

/// Checks every row (model + extra) and every variable bound at `point`.
/// Throws UsageError when the point does not cover all variables.
FeasibilityReport check_point_feasible(const MilpModel& model, const std::vector<double>& point,
                                       double tol, std::span<const Row> extra_rows = {});

} // namespace tep
