#pragma once

#include <string>
#include <vector>

#include "tep/cuts.hpp"
#include "tep/simplex.hpp"

namespace tep {

enum class BnbStatus { Optimal, Infeasible, Limit, Failed };

std::string to_string(BnbStatus status);

struct BnbConfig {
    double integrality_tol = 1e-5;
    double gap_tol = 1e-6; // relative: |incumbent - bound| <= gap_tol * max(1, |incumbent|)
    double cut_violation_tol = 1e-6;
    long node_limit = 1'000'000;
    double time_limit_seconds = 1e9;
    bool keep_node_log = true;
};

/// One record per processed node.
struct NodeRecord {
    long id = 0;
    int depth = 0;
    double lp_bound = 0.0;
    double global_bound = 0.0;
    int fractional_count = 0;
    int cuts_added = 0;
    bool lazy_rejected = false;
};

struct BnbResult {
    BnbStatus status = BnbStatus::Failed;
    double objective = 0.0; // incumbent
    double bound = 0.0;     // best bound
    std::vector<double> values;
    long node_count = 0;
    long lp_solve_count = 0;
    long cuts_applied_count = 0;
    long lazy_rejections = 0;
    double wall_time_seconds = 0.0;
    std::vector<NodeRecord> node_log;
};

/// Best-bound branch-and-bound on the model's binary variables, branching on
/// the most fractional one (ties by lowest index). The three injection modes
/// differ only in when pool cuts enter, never in the final optimum:
/// upfront = root rows, usercut = node-LP separation, lazy = integer-candidate
/// screening with rejection.
BnbResult solve_milp(const MilpModel& model, const CutPool& pool, const BnbConfig& config = {});

/// Line-delimited node log for the harness.
std::string dump_node_log(const BnbResult& result);

} // namespace tep
