#pragma once

#include <array>
#include <string>
#include <vector>

#include "tep/backbone.hpp"
#include "tep/bnb.hpp"
#include "tep/model.hpp"
#include "tep/vigen.hpp"

namespace tep {

struct ExperimentConfig {
    std::vector<RelaxationKind> relaxations; // empty => baseline-only
    PathCaps caps;
    FamilyToggles families;
    InjectionMode mode = InjectionMode::Upfront;
    unsigned seed = 0; // nonzero => shuffle cut order (seed + repetition index)
    long node_limit = 1'000'000;
    double time_limit_seconds = 1e9;
    int repetitions = 1;
    bool include_baseline = false; // extra row solved without any cuts
    bool symmetry_breaking = true; // applied only when candidates allow it
    BigMOptions big_m;
};

struct RepetitionResult {
    double relax_time = 0.0;       // big-M + relaxation solves + overlay
    double path_search_time = 0.0; // enumeration, grouping, cut generation
    double solution_time = 0.0;    // final MILP
    double objective = 0.0;
    BnbStatus status = BnbStatus::Failed;
    long node_count = 0;
    long lp_count = 0;
    long cuts_applied = 0;
    long lazy_rejections = 0;

    double total() const { return relax_time + path_search_time + solution_time; }
};

struct ExperimentRow {
    std::string label; // relaxation subset, e.g. "TR+HR", or "N/A" for baseline
    int cut_count = 0;
    std::array<int, 5> cuts_by_provenance{}; // indexed by Provenance order
    std::vector<RepetitionResult> reps;
    std::string error; // nonempty when a stage failed; timings up to it retained
};

struct ExperimentReport {
    std::string instance_name;
    std::vector<ExperimentRow> rows;
};

std::string subset_label(const std::vector<RelaxationKind>& subset);

/// relax -> overlay -> paths -> cuts -> solve, repeated `repetitions` times.
/// Produces one row (plus a baseline row when requested).
ExperimentReport run_pipeline(const TepInstance& inst, const ExperimentConfig& config,
                              const std::string& instance_name = "");

/// All seven relaxation subsets in the fixed order TR, HR, LR, TR+HR, TR+LR,
/// HR+LR, TR+HR+LR, plus the no-cut baseline row.
ExperimentReport run_sweep(const TepInstance& inst, ExperimentConfig base,
                           const std::string& instance_name = "");

enum class ReportFormat { DelimitedTable, StructuredRecords };

/// DelimitedTable: tab-separated with mean timings and min/max totals.
/// StructuredRecords: one JSON object per row with all repetition details.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

/// Inverse of emit_report(StructuredRecords); the table emitted from the
/// parsed report matches the one emitted from the original.
ExperimentReport report_from_records(const std::string& records);

} // namespace tep
