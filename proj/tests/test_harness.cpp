#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "tep/harness.hpp"
#include "tep/oracle.hpp"

using namespace tep;
using tep::testing::fixture;

TEST_CASE("subset labels follow the table convention") {
    using K = RelaxationKind;
    CHECK(subset_label({}) == "N/A");
    CHECK(subset_label({K::Transportation}) == "TR");
    CHECK(subset_label({K::Transportation, K::Hybrid, K::Linear}) == "TR+HR+LR");
}

TEST_CASE("pipeline objective matches the oracle and timings are additive") {
    const TepInstance inst = fixture("fig2_toy");
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Transportation, RelaxationKind::Hybrid,
                          RelaxationKind::Linear};
    config.repetitions = 3;
    const ExperimentReport report = run_pipeline(inst, config, "fig2_toy");
    REQUIRE(report.rows.size() == 1);
    const ExperimentRow& row = report.rows[0];
    REQUIRE(row.error.empty());
    REQUIRE(row.reps.size() == 3);
    CHECK(row.cut_count > 0);

    const MilpModel full = build_full_model(inst, compute_big_m(inst));
    const EnumeratedSolutionSet oracle = enumerate_feasible(inst, full);
    for (const auto& rep : row.reps) {
        CHECK(rep.status == BnbStatus::Optimal);
        CHECK(rep.objective == doctest::Approx(oracle.best_objective).epsilon(1e-9));
        CHECK(rep.total() ==
              doctest::Approx(rep.relax_time + rep.path_search_time + rep.solution_time));
        // objective identical across repetitions
        CHECK(rep.objective == doctest::Approx(row.reps[0].objective).epsilon(1e-9));
    }
}

TEST_CASE("baseline row is appended on request and carries no cuts") {
    const TepInstance inst = fixture("fig1_variant");
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Linear};
    config.include_baseline = true;
    const ExperimentReport report = run_pipeline(inst, config);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].label == "LR");
    CHECK(report.rows[1].label == "N/A");
    CHECK(report.rows[1].cut_count == 0);
    CHECK(report.rows[0].reps[0].objective ==
          doctest::Approx(report.rows[1].reps[0].objective).epsilon(1e-9));
}

TEST_CASE("empty relaxation subset degrades to a baseline-only report") {
    const TepInstance inst = fixture("fig1_variant");
    ExperimentConfig config;
    config.include_baseline = true; // no extra row: the single row already is the baseline
    const ExperimentReport report = run_pipeline(inst, config);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].label == "N/A");
    CHECK(report.rows[0].cut_count == 0);
}

TEST_CASE("sweep emits the seven subsets plus the baseline in table order") {
    const TepInstance inst = fixture("fig1_variant");
    const ExperimentReport report = run_sweep(inst, {}, "fig1_variant");
    REQUIRE(report.rows.size() == 8);
    const std::vector<std::string> expected = {"TR",    "HR",    "LR",       "TR+HR",
                                               "TR+LR", "HR+LR", "TR+HR+LR", "N/A"};
    double reference = 0.0;
    for (size_t i = 0; i < report.rows.size(); ++i) {
        CHECK(report.rows[i].label == expected[i]);
        REQUIRE(report.rows[i].error.empty());
        const double obj = report.rows[i].reps[0].objective;
        if (i == 0) reference = obj;
        // objective invariance across subsets: the cuts are valid
        CHECK(obj == doctest::Approx(reference).epsilon(1e-9));
    }
}

TEST_CASE("injection mode does not move the sweep objective") {
    const TepInstance inst = fixture("fig2_toy");
    double reference = 0.0;
    for (InjectionMode mode :
         {InjectionMode::Upfront, InjectionMode::UserCut, InjectionMode::Lazy}) {
        ExperimentConfig config;
        config.relaxations = {RelaxationKind::Hybrid};
        config.mode = mode;
        const ExperimentReport report = run_pipeline(inst, config);
        REQUIRE(report.rows[0].error.empty());
        const double obj = report.rows[0].reps[0].objective;
        if (mode == InjectionMode::Upfront) reference = obj;
        CHECK(obj == doctest::Approx(reference).epsilon(1e-9));
    }
}

TEST_CASE("fixed seed and config reproduce cut pools and node counts") {
    const TepInstance inst = fixture("garver6");
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Transportation, RelaxationKind::Linear};
    config.seed = 42;
    const ExperimentReport a = run_pipeline(inst, config);
    const ExperimentReport b = run_pipeline(inst, config);
    REQUIRE(a.rows[0].error.empty());
    CHECK(a.rows[0].cut_count == b.rows[0].cut_count);
    CHECK(a.rows[0].cuts_by_provenance == b.rows[0].cuts_by_provenance);
    CHECK(a.rows[0].reps[0].node_count == b.rows[0].reps[0].node_count);
    CHECK(a.rows[0].reps[0].lp_count == b.rows[0].reps[0].lp_count);
}

TEST_CASE("stage failures are recorded on the row instead of escaping") {
    TepInstance inst = fixture("fig1_variant");
    inst.corridors[2].candidates[0].capacity = 0.3; // model becomes infeasible
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Linear};
    const ExperimentReport report = run_pipeline(inst, config);
    REQUIRE(report.rows.size() == 1);
    CHECK_FALSE(report.rows[0].error.empty());
}

TEST_CASE("delimited table has a header and one line per row") {
    const TepInstance inst = fixture("fig1_variant");
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Linear};
    config.include_baseline = true;
    const ExperimentReport report = run_pipeline(inst, config, "fig1_variant");
    const std::string table = emit_report(report, ReportFormat::DelimitedTable);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);
    CHECK(table.find("Relaxation Models") != std::string::npos);
    CHECK(table.find("Relax Time") != std::string::npos);
    CHECK(table.find("Path Search") != std::string::npos);
    CHECK(table.find("Solution") != std::string::npos);
    CHECK(table.find("C+P+R") != std::string::npos);
}

TEST_CASE("structured records round-trip to the same table") {
    const TepInstance inst = fixture("fig2_toy");
    ExperimentConfig config;
    config.relaxations = {RelaxationKind::Hybrid, RelaxationKind::Linear};
    config.include_baseline = true;
    config.repetitions = 2;
    const ExperimentReport report = run_pipeline(inst, config, "fig2_toy");
    const std::string records = emit_report(report, ReportFormat::StructuredRecords);
    const ExperimentReport parsed = report_from_records(records);
    CHECK(emit_report(parsed, ReportFormat::DelimitedTable) ==
          emit_report(report, ReportFormat::DelimitedTable));
    CHECK(emit_report(parsed, ReportFormat::StructuredRecords) == records);
    CHECK_THROWS_AS(report_from_records("{broken"), ParseError);
}
