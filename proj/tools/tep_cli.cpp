#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tep/harness.hpp"
#include "tep/oracle.hpp"

namespace {

using namespace tep;

std::vector<RelaxationKind> parse_subsets(const std::string& spec) {
    std::vector<RelaxationKind> out;
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ',')) {
        if (token == "TR" || token == "tr") out.push_back(RelaxationKind::Transportation);
        else if (token == "HR" || token == "hr") out.push_back(RelaxationKind::Hybrid);
        else if (token == "LR" || token == "lr") out.push_back(RelaxationKind::Linear);
        else throw UsageError("unknown relaxation '" + token + "' (expected TR, HR or LR)");
    }
    return out;
}

FamilyToggles parse_families(const std::string& spec) {
    if (spec == "all" || spec.empty()) return {};
    FamilyToggles t{false, false, false, false};
    std::string token;
    std::istringstream in(spec);
    while (std::getline(in, token, ',')) {
        if (token == "lemma1") t.lemma1 = true;
        else if (token == "lemma2") t.lemma2 = true;
        else if (token == "theorem1") t.theorem1 = true;
        else if (token == "theorem2") t.theorem2 = true;
        else throw UsageError("unknown cut family '" + token + "'");
    }
    return t;
}

InjectionMode parse_mode(const std::string& spec) {
    if (spec == "upfront") return InjectionMode::Upfront;
    if (spec == "usercut") return InjectionMode::UserCut;
    if (spec == "lazy") return InjectionMode::Lazy;
    throw UsageError("unknown injection mode '" + spec + "'");
}

struct CommonArgs {
    std::string instance_path;
    std::string subsets = "TR,HR,LR";
    std::string families = "all";
    std::string mode = "upfront";
    int max_len = 20;
    int max_per_start = 1000;
    unsigned seed = 0;
    int reps = 1;
    bool baseline = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_pipeline_flags = true) {
    cmd->add_option("--instance", args.instance_path, "instance JSON path")->required();
    if (with_pipeline_flags) {
        cmd->add_option("--subsets", args.subsets, "relaxation subset, e.g. TR,HR");
        cmd->add_option("--families", args.families,
                        "cut families (all or comma list of lemma1,lemma2,theorem1,theorem2)");
        cmd->add_option("--mode", args.mode, "cut injection mode: upfront, usercut, lazy");
        cmd->add_option("--max-len", args.max_len, "max buses per enumerated path");
        cmd->add_option("--max-per-start", args.max_per_start, "max paths per start bus");
        cmd->add_option("--seed", args.seed, "nonzero shuffles cut order");
        cmd->add_option("--reps", args.reps, "repetitions per configuration");
        cmd->add_flag("--baseline", args.baseline, "include a no-cut baseline row");
    }
}

ExperimentConfig to_config(const CommonArgs& args) {
    ExperimentConfig config;
    config.relaxations = parse_subsets(args.subsets);
    config.families = parse_families(args.families);
    config.mode = parse_mode(args.mode);
    config.caps.max_len = args.max_len;
    config.caps.max_per_start = args.max_per_start;
    config.seed = args.seed;
    config.repetitions = args.reps;
    config.include_baseline = args.baseline;
    return config;
}

/// Rebuilds the pipeline's cut pool without solving the full model.
CutPool pool_for(const TepInstance& inst, const ExperimentConfig& config) {
    const BigMTable big_m = compute_big_m(inst, config.big_m);
    const bool symmetry_active = config.symmetry_breaking && candidates_interchangeable(inst);
    std::vector<FlowOverlay> overlays;
    for (RelaxationKind kind : config.relaxations) {
        MilpModel relax = build_relaxation(inst, big_m, kind);
        if (symmetry_active && !relax.binaries.empty()) add_symmetry_breaking(relax, inst);
        std::vector<double> point;
        if (relax.binaries.empty()) {
            const LpSolution lp = solve_lp(relax);
            if (lp.status != LpStatus::Optimal)
                throw UsageError("relaxation LP " + to_string(lp.status));
            point = lp.values;
        } else {
            const BnbResult r = solve_milp(relax, CutPool{});
            if (r.status != BnbStatus::Optimal)
                throw UsageError("relaxation solve " + to_string(r.status));
            point = r.values;
        }
        overlays.push_back(extract_flow_directions(relax, point, inst));
    }
    if (overlays.empty()) return {};
    CutPool pool = generate_cut_pool(inst, intersect_overlays(overlays), config.caps,
                                     config.families, symmetry_active, config.big_m);
    pool.injection_mode = config.mode;
    return pool;
}

int cmd_solve(const CommonArgs& args) {
    const TepInstance inst = load_instance(args.instance_path);
    const ExperimentConfig config = to_config(args);
    const ExperimentReport report = run_pipeline(inst, config, args.instance_path);
    std::cout << emit_report(report, ReportFormat::DelimitedTable);
    for (const auto& row : report.rows)
        if (!row.error.empty()) return 1;
    return 0;
}

int cmd_relax(const std::string& instance_path, const std::string& kind_spec) {
    const TepInstance inst = load_instance(instance_path);
    const auto kinds = parse_subsets(kind_spec);
    if (kinds.size() != 1) throw UsageError("--kind expects exactly one of TR, HR, LR");
    const BigMTable big_m = compute_big_m(inst);
    MilpModel relax = build_relaxation(inst, big_m, kinds.front());
    if (candidates_interchangeable(inst) && !relax.binaries.empty())
        add_symmetry_breaking(relax, inst);
    std::vector<double> point;
    double objective = 0.0;
    if (relax.binaries.empty()) {
        const LpSolution lp = solve_lp(relax);
        if (lp.status != LpStatus::Optimal)
            throw UsageError("relaxation LP " + to_string(lp.status));
        point = lp.values;
        objective = lp.objective;
    } else {
        const BnbResult r = solve_milp(relax, CutPool{});
        if (r.status != BnbStatus::Optimal)
            throw UsageError("relaxation solve " + to_string(r.status));
        point = r.values;
        objective = r.objective;
    }
    std::cout << "objective\t" << objective << "\n";
    std::cout << dump_overlay(extract_flow_directions(relax, point, inst), inst);
    return 0;
}

int cmd_gencuts(const CommonArgs& args) {
    const TepInstance inst = load_instance(args.instance_path);
    const CutPool pool = pool_for(inst, to_config(args));
    std::cout << dump_cut_pool(pool);
    return 0;
}

int cmd_verify(const CommonArgs& args) {
    const TepInstance inst = load_instance(args.instance_path);
    const ExperimentConfig config = to_config(args);
    const CutPool pool = pool_for(inst, config);
    const BigMTable big_m = compute_big_m(inst, config.big_m);
    const MilpModel full = build_full_model(inst, big_m);
    const EnumeratedSolutionSet solutions = enumerate_feasible(inst, full);
    const auto verdicts = verify_pool(pool, full, solutions);
    std::cout << dump_verdicts(pool, verdicts);
    for (const auto& v : verdicts)
        if (!v.valid) return 1;
    return 0;
}

int cmd_bench(const CommonArgs& args, bool sweep, const std::string& format) {
    const TepInstance inst = load_instance(args.instance_path);
    const ExperimentConfig config = to_config(args);
    const ExperimentReport report = sweep ? run_sweep(inst, config, args.instance_path)
                                          : run_pipeline(inst, config, args.instance_path);
    std::cout << emit_report(report, format == "records" ? ReportFormat::StructuredRecords
                                                         : ReportFormat::DelimitedTable);
    for (const auto& row : report.rows)
        if (!row.error.empty()) return 1;
    return 0;
}

int cmd_export(const CommonArgs& args, bool with_cuts) {
    const TepInstance inst = load_instance(args.instance_path);
    const BigMTable big_m = compute_big_m(inst);
    MilpModel full = build_full_model(inst, big_m);
    if (candidates_interchangeable(inst)) add_symmetry_breaking(full, inst);
    if (with_cuts) {
        const CutPool pool = pool_for(inst, to_config(args));
        for (int i = 0; i < pool.size(); ++i)
            for (auto& row : pool.cuts[i].rows(full, i)) full.rows.push_back(std::move(row));
    }
    std::cout << export_model_text(full);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transmission expansion planning toolkit"};
    app.require_subcommand(1);

    CommonArgs solve_args, gencuts_args, verify_args, bench_args, export_args;
    std::string relax_instance, relax_kind;
    bool bench_sweep = false;
    std::string bench_format = "table";
    bool export_with_cuts = false;

    add_common(app.add_subcommand("solve", "solve the full MILP with the cut pipeline"),
               solve_args);

    auto* relax = app.add_subcommand("relax", "solve one relaxation and print its flow overlay");
    relax->add_option("--instance", relax_instance, "instance JSON path")->required();
    relax->add_option("--kind", relax_kind, "TR, HR or LR")->required();

    add_common(app.add_subcommand("gencuts", "generate and dump the cut pool"), gencuts_args);

    add_common(app.add_subcommand("verify", "certify every generated cut against the oracle"),
               verify_args);

    auto* bench = app.add_subcommand("bench", "timing benchmark");
    add_common(bench, bench_args);
    bench->add_flag("--sweep", bench_sweep, "run all seven relaxation subsets plus baseline");
    bench->add_option("--format", bench_format, "table or records");

    auto* exp = app.add_subcommand("export", "write the model as LP-format text to stdout");
    add_common(exp, export_args);
    exp->add_flag("--with-cuts", export_with_cuts, "append the generated cut rows");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("solve")) return cmd_solve(solve_args);
        if (app.got_subcommand("relax")) return cmd_relax(relax_instance, relax_kind);
        if (app.got_subcommand("gencuts")) return cmd_gencuts(gencuts_args);
        if (app.got_subcommand("verify")) return cmd_verify(verify_args);
        if (app.got_subcommand("bench")) return cmd_bench(bench_args, bench_sweep, bench_format);
        if (app.got_subcommand("export")) return cmd_export(export_args, export_with_cuts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
