#include "tep/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "json.hpp"

namespace tep {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* short_name(RelaxationKind kind) {
    switch (kind) {
        case RelaxationKind::Transportation: return "TR";
        case RelaxationKind::Hybrid: return "HR";
        case RelaxationKind::Linear: return "LR";
    }
    return "?";
}

constexpr std::array<Provenance, 5> kProvenances = {
    Provenance::Lemma1, Provenance::Lemma2, Provenance::Theorem1,
    Provenance::Theorem1Strengthened, Provenance::Theorem2};

RepetitionResult run_once(const TepInstance& inst, const ExperimentConfig& config,
                          bool with_cuts, unsigned rep_seed, ExperimentRow& row) {
    RepetitionResult rep;
    const bool symmetry_active = config.symmetry_breaking && candidates_interchangeable(inst);

    // relax stage: big-M, relaxation solves, flow overlay
    auto t0 = Clock::now();
    const BigMTable big_m = compute_big_m(inst, config.big_m);
    FlowOverlay overlay;
    bool have_overlay = false;
    if (with_cuts) {
        std::vector<FlowOverlay> overlays;
        for (RelaxationKind kind : config.relaxations) {
            MilpModel relax = build_relaxation(inst, big_m, kind);
            if (symmetry_active && !relax.binaries.empty()) add_symmetry_breaking(relax, inst);
            std::vector<double> point;
            if (relax.binaries.empty()) {
                const LpSolution lp = solve_lp(relax);
                if (lp.status != LpStatus::Optimal)
                    throw UsageError(std::string(short_name(kind)) + " relaxation LP " +
                                     to_string(lp.status));
                point = lp.values;
            } else {
                BnbConfig bc;
                bc.node_limit = config.node_limit;
                bc.time_limit_seconds = config.time_limit_seconds;
                bc.keep_node_log = false;
                const BnbResult r = solve_milp(relax, CutPool{}, bc);
                if (r.status != BnbStatus::Optimal)
                    throw UsageError(std::string(short_name(kind)) + " relaxation " +
                                     to_string(r.status));
                point = r.values;
            }
            overlays.push_back(extract_flow_directions(relax, point, inst));
        }
        if (!overlays.empty()) {
            overlay = intersect_overlays(overlays);
            have_overlay = true;
        }
    }
    rep.relax_time = seconds_since(t0);

    // path search stage: enumeration, grouping, cut generation
    t0 = Clock::now();
    CutPool pool;
    pool.injection_mode = config.mode;
    if (with_cuts && have_overlay)
        pool = generate_cut_pool(inst, overlay, config.caps, config.families, symmetry_active,
                                 config.big_m);
    pool.injection_mode = config.mode;
    if (config.seed != 0) {
        std::mt19937 rng(config.seed + rep_seed);
        std::shuffle(pool.cuts.begin(), pool.cuts.end(), rng);
    }
    rep.path_search_time = seconds_since(t0);

    row.cut_count = pool.size();
    for (size_t i = 0; i < kProvenances.size(); ++i)
        row.cuts_by_provenance[i] = pool.count(kProvenances[i]);

    // solution stage: full MILP with the pool
    t0 = Clock::now();
    MilpModel full = build_full_model(inst, big_m);
    if (symmetry_active) add_symmetry_breaking(full, inst);
    BnbConfig bc;
    bc.node_limit = config.node_limit;
    bc.time_limit_seconds = config.time_limit_seconds;
    bc.keep_node_log = false;
    const BnbResult result = solve_milp(full, pool, bc);
    rep.solution_time = seconds_since(t0);

    rep.status = result.status;
    rep.objective = result.objective;
    rep.node_count = result.node_count;
    rep.lp_count = result.lp_solve_count;
    rep.cuts_applied = result.cuts_applied_count;
    rep.lazy_rejections = result.lazy_rejections;
    if (result.status != BnbStatus::Optimal)
        throw UsageError("full model solve " + to_string(result.status));
    return rep;
}

ExperimentRow run_row(const TepInstance& inst, const ExperimentConfig& config, bool with_cuts) {
    ExperimentRow row;
    row.label = with_cuts ? subset_label(config.relaxations) : "N/A";
    for (int r = 0; r < std::max(1, config.repetitions); ++r) {
        try {
            row.reps.push_back(run_once(inst, config, with_cuts, static_cast<unsigned>(r), row));
        } catch (const std::exception& e) {
            row.error = e.what();
            break;
        }
    }
    return row;
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

} // namespace

std::string subset_label(const std::vector<RelaxationKind>& subset) {
    if (subset.empty()) return "N/A";
    std::string label;
    for (size_t i = 0; i < subset.size(); ++i) {
        if (i) label += "+";
        label += short_name(subset[i]);
    }
    return label;
}

ExperimentReport run_pipeline(const TepInstance& inst, const ExperimentConfig& config,
                              const std::string& instance_name) {
    ExperimentReport report;
    report.instance_name = instance_name;
    const bool with_cuts = !config.relaxations.empty();
    report.rows.push_back(run_row(inst, config, with_cuts));
    if (config.include_baseline && with_cuts) report.rows.push_back(run_row(inst, config, false));
    return report;
}

ExperimentReport run_sweep(const TepInstance& inst, ExperimentConfig base,
                           const std::string& instance_name) {
    using K = RelaxationKind;
    const std::vector<std::vector<K>> subsets = {
        {K::Transportation},
        {K::Hybrid},
        {K::Linear},
        {K::Transportation, K::Hybrid},
        {K::Transportation, K::Linear},
        {K::Hybrid, K::Linear},
        {K::Transportation, K::Hybrid, K::Linear},
    };
    ExperimentReport report;
    report.instance_name = instance_name;
    for (const auto& subset : subsets) {
        base.relaxations = subset;
        report.rows.push_back(run_row(inst, base, true));
    }
    report.rows.push_back(run_row(inst, base, false));
    return report;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    if (format == ReportFormat::DelimitedTable) {
        std::ostringstream out;
        out << "Relaxation Models\tCuts\tRelax Time\tPath Search\tSolution\tC+P+R\t"
               "C+P+R Min\tC+P+R Max\tNodes\tObjective\tStatus\n";
        for (const auto& row : report.rows) {
            if (!row.error.empty()) {
                out << row.label << "\tERROR: " << row.error << "\n";
                continue;
            }
            const int n = static_cast<int>(row.reps.size());
            double relax = 0, path = 0, sol = 0, nodes = 0;
            double tmin = 0, tmax = 0;
            for (int i = 0; i < n; ++i) {
                const auto& r = row.reps[i];
                relax += r.relax_time;
                path += r.path_search_time;
                sol += r.solution_time;
                nodes += static_cast<double>(r.node_count);
                const double t = r.total();
                if (i == 0 || t < tmin) tmin = t;
                if (i == 0 || t > tmax) tmax = t;
            }
            relax /= n;
            path /= n;
            sol /= n;
            out << row.label << "\t" << row.cut_count << "\t" << fmt(relax) << "\t" << fmt(path)
                << "\t" << fmt(sol) << "\t" << fmt(relax + path + sol) << "\t" << fmt(tmin)
                << "\t" << fmt(tmax) << "\t" << fmt(nodes / n) << "\t"
                << fmt(row.reps.front().objective) << "\t"
                << to_string(row.reps.front().status) << "\n";
        }
        return out.str();
    }

    // structured records: one JSON object per row
    std::ostringstream out;
    for (const auto& row : report.rows) {
        nlohmann::ordered_json j;
        j["instance"] = report.instance_name;
        j["relaxation_models"] = row.label;
        j["cut_count"] = row.cut_count;
        nlohmann::ordered_json prov;
        for (size_t i = 0; i < kProvenances.size(); ++i)
            prov[to_string(kProvenances[i])] = row.cuts_by_provenance[i];
        j["cuts_by_provenance"] = prov;
        if (!row.error.empty()) j["error"] = row.error;
        nlohmann::ordered_json reps = nlohmann::ordered_json::array();
        for (const auto& r : row.reps) {
            nlohmann::ordered_json rj;
            rj["relax_time"] = r.relax_time;
            rj["path_search_time"] = r.path_search_time;
            rj["solution_time"] = r.solution_time;
            rj["objective"] = r.objective;
            rj["status"] = to_string(r.status);
            rj["node_count"] = r.node_count;
            rj["lp_count"] = r.lp_count;
            rj["cuts_applied"] = r.cuts_applied;
            rj["lazy_rejections"] = r.lazy_rejections;
            reps.push_back(std::move(rj));
        }
        j["repetitions"] = std::move(reps);
        out << j.dump() << "\n";
    }
    return out.str();
}

ExperimentReport report_from_records(const std::string& records) {
    ExperimentReport report;
    std::istringstream in(records);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("report_from_records: ") + e.what());
        }
        report.instance_name = j.value("instance", "");
        ExperimentRow row;
        row.label = j.at("relaxation_models").get<std::string>();
        row.cut_count = j.at("cut_count").get<int>();
        for (size_t i = 0; i < kProvenances.size(); ++i)
            row.cuts_by_provenance[i] =
                j.at("cuts_by_provenance").at(to_string(kProvenances[i])).get<int>();
        row.error = j.value("error", "");
        for (const auto& rj : j.at("repetitions")) {
            RepetitionResult r;
            r.relax_time = rj.at("relax_time").get<double>();
            r.path_search_time = rj.at("path_search_time").get<double>();
            r.solution_time = rj.at("solution_time").get<double>();
            r.objective = rj.at("objective").get<double>();
            const std::string status = rj.at("status").get<std::string>();
            if (status == "optimal") r.status = BnbStatus::Optimal;
            else if (status == "infeasible") r.status = BnbStatus::Infeasible;
            else if (status == "limit") r.status = BnbStatus::Limit;
            else r.status = BnbStatus::Failed;
            r.node_count = rj.at("node_count").get<long>();
            r.lp_count = rj.at("lp_count").get<long>();
            r.cuts_applied = rj.at("cuts_applied").get<long>();
            r.lazy_rejections = rj.at("lazy_rejections").get<long>();
            row.reps.push_back(r);
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace tep
