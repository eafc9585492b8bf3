#include "tep/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace tep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
    double bound = -kInf;
    int depth = 0;
    long id = 0;
    std::vector<BoundOverride> fixings;
    std::vector<int> active_cuts; // indices into the pool
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        if (a.bound != b.bound) return a.bound > b.bound; // min bound first
        if (a.depth != b.depth) return a.depth < b.depth; // then deepest
        return a.id > b.id;                               // then oldest
    }
};

} // namespace

std::string to_string(BnbStatus status) {
    switch (status) {
        case BnbStatus::Optimal: return "optimal";
        case BnbStatus::Infeasible: return "infeasible";
        case BnbStatus::Limit: return "limit";
        case BnbStatus::Failed: return "failed";
    }
    return "?";
}

BnbResult solve_milp(const MilpModel& model, const CutPool& pool, const BnbConfig& config) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    BnbResult res;

    // resolve all pool cuts against this model once
    std::vector<std::vector<Row>> cut_rows;
    cut_rows.reserve(pool.cuts.size());
    for (int i = 0; i < pool.size(); ++i) cut_rows.push_back(pool.cuts[i].rows(model, i));

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    long next_id = 0;

    Node root;
    root.id = next_id++;
    if (pool.injection_mode == InjectionMode::Upfront) {
        root.active_cuts.resize(pool.size());
        for (int i = 0; i < pool.size(); ++i) root.active_cuts[i] = i;
        res.cuts_applied_count = pool.size();
    }
    open.push(std::move(root));

    bool have_incumbent = false;
    double incumbent = kInf;
    std::vector<double> incumbent_values;
    double global_bound = -kInf;
    bool hit_limit = false;
    bool failed = false;

    while (!open.empty()) {
        if (res.node_count >= config.node_limit || elapsed() > config.time_limit_seconds) {
            hit_limit = true;
            break;
        }
        Node node = open.top();
        open.pop();

        global_bound = std::max(global_bound, node.bound);
        const double prune_tol = config.gap_tol * std::max(1.0, std::abs(incumbent));
        if (have_incumbent && node.bound >= incumbent - prune_tol) continue;

        ++res.node_count;

        auto assemble_rows = [&](const std::vector<int>& active) {
            std::vector<Row> rows;
            for (int ci : active)
                for (const auto& r : cut_rows[ci]) rows.push_back(r);
            return rows;
        };

        std::vector<Row> extra = assemble_rows(node.active_cuts);
        LpSolution lp = solve_lp(model, extra, node.fixings);
        ++res.lp_solve_count;

        // usercut mode: separate the pool against this node's LP optimum
        int cuts_added_here = 0;
        if (pool.injection_mode == InjectionMode::UserCut) {
            bool added = true;
            while (added && lp.status == LpStatus::Optimal) {
                added = false;
                for (int ci = 0; ci < pool.size(); ++ci) {
                    if (std::find(node.active_cuts.begin(), node.active_cuts.end(), ci) !=
                        node.active_cuts.end())
                        continue;
                    if (pool.cuts[ci].violation(model, lp.values) > config.cut_violation_tol) {
                        node.active_cuts.push_back(ci);
                        ++cuts_added_here;
                        ++res.cuts_applied_count;
                        added = true;
                    }
                }
                if (added) {
                    extra = assemble_rows(node.active_cuts);
                    lp = solve_lp(model, extra, node.fixings);
                    ++res.lp_solve_count;
                }
            }
        }

        bool lazy_rejected_here = false;
        bool prune_node = false;
        int frac_count = 0;
        int branch_var = -1;

        while (true) {
            if (lp.status == LpStatus::Infeasible) {
                prune_node = true;
                break;
            }
            if (lp.status != LpStatus::Optimal) {
                failed = true;
                break;
            }
            if (have_incumbent &&
                lp.objective >= incumbent - config.gap_tol * std::max(1.0, std::abs(incumbent))) {
                prune_node = true;
                break;
            }

            frac_count = 0;
            branch_var = -1;
            double most_frac = config.integrality_tol;
            for (int j : model.binaries) {
                const double v = lp.values[j];
                const double frac = std::abs(v - std::round(v));
                if (frac > config.integrality_tol) {
                    ++frac_count;
                    if (frac > most_frac) {
                        most_frac = frac;
                        branch_var = j;
                    }
                }
            }

            if (frac_count > 0) break; // branch below

            // integer candidate
            if (pool.injection_mode == InjectionMode::Lazy) {
                std::vector<int> violated;
                for (int ci = 0; ci < pool.size(); ++ci) {
                    if (std::find(node.active_cuts.begin(), node.active_cuts.end(), ci) !=
                        node.active_cuts.end())
                        continue;
                    if (pool.cuts[ci].violation(model, lp.values) > config.cut_violation_tol)
                        violated.push_back(ci);
                }
                if (!violated.empty()) {
                    lazy_rejected_here = true;
                    ++res.lazy_rejections;
                    for (int ci : violated) {
                        node.active_cuts.push_back(ci);
                        ++cuts_added_here;
                        ++res.cuts_applied_count;
                    }
                    extra = assemble_rows(node.active_cuts);
                    lp = solve_lp(model, extra, node.fixings);
                    ++res.lp_solve_count;
                    continue; // rescreen the resolved point
                }
            }
            // accept incumbent
            if (!have_incumbent || lp.objective < incumbent) {
                have_incumbent = true;
                incumbent = lp.objective;
                incumbent_values = lp.values;
            }
            prune_node = true;
            break;
        }

        if (config.keep_node_log)
            res.node_log.push_back({node.id, node.depth,
                                    lp.status == LpStatus::Optimal ? lp.objective : kInf,
                                    global_bound, frac_count, cuts_added_here,
                                    lazy_rejected_here});
        if (failed) break;
        if (prune_node) continue;

        // branch on the most fractional binary
        for (double fix : {0.0, 1.0}) {
            Node child;
            child.bound = lp.objective;
            child.depth = node.depth + 1;
            child.id = next_id++;
            child.fixings = node.fixings;
            child.fixings.push_back({branch_var, fix, fix});
            child.active_cuts = node.active_cuts;
            open.push(std::move(child));
        }
    }

    res.wall_time_seconds = elapsed();
    if (failed) {
        res.status = BnbStatus::Failed;
        return res;
    }
    if (hit_limit) {
        res.status = BnbStatus::Limit;
        res.objective = incumbent;
        res.bound = open.empty() ? (have_incumbent ? incumbent : global_bound) : open.top().bound;
        res.values = incumbent_values;
        return res;
    }
    if (!have_incumbent) {
        res.status = BnbStatus::Infeasible;
        return res;
    }
    res.status = BnbStatus::Optimal;
    res.objective = incumbent;
    res.bound = incumbent;
    res.values = std::move(incumbent_values);
    return res;
}

std::string dump_node_log(const BnbResult& result) {
    std::ostringstream out;
    out << "node\tdepth\tlp_bound\tglobal_bound\tfractional\tcuts_added\tlazy_rejected\n";
    for (const auto& r : result.node_log)
        out << r.id << "\t" << r.depth << "\t" << r.lp_bound << "\t" << r.global_bound << "\t"
            << r.fractional_count << "\t" << r.cuts_added << "\t" << (r.lazy_rejected ? 1 : 0)
            << "\n";
    return out.str();
}

} // namespace tep
