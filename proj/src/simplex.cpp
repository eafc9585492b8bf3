#include "tep/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum VarState : signed char { Basic = 0, AtLower = 1, AtUpper = 2, FreeAtZero = 3 };

// Phase 1 starts from the slack/artificial basis and minimizes the total
// artificial value; phase 2 continues on the true objective with the
// artificials pinned to zero.
class BoundedSimplex {
  public:
    BoundedSimplex(const MilpModel& model, std::span<const Row> extra_rows,
                   std::span<const BoundOverride> overrides, const std::vector<double>& objective,
                   const LpTolerances& tol)
        : tol_(tol), nstruct_(model.num_vars()) {
        rows_.reserve(model.rows.size() + extra_rows.size());
        for (const auto& r : model.rows) rows_.push_back(&r);
        for (const auto& r : extra_rows) rows_.push_back(&r);
        m_ = static_cast<int>(rows_.size());
        ntot_ = nstruct_ + 2 * m_;

        cols_.resize(ntot_);
        lo_.assign(ntot_, 0.0);
        hi_.assign(ntot_, 0.0);
        cost1_.assign(ntot_, 0.0);
        cost2_.assign(ntot_, 0.0);
        x_.assign(ntot_, 0.0);
        state_.assign(ntot_, AtLower);

        for (int j = 0; j < nstruct_; ++j) {
            lo_[j] = model.variables[j].lb;
            hi_[j] = model.variables[j].ub;
            cost2_[j] = objective[j];
        }
        for (const auto& ov : overrides) {
            lo_[ov.var] = ov.lb;
            hi_[ov.var] = ov.ub;
        }
        b_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            b_[i] = rows_[i]->rhs;
            for (const auto& [j, a] : rows_[i]->coeffs)
                if (a != 0.0) cols_[j].emplace_back(i, a);
            const int s = nstruct_ + i;
            cols_[s].emplace_back(i, 1.0);
            switch (rows_[i]->sense) {
                case Sense::Le: lo_[s] = 0.0; hi_[s] = kInf; break;
                case Sense::Eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
                case Sense::Ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
            }
        }
    }

    LpSolution run() {
        LpSolution sol;
        sol.values.assign(nstruct_, 0.0);
        if (m_ == 0) return solve_unconstrained(sol);

        initialize_basis();
        if (!factorize()) {
            sol.status = LpStatus::Failed;
            return sol;
        }
        compute_basics();

        LpStatus st = optimize(cost1_, /*phase1=*/true);
        if (st != LpStatus::Optimal) {
            sol.status = st;
            sol.iterations = iters_;
            return sol;
        }
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i) infeas += x_[nstruct_ + m_ + i];
        if (infeas > tol_.feasibility) {
            sol.status = LpStatus::Infeasible;
            sol.iterations = iters_;
            return sol;
        }
        // pin artificials for phase 2
        for (int i = 0; i < m_; ++i) hi_[nstruct_ + m_ + i] = 0.0;

        st = optimize(cost2_, /*phase1=*/false);
        sol.status = st;
        sol.iterations = iters_;
        if (st == LpStatus::Optimal || st == LpStatus::Unbounded) {
            for (int j = 0; j < nstruct_; ++j) sol.values[j] = x_[j];
            sol.objective = 0.0;
            for (int j = 0; j < nstruct_; ++j) sol.objective += cost2_[j] * x_[j];
        }
        return sol;
    }

  private:
    LpSolution solve_unconstrained(LpSolution& sol) {
        sol.status = LpStatus::Optimal;
        sol.objective = 0.0;
        for (int j = 0; j < nstruct_; ++j) {
            double v;
            if (cost2_[j] > 0.0) v = lo_[j];
            else if (cost2_[j] < 0.0) v = hi_[j];
            else v = initial_value(j);
            if (!std::isfinite(v)) {
                sol.status = LpStatus::Unbounded;
                v = 0.0;
            }
            sol.values[j] = v;
            sol.objective += cost2_[j] * v;
        }
        return sol;
    }

    double initial_value(int j) const {
        if (lo_[j] == -kInf && hi_[j] == kInf) return 0.0;
        if (lo_[j] == -kInf) return hi_[j];
        if (hi_[j] == kInf) return lo_[j];
        return std::abs(lo_[j]) <= std::abs(hi_[j]) ? lo_[j] : hi_[j];
    }

    void set_nonbasic_state(int j) {
        if (lo_[j] == -kInf && hi_[j] == kInf) {
            state_[j] = FreeAtZero;
            x_[j] = 0.0;
        } else if (x_[j] == lo_[j]) {
            state_[j] = AtLower;
        } else {
            state_[j] = AtUpper;
        }
    }

    void initialize_basis() {
        basic_.assign(m_, -1);
        for (int j = 0; j < nstruct_; ++j) {
            x_[j] = initial_value(j);
            set_nonbasic_state(j);
        }
        std::vector<double> residual = b_;
        for (int j = 0; j < nstruct_; ++j)
            if (x_[j] != 0.0)
                for (const auto& [i, a] : cols_[j]) residual[i] -= a * x_[j];

        for (int i = 0; i < m_; ++i) {
            const int s = nstruct_ + i;
            const int t = nstruct_ + m_ + i;
            const double r = residual[i];
            if (r >= lo_[s] - 1e-12 && r <= hi_[s] + 1e-12) {
                basic_[i] = s;
                state_[s] = Basic;
                x_[s] = r;
                lo_[t] = hi_[t] = 0.0; // artificial unused
                x_[t] = 0.0;
                state_[t] = AtLower;
                cols_[t].emplace_back(i, 1.0);
            } else {
                const double clamped = std::clamp(r, lo_[s], hi_[s]);
                x_[s] = clamped;
                set_nonbasic_state(s);
                const double leftover = r - clamped;
                cols_[t].emplace_back(i, leftover > 0 ? 1.0 : -1.0);
                lo_[t] = 0.0;
                hi_[t] = kInf;
                x_[t] = std::abs(leftover);
                basic_[i] = t;
                state_[t] = Basic;
                cost1_[t] = 1.0;
            }
        }
    }

    bool factorize() {
        // dense Gauss-Jordan inverse of the basis matrix
        std::vector<double> B(static_cast<size_t>(m_) * m_, 0.0);
        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            for (const auto& [i, a] : cols_[basic_[k]]) B[static_cast<size_t>(i) * m_ + k] = a;
            binv_[static_cast<size_t>(k) * m_ + k] = 1.0;
        }
        std::vector<int> perm(m_);
        for (int i = 0; i < m_; ++i) perm[i] = i;
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            double best = std::abs(B[static_cast<size_t>(col) * m_ + col]);
            for (int i = col + 1; i < m_; ++i) {
                const double v = std::abs(B[static_cast<size_t>(i) * m_ + col]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best < 1e-11) return false;
            if (piv != col) {
                for (int j = 0; j < m_; ++j) {
                    std::swap(B[static_cast<size_t>(piv) * m_ + j],
                              B[static_cast<size_t>(col) * m_ + j]);
                    std::swap(binv_[static_cast<size_t>(piv) * m_ + j],
                              binv_[static_cast<size_t>(col) * m_ + j]);
                }
            }
            const double inv = 1.0 / B[static_cast<size_t>(col) * m_ + col];
            for (int j = 0; j < m_; ++j) {
                B[static_cast<size_t>(col) * m_ + j] *= inv;
                binv_[static_cast<size_t>(col) * m_ + j] *= inv;
            }
            for (int i = 0; i < m_; ++i) {
                if (i == col) continue;
                const double f = B[static_cast<size_t>(i) * m_ + col];
                if (f == 0.0) continue;
                for (int j = 0; j < m_; ++j) {
                    B[static_cast<size_t>(i) * m_ + j] -= f * B[static_cast<size_t>(col) * m_ + j];
                    binv_[static_cast<size_t>(i) * m_ + j] -=
                        f * binv_[static_cast<size_t>(col) * m_ + j];
                }
            }
        }
        return true;
    }

    void compute_basics() {
        std::vector<double> rhs = b_;
        for (int j = 0; j < ntot_; ++j) {
            if (state_[j] == Basic || x_[j] == 0.0) continue;
            for (const auto& [i, a] : cols_[j]) rhs[i] -= a * x_[j];
        }
        for (int k = 0; k < m_; ++k) {
            double v = 0.0;
            const double* row = &binv_[static_cast<size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) v += row[i] * rhs[i];
            x_[basic_[k]] = v;
        }
    }

    std::vector<double> duals(const std::vector<double>& cost) const {
        std::vector<double> pi(m_, 0.0);
        for (int k = 0; k < m_; ++k) {
            const double cb = cost[basic_[k]];
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) pi[i] += cb * row[i];
        }
        return pi;
    }

    double reduced_cost(int j, const std::vector<double>& cost,
                        const std::vector<double>& pi) const {
        double d = cost[j];
        for (const auto& [i, a] : cols_[j]) d -= pi[i] * a;
        return d;
    }

    LpStatus optimize(const std::vector<double>& cost, bool phase1) {
        const int maxit = 5000 + 100 * (m_ + nstruct_);
        int degenerate_streak = 0;
        bool bland = false;
        int since_refactor = 0;

        while (true) {
            if (++iters_ > maxit) return LpStatus::Failed;
            const auto pi = duals(cost);

            int q = -1, dir = 0;
            double best_merit = tol_.reduced_cost;
            for (int j = 0; j < ntot_; ++j) {
                if (state_[j] == Basic) continue;
                if (hi_[j] - lo_[j] < 1e-15) continue; // fixed
                const double d = reduced_cost(j, cost, pi);
                int cand_dir = 0;
                if (state_[j] == AtLower && d < -tol_.reduced_cost) cand_dir = 1;
                else if (state_[j] == AtUpper && d > tol_.reduced_cost) cand_dir = -1;
                else if (state_[j] == FreeAtZero && std::abs(d) > tol_.reduced_cost)
                    cand_dir = d < 0 ? 1 : -1;
                if (cand_dir == 0) continue;
                if (bland) {
                    q = j;
                    dir = cand_dir;
                    break;
                }
                if (std::abs(d) > best_merit) {
                    best_merit = std::abs(d);
                    q = j;
                    dir = cand_dir;
                }
            }
            if (q < 0) return LpStatus::Optimal;

            // ftran
            std::vector<double> alpha(m_, 0.0);
            for (const auto& [i, a] : cols_[q])
                for (int k = 0; k < m_; ++k) alpha[k] += binv_[static_cast<size_t>(k) * m_ + i] * a;

            // ratio test: entering moves by t >= 0 in direction dir
            double best_t = kInf;
            int leave = -1; // -1 means bound flip of the entering variable
            if (std::isfinite(lo_[q]) && std::isfinite(hi_[q])) best_t = hi_[q] - lo_[q];
            for (int k = 0; k < m_; ++k) {
                const int bj = basic_[k];
                const double az = dir * alpha[k];
                double t;
                if (az > tol_.pivot) {
                    if (lo_[bj] == -kInf) continue;
                    t = (x_[bj] - lo_[bj]) / az;
                } else if (az < -tol_.pivot) {
                    if (hi_[bj] == kInf) continue;
                    t = (hi_[bj] - x_[bj]) / (-az);
                } else {
                    continue;
                }
                t = std::max(t, 0.0);
                if (t < best_t - 1e-9) {
                    best_t = t;
                    leave = k;
                } else if (t <= best_t + 1e-9) {
                    // tie: pick the stabler pivot, or the lowest variable
                    // index under Bland's rule
                    const bool take =
                        leave < 0 ||
                        (bland ? bj < basic_[leave]
                               : std::abs(alpha[k]) > std::abs(alpha[leave]));
                    if (take) {
                        best_t = std::min(best_t, t);
                        leave = k;
                    }
                }
            }
            if (!std::isfinite(best_t)) {
                // phase 1 objective is bounded below, so this is numerical
                return phase1 ? LpStatus::Failed : LpStatus::Unbounded;
            }

            // apply the step
            for (int k = 0; k < m_; ++k) x_[basic_[k]] -= dir * alpha[k] * best_t;
            if (leave < 0) {
                x_[q] = dir > 0 ? hi_[q] : lo_[q]; // bound flip
                state_[q] = dir > 0 ? AtUpper : AtLower;
            } else {
                x_[q] = (state_[q] == FreeAtZero ? 0.0
                                                 : (state_[q] == AtLower ? lo_[q] : hi_[q])) +
                        dir * best_t;
                const int out = basic_[leave];
                if (dir * alpha[leave] > 0) {
                    x_[out] = lo_[out];
                    state_[out] = AtLower;
                } else {
                    x_[out] = hi_[out];
                    state_[out] = AtUpper;
                }
                basic_[leave] = q;
                state_[q] = Basic;
                update_binv(leave, alpha);
                if (++since_refactor >= 64) {
                    since_refactor = 0;
                    if (!factorize()) return LpStatus::Failed;
                    compute_basics();
                }
            }

            if (best_t < 1e-10) {
                if (++degenerate_streak > tol_.degenerate_before_bland) bland = true;
            } else {
                degenerate_streak = 0;
            }
        }
    }

    void update_binv(int r, const std::vector<double>& alpha) {
        const double piv = alpha[r];
        double* rrow = &binv_[static_cast<size_t>(r) * m_];
        for (int j = 0; j < m_; ++j) rrow[j] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = alpha[i];
            if (f == 0.0) continue;
            double* irow = &binv_[static_cast<size_t>(i) * m_];
            for (int j = 0; j < m_; ++j) irow[j] -= f * rrow[j];
        }
    }

    LpTolerances tol_;
    int nstruct_ = 0, m_ = 0, ntot_ = 0;
    std::vector<const Row*> rows_;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, hi_, cost1_, cost2_, x_, b_, binv_;
    std::vector<signed char> state_;
    std::vector<int> basic_;
    int iters_ = 0;
};

} // namespace

std::string to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Failed: return "failed";
    }
    return "?";
}

LpSolution solve_lp(const MilpModel& model, std::span<const Row> extra_rows,
                    std::span<const BoundOverride> overrides, const LpTolerances& tol) {
    if (model.num_vars() == 0) throw UsageError("solve_lp: model has no variables");
    BoundedSimplex s(model, extra_rows, overrides, model.objective, tol);
    return s.run();
}

LpSolution solve_lp_with_objective(const MilpModel& model, const std::vector<double>& objective,
                                   std::span<const Row> extra_rows,
                                   std::span<const BoundOverride> overrides) {
    if (static_cast<int>(objective.size()) != model.num_vars())
        throw UsageError("solve_lp_with_objective: objective size mismatch");
    BoundedSimplex s(model, extra_rows, overrides, objective, LpTolerances{});
    return s.run();
}

FeasibilityReport check_point_feasible(const MilpModel& model, const std::vector<double>& point,
                                       double tol, std::span<const Row> extra_rows) {
    if (static_cast<int>(point.size()) != model.num_vars())
        throw UsageError("check_point_feasible: point does not cover all variables");
    FeasibilityReport rep;
    auto check_row = [&](const Row& row) {
        double lhs = 0.0;
        for (const auto& [j, a] : row.coeffs) lhs += a * point[j];
        bool ok = true;
        switch (row.sense) {
            case Sense::Le: ok = lhs <= row.rhs + tol; break;
            case Sense::Eq: ok = std::abs(lhs - row.rhs) <= tol; break;
            case Sense::Ge: ok = lhs >= row.rhs - tol; break;
        }
        if (!ok) rep.violated.push_back(row.name);
    };
    for (const auto& row : model.rows) check_row(row);
    for (const auto& row : extra_rows) check_row(row);
    for (int j = 0; j < model.num_vars(); ++j) {
        const auto& v = model.variables[j];
        if (point[j] < v.lb - tol || point[j] > v.ub + tol)
            rep.violated.push_back("bound:" + v.name);
    }
    rep.feasible = rep.violated.empty();
    return rep;
}

} // namespace tep
