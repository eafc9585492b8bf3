#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tep/model.hpp"

namespace tep {

enum class Provenance { Lemma1, Lemma2, Theorem1, Theorem1Strengthened, Theorem2 };

std::string to_string(Provenance p);

/// Bound side that may relax with unbuilt candidate lines:
///   value(y) = constant + sum(coef * y_ref).
struct AffineBound {
    double constant = 0.0;
    std::vector<std::pair<VariableRef, double>> build_terms;

    double eval(const MilpModel& model, const std::vector<double>& point) const;
};

/// One path-based valid inequality:  lower(y) <= expr <= upper(y).
/// Lemma cuts carry flow expressions with constant bounds; theorem cuts carry
/// an angle-difference expression with build-dependent bounds.
struct PathVi {
    Provenance provenance = Provenance::Lemma1;
    std::vector<std::pair<VariableRef, double>> expr;
    AffineBound lower;
    AffineBound upper;
    std::string source; // path/family description, for reports

    double expr_value(const MilpModel& model, const std::vector<double>& point) const;

    /// Positive when the point lies outside [lower(y), upper(y)].
    double violation(const MilpModel& model, const std::vector<double>& point) const;

    /// Materializes the two one-sided rows against a concrete model.
    /// Throws UsageError when a referenced variable is absent.
    std::vector<Row> rows(const MilpModel& model, int id) const;

    /// Canonical form used for deduplication: sorted (variable, coefficient)
    /// pairs with coefficients rounded at 1e-12, plus both bounds.
    std::string canonical_key() const;
};

enum class InjectionMode { Upfront, UserCut, Lazy };

std::string to_string(InjectionMode mode);

/// Duplicate-free cut collection.
struct CutPool {
    std::vector<PathVi> cuts;
    InjectionMode injection_mode = InjectionMode::Upfront;

    /// False when an identical cut (canonical form) is already present.
    bool add(PathVi cut);

    int size() const { return static_cast<int>(cuts.size()); }
    int count(Provenance p) const;

  private:
    std::vector<std::string> keys_;
};

/// One record per cut: provenance, source, bounds, coefficient list.
std::string dump_cut_pool(const CutPool& pool);

} // namespace tep
