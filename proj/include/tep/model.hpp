#pragma once

#include <map>
#include <string>
#include <vector>

#include "tep/instance.hpp"

namespace tep {

enum class VarKind { Build, FlowExisting, FlowCandidate, Generation, Angle };

/// Identifies one decision variable of the TEP model. For line-indexed kinds
/// `major` is the corridor index and `minor` the line index; for bus-indexed
/// kinds `major` is the bus and `minor` is -1.
struct VariableRef {
    VarKind kind = VarKind::Build;
    int major = -1;
    int minor = -1;

    friend bool operator==(const VariableRef&, const VariableRef&) = default;
    friend auto operator<=>(const VariableRef&, const VariableRef&) = default;
};

struct Variable {
    VariableRef ref;
    double lb = 0.0;
    double ub = 0.0;
    std::string name;
};

enum class Sense { Le, Eq, Ge };

struct Row {
    std::vector<std::pair<int, double>> coeffs; // (variable index, coefficient)
    Sense sense = Sense::Le;
    double rhs = 0.0;
    std::string name;
};

enum class ModelLabel { Full, LinearRelax, TransportationRelax, HybridRelax };

std::string to_string(ModelLabel label);

/// Solver-agnostic linear model. Immutable by convention once built.
struct MilpModel {
    ModelLabel label = ModelLabel::Full;
    std::vector<Variable> variables;
    std::vector<double> objective; // dense, aligned with variables
    std::vector<Row> rows;
    std::vector<int> binaries; // indices into variables, always Build kind
    int reference_bus = 0;

    int num_vars() const { return static_cast<int>(variables.size()); }

    /// -1 when the variable does not exist in this model.
    int index_of(VarKind kind, int major, int minor = -1) const;

    int add_variable(VariableRef ref, double lb, double ub, std::string name);

  private:
    std::map<VariableRef, int> index_;
};

struct BigMTable {
    std::vector<double> per_corridor;
};

struct BigMOptions {
    /// Exact longest-simple-path search for disconnected endpoints is only
    /// attempted up to this many buses; beyond it the safe sum bound is used.
    int exact_threshold = 20;
};

/// Tightest valid disjunctive constant for the unordered bus pair (a, b):
/// shortest-path distance on the established subgraph when connected there,
/// otherwise the longest simple path over the potential network (all
/// corridors, weight max over lines of x * capacity), falling back to the
/// sum of all corridor weights above the exact threshold.
double big_m_for_pair(const TepInstance& inst, const EstablishedGraph& established,
                      int a, int b, const BigMOptions& opts = {});

BigMTable compute_big_m(const TepInstance& inst, const BigMOptions& opts = {});

/// Two-column report (corridor, value), one line per corridor.
std::string big_m_report(const TepInstance& inst, const BigMTable& table);

struct BuildOptions {
    int reference_bus = 0;
};

/// Disjunctive MILP: investment + generation objective, bus balance,
/// flow limits, per-line Kirchhoff rows (equality for existing lines,
/// big-M pair for candidates), generation and angle-difference bounds.
MilpModel build_full_model(const TepInstance& inst, const BigMTable& big_m,
                           const BuildOptions& opts = {});

enum class RelaxationKind { Linear, Transportation, Hybrid };

std::string to_string(RelaxationKind kind);

/// linear: binaries made continuous in [0,1]; transportation: all per-line
/// Kirchhoff rows dropped; hybrid: only the candidate-line (big-M) rows
/// dropped. Binaries stay binary in the latter two.
MilpModel build_relaxation(const TepInstance& inst, const BigMTable& big_m,
                           RelaxationKind kind, const BuildOptions& opts = {});

/// Appends ordering rows y[c,k+1] <= y[c,k] for corridors with >= 2
/// candidates. Refuses (UsageError) when a corridor's candidates are not
/// identical, since ordering would then cut optimal solutions.
void add_symmetry_breaking(MilpModel& model, const TepInstance& inst);

/// True when every corridor's candidate lines are pairwise identical.
bool candidates_interchangeable(const TepInstance& inst);

/// Deterministic LP-format text export (variables by kind then index).
std::string export_model_text(const MilpModel& model);

} // namespace tep
