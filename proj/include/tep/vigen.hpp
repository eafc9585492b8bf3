#pragma once

#include <optional>
#include <vector>

#include "tep/backbone.hpp"
#include "tep/cuts.hpp"
#include "tep/model.hpp"

namespace tep {

/// One chosen line per corridor along a path. Lemma cuts only pick existing
/// lines; theorem-2 line paths may pick candidates.
struct LineSelection {
    struct Pick {
        bool candidate = false;
        int line = 0;
    };
    std::vector<Pick> picks; // aligned with path.corridors
};

/// Per corridor, the existing line minimizing x * capacity (tightest cut).
LineSelection min_cr_existing_selection(const DirectedPath& path, const TepInstance& inst);

/// Existing line with minimal x * capacity where available, otherwise the
/// candidate line with minimal x * capacity.
LineSelection min_cr_line_selection(const DirectedPath& path, const TepInstance& inst);

struct CrValue {
    double value = 0.0; // sum of x * capacity over the selected lines, radians
    LineSelection selection;
};

/// Cumulative capacity-reactance product of the path under the selection.
CrValue cr_product(const DirectedPath& path, const TepInstance& inst,
                   const LineSelection& selection);

/// Two-sided flow cut for a path over established corridors; the flow
/// expression telescopes to the endpoint angle difference and is bounded by
/// the path's capacity-reactance product. Refuses expansion corridors.
PathVi lemma1_cut(const DirectedPath& path, const TepInstance& inst,
                  const LineSelection& selection);

/// One cut per family member, each bounded by the minimum capacity-reactance
/// product across the family.
std::vector<PathVi> lemma2_cuts(const ParallelFamily& family,
                                const std::vector<DirectedPath>& paths, const TepInstance& inst,
                                const std::vector<LineSelection>& selections);

/// Bounds available for a theorem cut on endpoint pair (n, m).
struct TheoremContext {
    double upper_bound = 0.0; // any valid bound on |theta_n - theta_m|
    std::optional<double> min_established_cr; // shortest fully-established path
    double safe_upper_bound = 0.0; // sum over all corridors of max x * capacity
};

TheoremContext theorem_context(const TepInstance& inst, const EstablishedGraph& established,
                               int n, int m, const BigMOptions& opts = {});

/// Angle-difference cuts whose bound relaxes per unbuilt expansion corridor
/// (first build variable under the symmetry-ordering convention). Emits
/// the weak form and, when a fully-established endpoint path exists, the
/// strengthened form. Refuses paths without expansion corridors.
std::vector<PathVi> theorem1_cut(const DirectedPath& path, const TepInstance& inst,
                                 const TheoremContext& ctx);

struct LinePath {
    DirectedPath path;
    LineSelection selection;
};

/// Line-path generalization: the relaxation term references the specific
/// candidate lines of the selection.
std::vector<PathVi> theorem2_cut(const LinePath& line_path, const TepInstance& inst,
                                 const TheoremContext& ctx);

struct FamilyToggles {
    bool lemma1 = true;
    bool lemma2 = true;
    bool theorem1 = true;
    bool theorem2 = true;
};

/// Full pipeline step: enumerate overlay paths, dispatch established paths to
/// the lemma generators and mixed paths to the theorem generators, group
/// parallel paths, deduplicate.
CutPool generate_cut_pool(const TepInstance& inst, const FlowOverlay& overlay,
                          const PathCaps& caps = {}, const FamilyToggles& toggles = {},
                          bool symmetry_active = true, const BigMOptions& big_m_opts = {});

} // namespace tep
