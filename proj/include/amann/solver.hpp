#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amann/operator.hpp"

namespace amann {

struct SolverConfig {
  double tol_res = 1e-10;  // residual tolerance against the original operator
  double tol_step = 1e-12; // orbit step tolerance
  long max_iter = 10000;
  double damping = 0.5; // averaging factor for the clamped iteration, in (0, 1]
  int n_starts = 8;
  std::optional<StrictMargin> margin; // default: StrictMargin::for_interval(I)
  std::uint64_t seed = 0;
  double fd_step = 1e-6; // forward-difference step for Jacobian columns

  void validate() const; // throws ConfigError
};

// The margin in force for a run: cfg.margin if set, else the 1e-8-relative
// default for the interval.
StrictMargin active_margin(const SolverConfig& cfg, const OrderInterval& I);

// Strictly interior pair p- << p+ with T p- << p- and T p+ >> p+, so that
// the truncation satisfies T^ p- < p- and T^ p+ > p+.
struct AnchorPair {
  GridFunction p_minus;
  GridFunction p_plus;
  double t_minus; // in (0, 1)
  double t_plus;  // in (0, 1), > t_minus
  double super_margin_at_p_minus; // interior_distance(p- - T p-)
  double sub_margin_at_p_plus;    // interior_distance(T p+ - p+)
};

// (1 - t) * I.lo + t * I.hi componentwise; t must lie in [0, 1].
GridFunction segment_point(const OrderInterval& I, double t);

// Scans the segment between the endpoints for the anchor pair: tries
// (t-, t+) = (2^-k, 1 - 2^-k) for k = 1..40 and accepts the first k at
// which both sides are strict at the active margin. Verifies the full
// chain and the lattice-strict truncation inequalities before returning.
// Throws AnchorSearchError ("anchor search failed" with the best margins
// seen, or "anchors overlap") when no pair qualifies.
AnchorPair find_anchors(const MonotoneOperator& T, const OrderInterval& I,
                        const SolverConfig& cfg);

enum class Classification {
  interior_fixed_point,
  boundary_collapse_lo,
  boundary_collapse_hi,
  no_convergence,
};

std::string_view to_string(Classification c);

// Outcome of one start of the multi-start search.
struct StartOutcome {
  int index = 0;
  double t = 0.0;
  Classification classification = Classification::no_convergence;
  double residual_sup = 0.0;
  long iterations = 0;
  bool accepted = false;
  std::string note;
};

struct SolveReport {
  explicit SolveReport(GridFunction cand) : candidate(std::move(cand)) {}

  GridFunction candidate;
  double residual_sup = 0.0; // against the original operator
  Classification classification = Classification::no_convergence;
  long iterations = 0;
  long starts_tried = 1;
  // Exclusion checks against the anchors (Amann's third-fixed-point
  // conclusion): set only when anchors were involved.
  std::optional<bool> exclusion_lo; // not (candidate <= p-)
  std::optional<bool> exclusion_hi; // not (p+ <= candidate)
  bool within_interval = false;
  std::vector<StartOutcome> start_outcomes; // multi-start runs only
};

// Plain fixed-point iteration of a truncated operator from a comparable
// start: if T^(start) <= start the orbit decreases, if >= it increases;
// either way it is monotone and bounded, hence convergent. The orbit
// ordering is asserted every step. A limit within the margin of an
// interval endpoint is classified as a boundary collapse: a fixed point
// of the truncation that is not one of the original operator.
SolveReport monotone_iterate(const MonotoneOperator& truncated, const GridFunction& start,
                             const OrderInterval& I, const SolverConfig& cfg);

// Damped Newton on the residual R(u) = u - T(u) with a forward-difference
// Jacobian; trial points are re-clamped into I, and the step is halved
// until the residual decreases (at most 30 halvings). Throws
// JacobianBreakdown when the condition estimate exceeds 1e14.
SolveReport newton_refine(const MonotoneOperator& T, const GridFunction& u0,
                          const OrderInterval& I, const SolverConfig& cfg);

// Forward-difference Jacobian of R(u) = u - T(u), row-major n x n.
// Probe direction per column is chosen to stay inside the operator's
// declared domain box.
std::vector<double> residual_jacobian_fd(const MonotoneOperator& T, const GridFunction& u,
                                         const OrderInterval& I, double fd_step);

// Multi-start search for a fixed point of T strictly between the anchors:
// cfg.n_starts segment parameters equi-spaced inside (t-, t+) plus the
// midpoint. Each start runs the damped clamped iteration to a stall, then
// Newton from the stall point. All starts are evaluated (they may run in
// parallel); the accepted candidate is the one from the lowest start
// index whose report is interior with both exclusion checks true. When no
// start qualifies the report is an honest no_convergence listing every
// per-start outcome.
SolveReport find_interior_fixed_point(const MonotoneOperator& T, const OrderInterval& I,
                                      const AnchorPair& anchors, const SolverConfig& cfg);

struct FixedPointCluster {
  GridFunction representative; // candidate from the lowest contributing start
  double residual_sup = 0.0;
  int multiplicity = 0;
  std::vector<int> start_indices;
};

// All certified interior candidates across the starts, clustered at
// radius 1e-6 * sup_norm(hi - lo). Cluster order follows start order.
std::vector<FixedPointCluster> scan_fixed_points(const MonotoneOperator& T,
                                                 const OrderInterval& I,
                                                 const AnchorPair& anchors,
                                                 const SolverConfig& cfg);

} // namespace amann
