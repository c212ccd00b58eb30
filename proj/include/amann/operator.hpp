#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "amann/grid.hpp"
#include "amann/lattice.hpp"

namespace amann {

// Evaluation contract for a claimed-monotone operator on grid functions.
// Evaluation must be pure and reentrant: the same input yields a
// bitwise-identical output, and concurrent calls are safe. Monotonicity
// and continuity are claims to be certified, not enforced here.
class MonotoneOperator {
public:
  using Eval = std::function<GridFunction(const GridFunction&)>;

  MonotoneOperator(std::string label, GridPtr grid, Eval eval,
                   std::optional<OrderInterval> domain = std::nullopt);

  // Evaluates T(u); checks that u and the result live on the operator's grid.
  GridFunction operator()(const GridFunction& u) const;

  const std::string& label() const { return label_; }
  const GridPtr& grid() const { return grid_; }
  const std::optional<OrderInterval>& domain_interval() const { return domain_; }

  bool is_truncation() const { return inner_ != nullptr; }
  // Innermost unclamped operator (itself when not a truncation).
  const MonotoneOperator& original() const { return inner_ ? inner_->original() : *this; }
  const OrderInterval* truncation_interval() const {
    return trunc_ ? &*trunc_ : nullptr;
  }

private:
  std::string label_;
  GridPtr grid_;
  Eval eval_;
  std::optional<OrderInterval> domain_;
  std::shared_ptr<const MonotoneOperator> inner_;
  std::optional<OrderInterval> trunc_;

  friend MonotoneOperator truncate(const MonotoneOperator& T, const OrderInterval& I);
};

// The truncation of T to [I.lo, I.hi]: u -> sup{inf{T u, hi}, lo}. Maps the
// interval into itself and fixes both endpoints exactly whenever
// T(lo) <= lo and T(hi) >= hi componentwise.
MonotoneOperator truncate(const MonotoneOperator& T, const OrderInterval& I);

struct MonotoneCheck {
  bool ok = true;
  long samples = 0;
  std::optional<std::pair<GridFunction, GridFunction>> counterexample;
};

// Randomized monotonicity probe. Ordered pairs u <= v are drawn inside I:
// u uniform per component, v = u + nonnegative increment bounded by hi - u
// (rejection sampling of comparable pairs would almost never accept in
// higher dimension). Sample i has its own generator stream, so the check
// may fan out across threads; the reported counterexample is always the
// one with the lowest sample index. Evaluation failures propagate with the
// offending sample attached, again lowest index first.
MonotoneCheck certify_monotone(const MonotoneOperator& T, const OrderInterval& I,
                               long n_samples, std::uint64_t seed);

struct BoundaryMargins {
  double super_margin;          // interior_distance(lo - T(lo))
  double sub_margin;            // interior_distance(T(hi) - hi)
  double interval_order_margin; // interior_distance(hi - lo)

  bool passed(const StrictMargin& m) const {
    return super_margin > m.margin && sub_margin > m.margin &&
           interval_order_margin > m.margin;
  }
};

// Margins of the strong super/subsolution hypotheses at the interval
// endpoints. Negative margins are reported, never thrown.
BoundaryMargins certify_boundary(const MonotoneOperator& T, const OrderInterval& I);

// True iff the truncated operator fixes both interval endpoints exactly.
// Requires an operator produced by truncate().
bool check_endpoints_fixed(const MonotoneOperator& truncated, const OrderInterval& I);

struct CertificationReport {
  bool monotone_ok = false;
  long monotone_samples = 0;
  std::optional<std::pair<GridFunction, GridFunction>> monotone_counterexample;
  double super_margin = 0.0;
  double sub_margin = 0.0;
  double interval_order_margin = 0.0;
  bool endpoints_fixed_by_truncation = false;
  // Continuity and compactness are automatic for continuous maps on a
  // finite grid; they are recorded as assumed rather than tested.
  double normality_constant = 1.0;
  StrictMargin margin{1.0};

  bool passed() const {
    return monotone_ok && super_margin > margin.margin && sub_margin > margin.margin &&
           interval_order_margin > margin.margin;
  }
};

// Full certification of the reversed-configuration hypotheses on (T, I):
// sampled monotonicity, boundary margins, endpoint fixedness of the
// truncation, and the normality constant of the cone.
CertificationReport certify(const MonotoneOperator& T, const OrderInterval& I,
                            const StrictMargin& m, long n_samples, std::uint64_t seed);

} // namespace amann
