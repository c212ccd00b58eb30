#include "amann/operator.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <vector>

#include "amann/kernels.hpp"
#include "amann/rng.hpp"

namespace amann {

MonotoneOperator::MonotoneOperator(std::string label, GridPtr grid, Eval eval,
                                   std::optional<OrderInterval> domain)
    : label_(std::move(label)), grid_(std::move(grid)), eval_(std::move(eval)),
      domain_(std::move(domain)) {
  if (!grid_) throw ConfigError("operator needs a grid");
  if (!eval_) throw ConfigError("operator needs an evaluation function");
  if (domain_ && !compatible(*domain_->grid(), *grid_))
    throw GridMismatch("operator domain interval lives on a different grid");
}

GridFunction MonotoneOperator::operator()(const GridFunction& u) const {
  if (!compatible(*u.grid(), *grid_))
    throw GridMismatch("input to operator '" + label_ + "' lives on a different grid");
  GridFunction out = eval_(u);
  if (!compatible(*out.grid(), *grid_))
    throw Error("operator '" + label_ + "' returned a value on a different grid");
  return out;
}

MonotoneOperator truncate(const MonotoneOperator& T, const OrderInterval& I) {
  if (!compatible(*I.grid(), *T.grid()))
    throw GridMismatch("truncation interval lives on a different grid than the operator");
  auto inner = std::make_shared<const MonotoneOperator>(T);
  OrderInterval interval = I;
  MonotoneOperator out(
      T.label() + "^",
      T.grid(),
      [inner, interval](const GridFunction& u) {
        return clamp_to_interval((*inner)(u), interval);
      },
      interval);
  out.inner_ = inner;
  out.trunc_ = interval;
  return out;
}

namespace {

// One comparable pair inside I, from the sample's private stream.
std::pair<GridFunction, GridFunction> ordered_pair(const OrderInterval& I,
                                                   std::uint64_t seed,
                                                   std::uint64_t index) {
  Rng rng = Rng::stream(seed, index);
  const std::size_t n = I.grid()->size();
  std::vector<double> u(n), v(n);
  const auto lo = I.lo().values();
  const auto hi = I.hi().values();
  for (std::size_t i = 0; i < n; ++i) u[i] = lo[i] + rng.uniform01() * (hi[i] - lo[i]);
  for (std::size_t i = 0; i < n; ++i) v[i] = u[i] + rng.uniform01() * (hi[i] - u[i]);
  // Guard against the last rounding step escaping the interval.
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::min(std::max(u[i], lo[i]), hi[i]);
    v[i] = std::min(std::max(v[i], u[i]), hi[i]);
  }
  return {GridFunction(I.grid(), std::move(u)), GridFunction(I.grid(), std::move(v))};
}

} // namespace

MonotoneCheck certify_monotone(const MonotoneOperator& T, const OrderInterval& I,
                               long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("monotonicity check needs at least one sample");
  if (!compatible(*I.grid(), *T.grid()))
    throw GridMismatch("certification interval lives on a different grid than the operator");

  enum EventKind { kNone = 0, kCounterexample = 1, kFailure = 2 };
  std::atomic<long> event_index{n_samples};
  int event_kind = kNone;
  std::string failure_what;

#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n_samples; ++i) {
    if (i > event_index.load(std::memory_order_relaxed)) continue; // already decided
    try {
      auto [u, v] = ordered_pair(I, seed, static_cast<std::uint64_t>(i));
      GridFunction tu = T(u);
      GridFunction tv = T(v);
      if (!kernels::all_leq(tu.values(), tv.values())) {
#pragma omp critical(amann_certify_monotone)
        {
          if (i < event_index.load(std::memory_order_relaxed)) {
            event_index.store(i, std::memory_order_relaxed);
            event_kind = kCounterexample;
          }
        }
      }
    } catch (const Error& e) {
#pragma omp critical(amann_certify_monotone)
      {
        if (i < event_index.load(std::memory_order_relaxed)) {
          event_index.store(i, std::memory_order_relaxed);
          event_kind = kFailure;
          failure_what = e.what();
        }
      }
    }
  }

  MonotoneCheck check;
  check.samples = n_samples;
  const long idx = event_index.load();
  if (event_kind == kFailure) {
    auto [u, v] = ordered_pair(I, seed, static_cast<std::uint64_t>(idx));
    double first = u.size() ? u[0] : 0.0;
    throw DomainViolation("operator evaluation failed during monotonicity check at sample " +
                          std::to_string(idx) + " (input[0] = " + std::to_string(first) +
                          "): " + failure_what);
  }
  if (event_kind == kCounterexample) {
    auto [u, v] = ordered_pair(I, seed, static_cast<std::uint64_t>(idx));
    check.ok = false;
    check.counterexample = std::make_pair(std::move(u), std::move(v));
  }
  return check;
}

BoundaryMargins certify_boundary(const MonotoneOperator& T, const OrderInterval& I) {
  if (!compatible(*I.grid(), *T.grid()))
    throw GridMismatch("certification interval lives on a different grid than the operator");
  GridFunction t_lo = T(I.lo());
  GridFunction t_hi = T(I.hi());
  BoundaryMargins m{};
  m.super_margin = kernels::min_diff(t_lo.values(), I.lo().values());
  m.sub_margin = kernels::min_diff(I.hi().values(), t_hi.values());
  m.interval_order_margin = kernels::min_diff(I.lo().values(), I.hi().values());
  return m;
}

bool check_endpoints_fixed(const MonotoneOperator& truncated, const OrderInterval& I) {
  if (!truncated.is_truncation())
    throw ConfigError("endpoint check needs an operator produced by truncate()");
  return truncated(I.lo()) == I.lo() && truncated(I.hi()) == I.hi();
}

CertificationReport certify(const MonotoneOperator& T, const OrderInterval& I,
                            const StrictMargin& m, long n_samples, std::uint64_t seed) {
  CertificationReport report;
  report.margin = m;
  report.normality_constant = normality_constant();

  // Determinism probe on the evaluation contract.
  if (T(I.lo()) != T(I.lo()))
    throw Error("operator '" + T.label() + "' is not deterministic");

  MonotoneCheck mono = certify_monotone(T, I, n_samples, seed);
  report.monotone_ok = mono.ok;
  report.monotone_samples = mono.samples;
  report.monotone_counterexample = std::move(mono.counterexample);

  BoundaryMargins margins = certify_boundary(T, I);
  report.super_margin = margins.super_margin;
  report.sub_margin = margins.sub_margin;
  report.interval_order_margin = margins.interval_order_margin;

  report.endpoints_fixed_by_truncation = check_endpoints_fixed(truncate(T, I), I);
  return report;
}

} // namespace amann
