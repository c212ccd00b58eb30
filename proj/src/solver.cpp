#include "amann/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "amann/kernels.hpp"

namespace amann {

namespace {

// Iterations of the damped clamped map before handing over to Newton.
constexpr long kStallCap = 500;
constexpr int kMaxHalvings = 30;
constexpr int kAnchorMaxK = 40;
constexpr double kCondLimit = 1e14;

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double inf_norm(const RowMajorMatrix& m) {
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

std::string format_margin(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

} // namespace

void SolverConfig::validate() const {
  if (!(tol_res > 0.0)) throw ConfigError("tol_res must be positive");
  if (!(tol_step > 0.0)) throw ConfigError("tol_step must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(damping > 0.0) || damping > 1.0) throw ConfigError("damping must lie in (0, 1]");
  if (n_starts < 1) throw ConfigError("n_starts must be at least 1");
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be positive");
}

StrictMargin active_margin(const SolverConfig& cfg, const OrderInterval& I) {
  return cfg.margin ? *cfg.margin : StrictMargin::for_interval(I);
}

GridFunction segment_point(const OrderInterval& I, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw ConfigError("segment parameter t = " + std::to_string(t) +
                      " lies outside [0, 1]");
  std::vector<double> out(I.grid()->size());
  kernels::lerp(I.lo().values(), I.hi().values(), t, out);
  return GridFunction(I.grid(), std::move(out));
}

AnchorPair find_anchors(const MonotoneOperator& T, const OrderInterval& I,
                        const SolverConfig& cfg) {
  cfg.validate();
  if (!compatible(*I.grid(), *T.grid()))
    throw GridMismatch("anchor search interval lives on a different grid than the operator");
  const StrictMargin m = active_margin(cfg, I);
  MonotoneOperator truncated = truncate(T, I);

  double best_super = -std::numeric_limits<double>::infinity();
  double best_sub = -std::numeric_limits<double>::infinity();

  for (int k = 1; k <= kAnchorMaxK; ++k) {
    const double t_minus = std::ldexp(1.0, -k);
    const double t_plus = 1.0 - t_minus;
    GridFunction p_minus = segment_point(I, t_minus);
    GridFunction p_plus = segment_point(I, t_plus);
    GridFunction tp_minus = T(p_minus);
    GridFunction tp_plus = T(p_plus);

    // Strict margins on each side: T p- << p- and p+ << T p+.
    const double super = kernels::min_diff(tp_minus.values(), p_minus.values());
    const double sub = kernels::min_diff(p_plus.values(), tp_plus.values());
    const double lo_gap = kernels::min_diff(I.lo().values(), p_minus.values());
    const double hi_gap = kernels::min_diff(p_plus.values(), I.hi().values());
    best_super = std::max(best_super, super);
    best_sub = std::max(best_sub, sub);

    if (!(super > m.margin && lo_gap > m.margin && sub > m.margin && hi_gap > m.margin))
      continue;

    if (!(t_minus < t_plus))
      throw AnchorSearchError("anchors overlap (both scans accepted t = 1/2)",
                              best_super, best_sub);
    // Full strict chain u- << p- << p+ << u+ at the active margin.
    if (!strictly_less(p_minus, p_plus, m)) continue;

    // Lattice-strict conclusions for the truncated operator.
    if (!lt(truncated(p_minus), p_minus) || !lt(p_plus, truncated(p_plus))) continue;

    AnchorPair anchors{std::move(p_minus), std::move(p_plus), t_minus, t_plus,
                       super, sub};
    return anchors;
  }

  throw AnchorSearchError(
      "anchor search failed: no dyadic segment point is strict at margin " +
          format_margin(m.margin) + " (best super-side margin " +
          format_margin(best_super) + ", best sub-side margin " +
          format_margin(best_sub) + ")",
      best_super, best_sub);
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::interior_fixed_point: return "interior_fixed_point";
    case Classification::boundary_collapse_lo: return "boundary_collapse_lo";
    case Classification::boundary_collapse_hi: return "boundary_collapse_hi";
    case Classification::no_convergence: return "no_convergence";
  }
  return "unknown";
}

SolveReport monotone_iterate(const MonotoneOperator& truncated, const GridFunction& start,
                             const OrderInterval& I, const SolverConfig& cfg) {
  cfg.validate();
  if (!I.contains(start))
    throw ConfigError("monotone iteration start lies outside the interval");
  const StrictMargin m = active_margin(cfg, I);

  GridFunction u = start;
  std::optional<bool> decreasing;
  long iter = 0;
  double step = std::numeric_limits<double>::infinity();
  while (iter < cfg.max_iter) {
    GridFunction next = truncated(u);
    ++iter;
    if (!decreasing) {
      const bool dec = leq(next, u);
      const bool inc = leq(u, next);
      if (!dec && !inc)
        throw NotMonotoneStart(
            "not a monotone starting point: T^(start) is incomparable with start");
      decreasing = dec;
    } else if (*decreasing ? !leq(next, u) : !leq(u, next)) {
      throw Error("monotone orbit ordering violated at iteration " + std::to_string(iter) +
                  "; the operator is not monotone on this orbit");
    }
    step = kernels::max_abs_diff(next.values(), u.values());
    u = std::move(next);
    if (step <= cfg.tol_step) break;
  }
  const bool converged = step <= cfg.tol_step;

  const MonotoneOperator& original = truncated.original();
  SolveReport report{u};
  report.iterations = iter;
  report.within_interval = I.contains(u);
  report.residual_sup = kernels::max_abs_diff(u.values(), original(u).values());
  if (kernels::max_abs_diff(u.values(), I.lo().values()) <= m.margin) {
    report.classification = Classification::boundary_collapse_lo;
  } else if (kernels::max_abs_diff(u.values(), I.hi().values()) <= m.margin) {
    report.classification = Classification::boundary_collapse_hi;
  } else if (converged && report.residual_sup <= cfg.tol_res && report.within_interval) {
    report.classification = Classification::interior_fixed_point;
  } else {
    report.classification = Classification::no_convergence;
  }
  return report;
}

std::vector<double> residual_jacobian_fd(const MonotoneOperator& T, const GridFunction& u,
                                         const OrderInterval& I, double fd_step) {
  if (!(fd_step > 0.0)) throw ConfigError("fd_step must be positive");
  const std::size_t n = u.size();
  // Probes must stay inside the scalar range the operator accepts, so the
  // difference direction flips to backward near the top of that range.
  const OrderInterval& box = T.domain_interval() ? *T.domain_interval() : I;
  double dom_hi = -std::numeric_limits<double>::infinity();
  for (double v : box.hi().values()) dom_hi = std::max(dom_hi, v);
  GridFunction t_u = T(u);

  std::vector<double> jac(n * n, 0.0);
  std::atomic<bool> failed{false, };
  std::string first_error;
  std::atomic<long> first_error_col{static_cast<long>(n)};

  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t j = 0; j < cols; ++j) {
    try {
      std::vector<double> probe(u.values().begin(), u.values().end());
      const double s = (probe[j] + fd_step <= dom_hi) ? fd_step : -fd_step;
      probe[static_cast<std::size_t>(j)] += s;
      // Divide by the step that was actually realized after rounding.
      const double actual = probe[static_cast<std::size_t>(j)] - u[static_cast<std::size_t>(j)];
      GridFunction t_probe = T(GridFunction(u.grid(), std::move(probe)));
      for (std::size_t i = 0; i < n; ++i) {
        const double dTij = (t_probe[i] - t_u[i]) / actual;
        jac[i * n + static_cast<std::size_t>(j)] =
            (static_cast<std::size_t>(j) == i ? 1.0 : 0.0) - dTij;
      }
    } catch (const Error& e) {
#pragma omp critical(amann_fd_jacobian)
      {
        if (j < first_error_col.load(std::memory_order_relaxed)) {
          first_error_col.store(j, std::memory_order_relaxed);
          first_error = e.what();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    }
  }
  if (failed.load())
    throw Error("finite-difference Jacobian failed at column " +
                std::to_string(first_error_col.load()) + ": " + first_error);
  return jac;
}

SolveReport newton_refine(const MonotoneOperator& T, const GridFunction& u0,
                          const OrderInterval& I, const SolverConfig& cfg) {
  cfg.validate();
  if (!I.contains(u0)) throw ConfigError("newton start lies outside the interval");
  const std::size_t n = u0.size();

  GridFunction u = u0;
  GridFunction t_u = T(u);
  double res = kernels::max_abs_diff(u.values(), t_u.values());
  long iter = 0;

  while (res > cfg.tol_res && iter < cfg.max_iter) {
    ++iter;
    std::vector<double> jac = residual_jacobian_fd(T, u, I, cfg.fd_step);
    Eigen::Map<const RowMajorMatrix> jmap(jac.data(), static_cast<Eigen::Index>(n),
                                          static_cast<Eigen::Index>(n));
    Eigen::PartialPivLU<RowMajorMatrix> lu(jmap);
    RowMajorMatrix inverse = lu.inverse();
    const double cond = inf_norm(jmap) * inf_norm(inverse);
    if (!(cond <= kCondLimit)) {
      std::vector<double> last(u.values().begin(), u.values().end());
      throw JacobianBreakdown("Jacobian breakdown: condition estimate " +
                                  format_margin(cond) + " exceeds 1e14",
                              std::move(last), cond);
    }

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = -(u[i] - t_u[i]);
    Eigen::VectorXd delta = lu.solve(rhs);

    // Damped line search; trial points are clamped into the interval so
    // every evaluation stays inside the operator's domain.
    double d = 1.0;
    bool accepted = false;
    for (int halvings = 0; halvings <= kMaxHalvings; ++halvings, d *= 0.5) {
      std::vector<double> trial_values(n);
      for (std::size_t i = 0; i < n; ++i)
        trial_values[i] = u[i] + d * delta[static_cast<Eigen::Index>(i)];
      kernels::clamp(I.lo().values(), I.hi().values(), trial_values, trial_values);
      GridFunction trial(u.grid(), std::move(trial_values));
      GridFunction t_trial = T(trial);
      const double trial_res = kernels::max_abs_diff(trial.values(), t_trial.values());
      if (trial_res < res) {
        u = std::move(trial);
        t_u = std::move(t_trial);
        res = trial_res;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      SolveReport report{u};
      report.residual_sup = res;
      report.classification = Classification::no_convergence;
      report.iterations = iter;
      report.within_interval = I.contains(u);
      return report;
    }
  }

  SolveReport report{u};
  report.residual_sup = res;
  report.iterations = iter;
  report.within_interval = I.contains(u);
  report.classification = (res <= cfg.tol_res && report.within_interval)
                              ? Classification::interior_fixed_point
                              : Classification::no_convergence;
  return report;
}

namespace {

struct StartRun {
  std::optional<SolveReport> report;
  StartOutcome outcome;
};

// Damped clamped iteration to a stall, then Newton from the stall point.
StartRun run_one_start(const MonotoneOperator& T, const MonotoneOperator& truncated,
                       const OrderInterval& I, const AnchorPair& anchors,
                       const SolverConfig& cfg, int index, double t) {
  StartRun run;
  run.outcome.index = index;
  run.outcome.t = t;
  run.outcome.residual_sup = -1.0; // not evaluated
  try {
    GridFunction u = segment_point(I, t);
    long damped_iters = 0;
    for (; damped_iters < kStallCap; ++damped_iters) {
      GridFunction image = truncated(u);
      std::vector<double> next(u.size());
      kernels::lerp(u.values(), image.values(), cfg.damping, next);
      // The convex combination can escape the interval by rounding only.
      kernels::clamp(I.lo().values(), I.hi().values(), next, next);
      GridFunction v(u.grid(), std::move(next));
      const double step = kernels::max_abs_diff(u.values(), v.values());
      u = std::move(v);
      if (step <= cfg.tol_step) break;
    }

    SolveReport report = newton_refine(T, u, I, cfg);
    report.iterations += damped_iters;
    const bool exclusion_lo = !leq(report.candidate, anchors.p_minus);
    const bool exclusion_hi = !leq(anchors.p_plus, report.candidate);
    report.exclusion_lo = exclusion_lo;
    report.exclusion_hi = exclusion_hi;

    run.outcome.classification = report.classification;
    run.outcome.residual_sup = report.residual_sup;
    run.outcome.iterations = report.iterations;
    run.outcome.accepted =
        report.classification == Classification::interior_fixed_point && exclusion_lo &&
        exclusion_hi;
    if (report.classification == Classification::interior_fixed_point &&
        !run.outcome.accepted)
      run.outcome.note = "rejected by anchor exclusion checks";
    run.report = std::move(report);
  } catch (const JacobianBreakdown& e) {
    run.outcome.classification = Classification::no_convergence;
    run.outcome.note = e.what();
  } catch (const Error& e) {
    run.outcome.classification = Classification::no_convergence;
    run.outcome.note = e.what();
  }
  return run;
}

std::vector<double> start_parameters(const AnchorPair& anchors, int n_starts) {
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n_starts) + 1);
  const double span = anchors.t_plus - anchors.t_minus;
  for (int k = 0; k < n_starts; ++k)
    ts.push_back(anchors.t_minus + span * static_cast<double>(k + 1) /
                                       static_cast<double>(n_starts + 1));
  ts.push_back(anchors.t_minus + 0.5 * span);
  return ts;
}

std::vector<StartRun> run_starts(const MonotoneOperator& T, const OrderInterval& I,
                                 const AnchorPair& anchors, const SolverConfig& cfg) {
  cfg.validate();
  MonotoneOperator truncated = truncate(T, I);
  const std::vector<double> ts = start_parameters(anchors, cfg.n_starts);
  std::vector<StartRun> runs(ts.size());
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(ts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < total; ++i)
    runs[static_cast<std::size_t>(i)] =
        run_one_start(T, truncated, I, anchors, cfg, static_cast<int>(i),
                      ts[static_cast<std::size_t>(i)]);
  return runs;
}

} // namespace

SolveReport find_interior_fixed_point(const MonotoneOperator& T, const OrderInterval& I,
                                      const AnchorPair& anchors, const SolverConfig& cfg) {
  std::vector<StartRun> runs = run_starts(T, I, anchors, cfg);

  // Winner: lowest start index among accepted candidates, independent of
  // completion order.
  const StartRun* winner = nullptr;
  for (const StartRun& run : runs) {
    if (run.outcome.accepted) {
      winner = &run;
      break;
    }
  }
  // Fallback for the honest-failure report: best residual seen.
  const StartRun* best = nullptr;
  for (const StartRun& run : runs) {
    if (!run.report) continue;
    if (!best || run.report->residual_sup < best->report->residual_sup) best = &run;
  }

  std::vector<StartOutcome> outcomes;
  outcomes.reserve(runs.size());
  for (const StartRun& run : runs) outcomes.push_back(run.outcome);

  if (winner) {
    SolveReport report = *winner->report;
    report.starts_tried = static_cast<long>(runs.size());
    report.start_outcomes = std::move(outcomes);
    return report;
  }

  SolveReport report = best ? *best->report : SolveReport{segment_point(I, 0.5)};
  if (!best) {
    report.residual_sup =
        kernels::max_abs_diff(report.candidate.values(), T(report.candidate).values());
    report.within_interval = true;
  }
  report.classification = Classification::no_convergence;
  report.starts_tried = static_cast<long>(runs.size());
  report.start_outcomes = std::move(outcomes);
  return report;
}

std::vector<FixedPointCluster> scan_fixed_points(const MonotoneOperator& T,
                                                 const OrderInterval& I,
                                                 const AnchorPair& anchors,
                                                 const SolverConfig& cfg) {
  std::vector<StartRun> runs = run_starts(T, I, anchors, cfg);
  const double radius = 1e-6 * I.width();

  std::vector<FixedPointCluster> clusters;
  for (const StartRun& run : runs) {
    if (!run.outcome.accepted || !run.report) continue;
    const GridFunction& candidate = run.report->candidate;
    FixedPointCluster* home = nullptr;
    for (FixedPointCluster& cluster : clusters) {
      if (kernels::max_abs_diff(candidate.values(), cluster.representative.values()) <=
          radius) {
        home = &cluster;
        break;
      }
    }
    if (home) {
      home->multiplicity += 1;
      home->start_indices.push_back(run.outcome.index);
    } else {
      clusters.push_back(FixedPointCluster{candidate, run.report->residual_sup, 1,
                                           {run.outcome.index}});
    }
  }
  return clusters;
}

} // namespace amann
