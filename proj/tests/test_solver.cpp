#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "amann/hammerstein.hpp"
#include "amann/solver.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace amann;
using namespace amann::testing;

namespace {

MonotoneOperator square_op() {
  return scalar_op("square", [](double u) { return u * u; });
}

OrderInterval scalar_interval(const MonotoneOperator& T, double lo, double hi) {
  return OrderInterval(GridFunction::constant(T.grid(), lo),
                       GridFunction::constant(T.grid(), hi));
}

} // namespace

TEST_CASE("segment_point interpolates the interval") {
  GridPtr g1 = scalar_grid();
  OrderInterval I(GridFunction::constant(g1, 0.25), GridFunction::constant(g1, 2.0));
  CHECK(segment_point(I, 0.0) == I.lo());
  CHECK(segment_point(I, 1.0) == I.hi());
  CHECK(std::abs(segment_point(I, 0.1)[0] - 0.425) <= 1e-15);

  GridPtr g2 = Grid::uniform(0.0, 1.0, 2);
  OrderInterval I2(gf(g2, {0.0, 1.0}), gf(g2, {2.0, 3.0}));
  CHECK(segment_point(I2, 0.5) == gf(g2, {1.0, 2.0}));

  CHECK_THROWS_AS(segment_point(I, -0.1), ConfigError);
  CHECK_THROWS_AS(segment_point(I, 1.2), ConfigError);
}

TEST_CASE("anchor scan reproduces the scalar square walkthrough exactly") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  SolverConfig cfg;
  AnchorPair anchors = find_anchors(T, I, cfg);

  CHECK(anchors.t_minus == 0.25);
  CHECK(anchors.t_plus == 0.75);
  CHECK(anchors.p_minus[0] == 0.6875);
  CHECK(anchors.p_plus[0] == 1.5625);
  CHECK(anchors.super_margin_at_p_minus == 0.6875 - 0.47265625);
  CHECK(anchors.sub_margin_at_p_plus == 2.44140625 - 1.5625);
  CHECK(anchors.t_minus < 3.0 / 7.0);
  CHECK(anchors.t_plus > 3.0 / 7.0);

  const StrictMargin m = active_margin(cfg, I);
  CHECK(strictly_less(I.lo(), anchors.p_minus, m));
  CHECK(strictly_less(anchors.p_minus, anchors.p_plus, m));
  CHECK(strictly_less(anchors.p_plus, I.hi(), m));
  MonotoneOperator That = truncate(T, I);
  CHECK(lt(That(anchors.p_minus), anchors.p_minus));
  CHECK(lt(anchors.p_plus, That(anchors.p_plus)));
}

TEST_CASE("anchor scan fails honestly on the identity") {
  MonotoneOperator id = scalar_op("identity", [](double u) { return u; });
  OrderInterval I = scalar_interval(id, 0.25, 2.0);
  SolverConfig cfg;
  try {
    find_anchors(id, I, cfg);
    FAIL("expected AnchorSearchError");
  } catch (const AnchorSearchError& e) {
    CHECK(std::string(e.what()).find("anchor search failed") != std::string::npos);
    CHECK(e.best_super_margin() == 0.0);
    CHECK(e.best_sub_margin() == 0.0);
  }
}

TEST_CASE("monotone iteration collapses to the clamped boundary from the anchors") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  MonotoneOperator That = truncate(T, I);
  SolverConfig cfg;

  // From p-: 0.6875 -> 0.47265625 -> clamp at 0.25, the (spurious) endpoint.
  SolveReport lo = monotone_iterate(That, GridFunction::constant(T.grid(), 0.6875), I, cfg);
  CHECK(lo.classification == Classification::boundary_collapse_lo);
  CHECK(lo.candidate == I.lo());
  CHECK(lo.iterations <= 5);
  CHECK(lo.residual_sup == 0.1875); // |0.25 - 0.0625| against the original map

  SolveReport hi = monotone_iterate(That, GridFunction::constant(T.grid(), 1.5625), I, cfg);
  CHECK(hi.classification == Classification::boundary_collapse_hi);
  CHECK(hi.candidate == I.hi());
  CHECK(hi.residual_sup == 2.0);

  SolveReport mid = monotone_iterate(That, GridFunction::constant(T.grid(), 1.0), I, cfg);
  CHECK(mid.classification == Classification::interior_fixed_point);
  CHECK(mid.residual_sup == 0.0);
}

TEST_CASE("monotone iteration rejects incomparable starts") {
  GridPtr g = Grid::uniform(0.0, 1.0, 2);
  MonotoneOperator ones("ones", g, [g](const GridFunction&) {
    return GridFunction::constant(g, 1.0);
  });
  OrderInterval I(GridFunction::constant(g, 0.0), GridFunction::constant(g, 2.0));
  SolverConfig cfg;
  CHECK_THROWS_AS(
      monotone_iterate(truncate(ones, I), gf(g, {0.5, 1.5}), I, cfg),
      NotMonotoneStart);
}

TEST_CASE("monotone iteration detects an orbit ordering violation") {
  // First image drops, second image rises again: not monotone.
  MonotoneOperator zigzag = scalar_op("zigzag", [](double u) {
    return u >= 0.9 ? 0.5 : 0.8;
  });
  OrderInterval I = scalar_interval(zigzag, 0.0, 1.0);
  SolverConfig cfg;
  CHECK_THROWS_WITH_AS(
      monotone_iterate(zigzag, GridFunction::constant(zigzag.grid(), 1.0), I, cfg),
      doctest::Contains("orbit ordering"), Error);
}

TEST_CASE("monotone orbits are ordered every step on a certified instance") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  MonotoneOperator That = truncate(T, I);
  GridFunction u = GridFunction::constant(T.grid(), 0.6875);
  for (int i = 0; i < 10; ++i) {
    GridFunction next = That(u);
    CHECK(leq(next, u)); // decreasing run
    u = next;
  }
}

TEST_CASE("newton refinement on the scalar square map") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  SolverConfig cfg;

  SolveReport from_13 = newton_refine(T, GridFunction::constant(T.grid(), 1.3), I, cfg);
  CHECK(from_13.classification == Classification::interior_fixed_point);
  CHECK(from_13.residual_sup <= 1e-10);
  CHECK(from_13.iterations <= 10);
  CHECK(std::abs(from_13.candidate[0] - 1.0) <= 1e-9);

  SolveReport fixed = newton_refine(T, GridFunction::constant(T.grid(), 1.0), I, cfg);
  CHECK(fixed.classification == Classification::interior_fixed_point);
  CHECK(fixed.residual_sup == 0.0);
  CHECK(fixed.iterations == 0);

  // At u = 0.5 the true derivative of u - u^2 vanishes, but the forward
  // difference sees exactly -fd_step, so the huge first step is damped and
  // the iteration still lands on 1.0.
  SolveReport from_half = newton_refine(T, GridFunction::constant(T.grid(), 0.5), I, cfg);
  CHECK(from_half.classification == Classification::interior_fixed_point);
  CHECK(std::abs(from_half.candidate[0] - 1.0) <= 1e-9);

  CHECK_THROWS_AS(newton_refine(T, GridFunction::constant(T.grid(), 3.0), I, cfg),
                  ConfigError); // start outside the interval
}

TEST_CASE("newton reports a Jacobian breakdown on a singular residual system") {
  GridPtr g = Grid::uniform(0.0, 1.0, 2);
  // T(u) = (u1, u0): monotone increasing, and the finite-difference columns
  // are exact, so R' = I - swap is exactly singular.
  MonotoneOperator swap("swap", g, [g](const GridFunction& u) {
    return GridFunction(g, {u[1], u[0]});
  });
  OrderInterval I(GridFunction::constant(g, 0.0), GridFunction::constant(g, 2.0));
  SolverConfig cfg;
  try {
    newton_refine(swap, gf(g, {0.5, 1.5}), I, cfg);
    FAIL("expected JacobianBreakdown");
  } catch (const JacobianBreakdown& e) {
    CHECK(e.last_iterate() == std::vector<double>{0.5, 1.5});
    CHECK_FALSE(e.cond_estimate() <= 1e14);
  }
}

TEST_CASE("forward-difference residual Jacobian matches the analytic derivative") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  std::vector<double> jac =
      residual_jacobian_fd(T, GridFunction::constant(T.grid(), 1.0), I, 1e-6);
  REQUIRE(jac.size() == 1);
  CHECK(std::abs(jac[0] - (-1.0)) <= 1e-5); // d/du (u - u^2) at 1 is -1
}

TEST_CASE("interior search finds the repelling fixed point of the square map") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  SolverConfig cfg;
  AnchorPair anchors = find_anchors(T, I, cfg);
  SolveReport report = find_interior_fixed_point(T, I, anchors, cfg);

  CHECK(report.classification == Classification::interior_fixed_point);
  CHECK(std::abs(report.candidate[0] - 1.0) <= 1e-8);
  CHECK(report.residual_sup <= 1e-10);
  CHECK(report.within_interval);
  REQUIRE(report.exclusion_lo.has_value());
  REQUIRE(report.exclusion_hi.has_value());
  CHECK(*report.exclusion_lo);
  CHECK(*report.exclusion_hi);
  CHECK(report.starts_tried == cfg.n_starts + 1);
  CHECK(report.start_outcomes.size() == static_cast<std::size_t>(cfg.n_starts + 1));

  // The winner is the lowest accepted start index.
  int first_accepted = -1;
  for (const StartOutcome& o : report.start_outcomes) {
    if (o.accepted) {
      first_accepted = o.index;
      break;
    }
  }
  CHECK(first_accepted >= 0);
  CHECK(report.start_outcomes[static_cast<std::size_t>(first_accepted)].residual_sup ==
        report.residual_sup);

  // The clamp is inactive at a genuine interior fixed point.
  MonotoneOperator That = truncate(T, I);
  CHECK(sup_norm(That(report.candidate) - T(report.candidate)) == 0.0);
  CHECK(leq(I.lo(), report.candidate));
  CHECK(leq(report.candidate, I.hi()));
}

TEST_CASE("interior search solves the scalar cubic") {
  MonotoneOperator T = scalar_op("cube", [](double u) { return u * u * u; });
  OrderInterval I = scalar_interval(T, 0.1, 3.0);
  SolverConfig cfg;
  AnchorPair anchors = find_anchors(T, I, cfg);
  SolveReport report = find_interior_fixed_point(T, I, anchors, cfg);
  CHECK(report.classification == Classification::interior_fixed_point);
  CHECK(std::abs(report.candidate[0] - 1.0) <= 1e-8);
  CHECK(report.residual_sup <= 1e-10);
}

TEST_CASE("scan clusters every crossing of the multiroot catalog instance") {
  auto instances = catalog();
  const ProblemInstance& c6 = catalog_instance(instances, "C6");
  MonotoneOperator T = assemble(c6);
  SolverConfig cfg;
  cfg.n_starts = 32;
  AnchorPair anchors = find_anchors(T, c6.interval, cfg);
  CHECK(anchors.t_minus == 0.125);
  CHECK(anchors.t_plus == 0.875);

  std::vector<FixedPointCluster> clusters = scan_fixed_points(T, c6.interval, anchors, cfg);

  // Independent oracle: sign changes of f(u) - u on [0.5, 3.5].
  auto residual = [&](double u) { return c6.nonlinearity.eval(0.0, u) - u; };
  std::vector<double> roots = bisection_roots(residual, 0.5, 3.5);
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0] - 1.0) <= 1e-9);
  CHECK(std::abs(roots[1] - 2.0) <= 1e-9);
  CHECK(std::abs(roots[2] - 3.0) <= 1e-9);

  REQUIRE(clusters.size() == roots.size());
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    CHECK(clusters[i].residual_sup <= 1e-10);
    CHECK(clusters[i].multiplicity >= 1);
  }
  // Clusters follow start order (left to right along the segment here);
  // compare as sets against the oracle.
  std::vector<double> found;
  for (const auto& c : clusters) found.push_back(c.representative[0]);
  std::sort(found.begin(), found.end());
  for (std::size_t i = 0; i < roots.size(); ++i)
    CHECK(std::abs(found[i] - roots[i]) <= 1e-8);
}

TEST_CASE("scan on the square map yields exactly one cluster") {
  MonotoneOperator T = square_op();
  OrderInterval I = scalar_interval(T, 0.25, 2.0);
  SolverConfig cfg;
  cfg.n_starts = 32;
  AnchorPair anchors = find_anchors(T, I, cfg);
  std::vector<FixedPointCluster> clusters = scan_fixed_points(T, I, anchors, cfg);
  REQUIRE(clusters.size() == 1);
  CHECK(std::abs(clusters[0].representative[0] - 1.0) <= 1e-8);
  CHECK(clusters[0].multiplicity >= 1);
}

TEST_CASE("solver configuration is validated") {
  SolverConfig cfg;
  cfg.n_starts = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.damping = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  cfg.tol_res = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SolverConfig{};
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("constant-kernel instance solves to the constant fixed point on every grid") {
  auto instances = catalog();
  const ProblemInstance& c2 = catalog_instance(instances, "C2");
  SolverConfig cfg;

  std::vector<double> levels;
  for (std::size_t n : {51ul, 101ul, 201ul}) {
    ProblemInstance p = regrid(c2, n);
    MonotoneOperator T = assemble(p);
    AnchorPair anchors = find_anchors(T, p.interval, cfg);
    SolveReport report = find_interior_fixed_point(T, p.interval, anchors, cfg);
    REQUIRE(report.classification == Classification::interior_fixed_point);
    // The solution is constant, so refinement cannot move it.
    double lo = report.candidate[0], hi = report.candidate[0];
    for (std::size_t i = 0; i < report.candidate.size(); ++i) {
      lo = std::min(lo, report.candidate[i]);
      hi = std::max(hi, report.candidate[i]);
    }
    CHECK(hi - lo <= 1e-9);
    levels.push_back(0.5 * (lo + hi));
  }
  for (std::size_t i = 1; i < levels.size(); ++i)
    CHECK(std::abs(levels[i] - levels[0]) <= 1e-6);
}
