#include <doctest.h>

#include <cmath>
#include <limits>

#include "amann/lattice.hpp"
#include "test_helpers.hpp"

using namespace amann;
using namespace amann::testing;

namespace {

GridPtr pair_grid() { return Grid::uniform(0.0, 1.0, 2); }

} // namespace

TEST_CASE("grid construction validates its invariants") {
  CHECK_THROWS_AS(Grid({}, {}), ConfigError);
  CHECK_THROWS_AS(Grid({0.0, 0.0}, {0.5, 0.5}), ConfigError);      // not increasing
  CHECK_THROWS_AS(Grid({0.0, 1.0}, {0.5}), ConfigError);           // size mismatch
  CHECK_THROWS_AS(Grid({0.0, 1.0}, {-0.1, 1.1}), ConfigError);     // negative weight
  CHECK_THROWS_AS(Grid({0.0, 1.0}, {0.9, 0.2}), ConfigError);      // wrong sum
  CHECK_NOTHROW(Grid({0.0, 1.0}, {0.5, 0.5}));

  GridPtr g = Grid::uniform(0.0, 1.0, 101);
  double sum = 0.0;
  for (double w : g->weights()) sum += w;
  CHECK(std::abs(sum - 1.0) <= 1e-12);
  CHECK(g->point(0) == 0.0);
  CHECK(g->point(100) == 1.0);
}

TEST_CASE("grid functions reject non-finite values") {
  GridPtr g = pair_grid();
  CHECK_THROWS_AS(gf(g, {1.0, std::nan("")}), ConfigError);
  CHECK_THROWS_AS(gf(g, {1.0, std::numeric_limits<double>::infinity()}), ConfigError);
  CHECK_THROWS_AS(gf(g, {1.0}), ConfigError); // wrong length
}

TEST_CASE("leq on frozen examples") {
  GridPtr g2 = pair_grid();
  CHECK(leq(gf(g2, {0, 0}), gf(g2, {0, 0})));        // reflexivity
  GridPtr g1 = scalar_grid();
  CHECK(leq(gf(g1, {0.25}), gf(g1, {2.0})));
  CHECK_FALSE(leq(gf(g2, {1, -1}), gf(g2, {0, 0}))); // incomparable
  CHECK_THROWS_AS(leq(gf(g1, {0.0}), gf(g2, {0, 0})), GridMismatch);
}

TEST_CASE("lt on frozen examples") {
  GridPtr g1 = scalar_grid();
  GridPtr g2 = pair_grid();
  CHECK_FALSE(lt(gf(g1, {1}), gf(g1, {1})));
  CHECK(lt(gf(g2, {0, 1}), gf(g2, {0, 2})));
  CHECK_FALSE(lt(gf(g2, {0, 3}), gf(g2, {1, 2})));
  CHECK_THROWS_AS(lt(gf(g1, {0.0}), gf(g2, {0, 0})), GridMismatch);
}

TEST_CASE("strictly_less honors the margin") {
  GridPtr g1 = scalar_grid();
  GridPtr g2 = pair_grid();
  StrictMargin m(1e-8);
  CHECK(strictly_less(gf(g1, {0.25}), gf(g1, {2.0}), m)); // min difference 1.75
  CHECK_FALSE(strictly_less(gf(g1, {1.0}), gf(g1, {1.0}), m));
  CHECK_FALSE(strictly_less(gf(g2, {0, 0}), gf(g2, {1, 1e-12}), m));
  CHECK_THROWS_AS(StrictMargin(0.0), ConfigError);
  CHECK_THROWS_AS(StrictMargin(-1.0), ConfigError);
}

TEST_CASE("sup2 and inf2 on frozen examples") {
  GridPtr g2 = pair_grid();
  GridPtr g1 = scalar_grid();
  CHECK(sup2(gf(g2, {1, 4}), gf(g2, {3, 2})) == gf(g2, {3, 4}));
  CHECK(sup2(gf(g1, {5}), gf(g1, {5})) == gf(g1, {5}));
  CHECK(sup2(gf(g2, {-1, 0}), gf(g2, {0, -1})) == gf(g2, {0, 0}));

  CHECK(inf2(gf(g2, {1, 4}), gf(g2, {3, 2})) == gf(g2, {1, 2}));
  CHECK(inf2(gf(g1, {5}), gf(g1, {5})) == gf(g1, {5}));
  GridFunction x = gf(g2, {1, 4});
  GridFunction y = gf(g2, {3, 2});
  CHECK(inf2(x, sup2(x, y)) == x); // absorption
}

TEST_CASE("clamp_to_interval on frozen examples") {
  GridPtr g = pair_grid();
  OrderInterval I(GridFunction::constant(g, 0.25), GridFunction::constant(g, 2.0));
  CHECK(clamp_to_interval(GridFunction::constant(g, 4.0), I) ==
        GridFunction::constant(g, 2.0));
  CHECK(clamp_to_interval(GridFunction::constant(g, 1.0), I) ==
        GridFunction::constant(g, 1.0));
  CHECK(clamp_to_interval(gf(g, {0.1, 3.0}), I) == gf(g, {0.25, 2.0}));
}

TEST_CASE("sup_norm and interior_distance on frozen examples") {
  GridPtr g2 = pair_grid();
  CHECK(sup_norm(gf(g2, {0, 0})) == 0.0);
  CHECK(sup_norm(gf(g2, {-3, 2})) == 3.0);
  GridPtr g1 = scalar_grid();
  GridFunction diff = gf(g1, {2.0}) - gf(g1, {0.25});
  CHECK(sup_norm(diff) == 1.75);

  CHECK(interior_distance(GridFunction::constant(g2, 1.75)) == 1.75);
  CHECK(interior_distance(gf(g2, {0, 5})) == 0.0);
  CHECK(interior_distance(gf(g2, {-1, 5})) == -1.0);
}

TEST_CASE("normality constant is 1 and never violated on ordered samples") {
  CHECK(normality_constant() == 1.0);
  GridPtr g2 = pair_grid();
  CHECK(sup_norm(gf(g2, {1, 1})) <= 1.0 * sup_norm(gf(g2, {2, 3})));

  Rng rng(314);
  GridPtr g = Grid::uniform(0.0, 1.0, 17);
  for (int i = 0; i < 1000; ++i) {
    GridFunction x = random_function(g, rng, 0.0, 10.0);
    GridFunction bump = random_function(g, rng, 0.0, 5.0);
    GridFunction y = x + bump; // 0 <= x <= y
    CHECK(sup_norm(x) <= normality_constant() * sup_norm(y));
  }
}

TEST_CASE("lattice laws hold exactly on random functions") {
  Rng rng(2718);
  for (int round = 0; round < 400; ++round) {
    const std::size_t n = 1 + rng.next() % 24;
    GridPtr g = n == 1 ? Grid::single(0.0) : Grid::uniform(0.0, 1.0, n);
    GridFunction x = random_function(g, rng, -10.0, 10.0);
    GridFunction y = random_function(g, rng, -10.0, 10.0);
    GridFunction z = random_function(g, rng, -10.0, 10.0);

    CHECK(sup2(x, y) == sup2(y, x));
    CHECK(inf2(x, y) == inf2(y, x));
    CHECK(sup2(sup2(x, y), z) == sup2(x, sup2(y, z)));
    CHECK(inf2(inf2(x, y), z) == inf2(x, inf2(y, z)));
    CHECK(sup2(x, x) == x);
    CHECK(inf2(x, x) == x);
    CHECK(inf2(x, sup2(x, y)) == x);
    CHECK(sup2(x, inf2(x, y)) == x);

    // sup2 is below every sampled common upper bound.
    GridFunction s = sup2(x, y);
    for (int k = 0; k < 20; ++k) {
      GridFunction ub = s + random_function(g, rng, 0.0, 3.0);
      CHECK(leq(x, ub));
      CHECK(leq(y, ub));
      CHECK(leq(s, ub));
    }

    // Translation invariance.
    const double c = rng.uniform(-4.0, 4.0);
    CHECK(sup2(x + c, y + c) == sup2(x, y) + c);
  }
}

TEST_CASE("clamp is idempotent, monotone, and fixes interval members") {
  Rng rng(99);
  GridPtr g = Grid::uniform(0.0, 1.0, 9);
  OrderInterval I(GridFunction::constant(g, -1.0), GridFunction::constant(g, 1.0));
  StrictMargin m(1e-8);
  for (int round = 0; round < 300; ++round) {
    GridFunction u = random_function(g, rng, -3.0, 3.0);
    GridFunction v = u + random_function(g, rng, 0.0, 2.0); // u <= v
    GridFunction cu = clamp_to_interval(u, I);
    CHECK(clamp_to_interval(cu, I) == cu);
    CHECK(leq(cu, clamp_to_interval(v, I)));
    CHECK(I.contains(cu));

    GridFunction inside = random_in_interval(I, rng);
    CHECK(clamp_to_interval(inside, I) == inside);

    // strictly_less implies lt implies leq; never the converse.
    GridFunction w = u + random_function(g, rng, 0.0, 2.0);
    if (strictly_less(u, w, m)) CHECK(lt(u, w));
    if (lt(u, w)) CHECK(leq(u, w));
    CHECK_FALSE(strictly_less(u, u, m));
    CHECK_FALSE(lt(u, u));
    CHECK(leq(u, u));
  }
}
