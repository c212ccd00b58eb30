#include <doctest.h>

#include <utility>
#include <vector>

#include "amann/kernels.hpp"
#include "amann/rng.hpp"

using namespace amann;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo = -5.0,
                               double hi = 5.0) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

} // namespace

// Sizes straddle the parallel cutoffs so both code paths run.
TEST_CASE("parallel kernels agree bitwise with the serial reference") {
  for (std::size_t n : {1ul, 3ul, 101ul, 8192ul, 20000ul}) {
    auto x = random_vec(n, 11 + n);
    auto y = random_vec(n, 77 + n);

    std::vector<double> a(n), b(n);
    kernels::serial::cwise_min(x, y, a);
    kernels::cwise_min(x, y, b);
    CHECK(a == b);

    kernels::serial::cwise_max(x, y, a);
    kernels::cwise_max(x, y, b);
    CHECK(a == b);

    auto lo = random_vec(n, 5 + n, -2.0, 0.0);
    auto hi = random_vec(n, 6 + n, 0.0, 2.0);
    kernels::serial::clamp(lo, hi, x, a);
    kernels::clamp(lo, hi, x, b);
    CHECK(a == b);

    kernels::serial::lerp(x, y, 0.3, a);
    kernels::lerp(x, y, 0.3, b);
    CHECK(a == b);

    CHECK(kernels::serial::max_abs(x) == kernels::max_abs(x));
    CHECK(kernels::serial::min_element(x) == kernels::min_element(x));
    CHECK(kernels::serial::max_abs_diff(x, y) == kernels::max_abs_diff(x, y));
    CHECK(kernels::serial::min_diff(x, y) == kernels::min_diff(x, y));
    CHECK(kernels::serial::all_leq(x, y) == kernels::all_leq(x, y));
  }
}

TEST_CASE("matvec matches the serial reference and a naive oracle") {
  const std::pair<std::size_t, std::size_t> shapes[] = {
      {1, 1}, {7, 3}, {101, 101}, {150, 200}, {256, 256}};
  for (auto [rows, cols] : shapes) {
    auto a = random_vec(rows * cols, rows * 1000 + cols);
    auto x = random_vec(cols, cols + 1);
    std::vector<double> y1(rows), y2(rows), y3(rows);

    kernels::serial::matvec(a, x, y1, rows, cols);
    kernels::matvec(a, x, y2, rows, cols);
    CHECK(y1 == y2);

    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < cols; ++j) acc += a[i * cols + j] * x[j];
      y3[i] = acc;
    }
    CHECK(y1 == y3);
  }
}

TEST_CASE("reductions are exact selections") {
  std::vector<double> x = {3.0, -7.5, 2.0, 7.5};
  CHECK(kernels::max_abs(x) == 7.5);
  CHECK(kernels::min_element(x) == -7.5);
  std::vector<double> y = {3.0, -8.0, 2.5, 8.0};
  CHECK(kernels::max_abs_diff(x, y) == 0.5);
  CHECK(kernels::min_diff(x, y) == -0.5); // min over i of y[i] - x[i]
  CHECK_FALSE(kernels::all_leq(x, y));
  CHECK(kernels::all_leq(y, std::vector<double>{3.0, -8.0, 2.5, 8.0}));
}
