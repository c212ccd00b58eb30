// Timing comparison between the OpenMP kernels and their serial reference,
// plus an end-to-end operator-evaluation benchmark on a large grid.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "amann/hammerstein.hpp"
#include "amann/kernels.hpp"
#include "amann/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    body();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  amann::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

void report_row(const std::string& name, std::size_t n, double serial_ms,
                double parallel_ms) {
  std::printf("%-28s n=%-9zu serial %10.3f ms   parallel %10.3f ms   speedup %5.2fx\n",
              name.c_str(), n, serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("built without openmp\n\n");
#endif

  constexpr int kReps = 7;

  for (std::size_t n : {100000ull, 1000000ull, 4000000ull}) {
    auto x = random_vector(n, 1);
    auto y = random_vector(n, 2);
    std::vector<double> out(n);
    const int inner = 8;
    double s = time_ms(kReps, [&] {
      for (int i = 0; i < inner; ++i) amann::kernels::serial::cwise_max(x, y, out);
    });
    double p = time_ms(kReps, [&] {
      for (int i = 0; i < inner; ++i) amann::kernels::cwise_max(x, y, out);
    });
    report_row("cwise_max (x8)", n, s, p);

    volatile double sink = 0.0;
    s = time_ms(kReps, [&] {
      for (int i = 0; i < inner; ++i) sink = amann::kernels::serial::max_abs(x);
    });
    p = time_ms(kReps, [&] {
      for (int i = 0; i < inner; ++i) sink = amann::kernels::max_abs(x);
    });
    (void)sink;
    report_row("max_abs (x8)", n, s, p);
  }
  std::printf("\n");

  for (std::size_t n : {256ull, 512ull, 1024ull, 2048ull}) {
    auto a = random_vector(n * n, 3);
    auto x = random_vector(n, 4);
    std::vector<double> y(n);
    double s = time_ms(kReps, [&] { amann::kernels::serial::matvec(a, x, y, n, n); });
    double p = time_ms(kReps, [&] { amann::kernels::matvec(a, x, y, n, n); });
    report_row("matvec", n, s, p);
  }
  std::printf("\n");

  // Whole-operator evaluation on a large exponential-decay instance.
  {
    const std::size_t n = 2001;
    amann::GridPtr grid = amann::Grid::uniform(0.0, 1.0, n);
    amann::OrderInterval I(amann::GridFunction::constant(grid, 0.25),
                           amann::GridFunction::constant(grid, 2.0));
    amann::ProblemInstance p{"bench", grid, amann::KernelSpec::exponential_decay(1.0),
                             amann::NonlinearitySpec::power(2.0), I, 0.8, {}, ""};
    amann::MonotoneOperator T = amann::assemble(p);
    amann::GridFunction u = amann::GridFunction::constant(grid, 1.0);
    const double ms = time_ms(kReps, [&] { (void)T(u); });
    std::printf("operator evaluation          n=%-9zu %10.3f ms per call\n", n, ms);
  }

  return 0;
}
