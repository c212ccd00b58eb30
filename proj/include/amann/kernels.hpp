#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops. The functions in amann::kernels are the
// production versions: they switch to OpenMP above a size cutoff and use
// only exact, order-insensitive combiners (min/max/&&) or fixed-order
// per-row accumulation, so results are bitwise identical to the serial
// reference for any thread count. amann::kernels::serial keeps plain
// single-threaded implementations for tests and benchmarks.

namespace amann::kernels {

// Loops smaller than these run on the calling thread.
inline constexpr std::ptrdiff_t elementwise_cutoff = 8192;
inline constexpr std::ptrdiff_t matvec_cutoff = 16384; // rows * cols

void cwise_min(std::span<const double> x, std::span<const double> y, std::span<double> out);
void cwise_max(std::span<const double> x, std::span<const double> y, std::span<double> out);

// out[i] = min(max(u[i], lo[i]), hi[i]); callers guarantee lo <= hi.
void clamp(std::span<const double> lo, std::span<const double> hi,
           std::span<const double> u, std::span<double> out);

// out[i] = (1 - t) * a[i] + t * b[i]
void lerp(std::span<const double> a, std::span<const double> b, double t,
          std::span<double> out);

double max_abs(std::span<const double> x);
double min_element(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);

// min over i of y[i] - x[i]
double min_diff(std::span<const double> x, std::span<const double> y);

bool all_leq(std::span<const double> x, std::span<const double> y);

// y = A x with A row-major rows x cols; each y[i] is accumulated in
// column order by exactly one thread.
void matvec(std::span<const double> a, std::span<const double> x,
            std::span<double> y, std::size_t rows, std::size_t cols);

namespace serial {

void cwise_min(std::span<const double> x, std::span<const double> y, std::span<double> out);
void cwise_max(std::span<const double> x, std::span<const double> y, std::span<double> out);
void clamp(std::span<const double> lo, std::span<const double> hi,
           std::span<const double> u, std::span<double> out);
void lerp(std::span<const double> a, std::span<const double> b, double t,
          std::span<double> out);
double max_abs(std::span<const double> x);
double min_element(std::span<const double> x);
double max_abs_diff(std::span<const double> x, std::span<const double> y);
double min_diff(std::span<const double> x, std::span<const double> y);
bool all_leq(std::span<const double> x, std::span<const double> y);
void matvec(std::span<const double> a, std::span<const double> x,
            std::span<double> y, std::size_t rows, std::size_t cols);

} // namespace serial

} // namespace amann::kernels
