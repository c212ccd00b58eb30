#include "amann/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amann::kernels {

namespace serial {

void cwise_min(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(x[i], y[i]);
}

void cwise_max(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(x[i], y[i]);
}

void clamp(std::span<const double> lo, std::span<const double> hi,
           std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::min(std::max(u[i], lo[i]), hi[i]);
}

void lerp(std::span<const double> a, std::span<const double> b, double t,
          std::span<double> out) {
  const double s = 1.0 - t;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i] + t * b[i];
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double min_element(std::span<const double> x) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : x) m = std::min(m, v);
  return m;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double min_diff(std::span<const double> x, std::span<const double> y) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::min(m, y[i] - x[i]);
  return m;
}

bool all_leq(std::span<const double> x, std::span<const double> y) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] <= y[i])) return false;
  return true;
}

void matvec(std::span<const double> a, std::span<const double> x,
            std::span<double> y, std::size_t rows, std::size_t cols) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = a.data() + i * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

} // namespace serial

void cwise_min(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::min(x[i], y[i]);
}

void cwise_max(std::span<const double> x, std::span<const double> y, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = std::max(x[i], y[i]);
}

void clamp(std::span<const double> lo, std::span<const double> hi,
           std::span<const double> u, std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = std::min(std::max(u[i], lo[i]), hi[i]);
}

void lerp(std::span<const double> a, std::span<const double> b, double t,
          std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
  const double s = 1.0 - t;
#pragma omp parallel for if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = s * a[i] + t * b[i];
}

double max_abs(std::span<const double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

double min_element(std::span<const double> x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  double m = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : m) if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::min(m, x[i]);
  return m;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  double m = 0.0;
#pragma omp parallel for reduction(max : m) if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double min_diff(std::span<const double> x, std::span<const double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  double m = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : m) if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::min(m, y[i] - x[i]);
  return m;
}

bool all_leq(std::span<const double> x, std::span<const double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  bool ok = true;
#pragma omp parallel for reduction(&& : ok) if (n >= elementwise_cutoff)
  for (std::ptrdiff_t i = 0; i < n; ++i) ok = ok && (x[i] <= y[i]);
  return ok;
}

void matvec(std::span<const double> a, std::span<const double> x,
            std::span<double> y, std::size_t rows, std::size_t cols) {
  const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(rows);
  const bool par = rows * cols >= static_cast<std::size_t>(matvec_cutoff);
#pragma omp parallel for if (par)
  for (std::ptrdiff_t i = 0; i < r; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * cols;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

} // namespace amann::kernels
