#include "amann/grid.hpp"

#include <cmath>
#include <string>

#include "amann/kernels.hpp"

namespace amann {

namespace {

void check_finite(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw ConfigError(std::string(what) + " contains a non-finite value at index " +
                        std::to_string(i));
  }
}

} // namespace

Grid::Grid(std::vector<double> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw ConfigError("grid needs at least one point");
  if (weights_.size() != points_.size())
    throw ConfigError("grid has " + std::to_string(points_.size()) + " points but " +
                      std::to_string(weights_.size()) + " weights");
  check_finite(points_, "grid points");
  check_finite(weights_, "grid weights");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1] < points_[i]))
      throw ConfigError("grid points must be strictly increasing (violated at index " +
                        std::to_string(i) + ")");
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw ConfigError("grid weights must be nonnegative");
    sum += w;
  }
  if (points_.size() >= 2) {
    const double length = points_.back() - points_.front();
    if (std::abs(sum - length) > 1e-12 * std::abs(length))
      throw ConfigError("grid weights sum to " + std::to_string(sum) +
                        ", expected domain length " + std::to_string(length));
  }
}

GridPtr Grid::uniform(double a, double b, std::size_t n_points) {
  if (n_points == 0) throw ConfigError("grid needs at least one point");
  if (n_points == 1) return single(0.5 * (a + b));
  if (!(a < b)) throw ConfigError("grid domain needs a < b");
  const double h = (b - a) / static_cast<double>(n_points - 1);
  std::vector<double> pts(n_points);
  std::vector<double> w(n_points, h);
  for (std::size_t i = 0; i < n_points; ++i) pts[i] = a + static_cast<double>(i) * h;
  pts.back() = b;
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return std::make_shared<const Grid>(std::move(pts), std::move(w));
}

GridPtr Grid::single(double point) {
  return std::make_shared<const Grid>(std::vector<double>{point}, std::vector<double>{1.0});
}

bool Grid::same_as(const Grid& other) const {
  return points_ == other.points_ && weights_ == other.weights_;
}

bool compatible(const Grid& a, const Grid& b) {
  return &a == &b || a.same_as(b);
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ConfigError("grid function needs a grid");
  if (values_.size() != grid_->size())
    throw ConfigError("grid function has " + std::to_string(values_.size()) +
                      " values on a " + std::to_string(grid_->size()) + "-point grid");
  check_finite(values_, "grid function values");
}

GridFunction GridFunction::constant(GridPtr grid, double value) {
  if (!grid) throw ConfigError("grid function needs a grid");
  std::vector<double> v(grid->size(), value);
  return GridFunction(std::move(grid), std::move(v));
}

bool operator==(const GridFunction& a, const GridFunction& b) {
  return compatible(*a.grid_, *b.grid_) && a.values_ == b.values_;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (!compatible(*a.grid(), *b.grid()))
    throw GridMismatch("operands live on different grids (" +
                       std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                       " points)");
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator+(const GridFunction& a, double c) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + c;
  return GridFunction(a.grid(), std::move(v));
}

OrderInterval::OrderInterval(GridFunction lo, GridFunction hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  require_same_grid(lo_, hi_);
  if (!kernels::all_leq(lo_.values(), hi_.values()))
    throw ConfigError("order interval needs lo <= hi componentwise");
}

double OrderInterval::width() const {
  return kernels::max_abs_diff(lo_.values(), hi_.values());
}

bool OrderInterval::contains(const GridFunction& u) const {
  require_same_grid(lo_, u);
  return kernels::all_leq(lo_.values(), u.values()) &&
         kernels::all_leq(u.values(), hi_.values());
}

StrictMargin::StrictMargin(double m, double rel) : margin(m), relative_to(rel) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw ConfigError("strict margin must be a positive finite number");
}

StrictMargin StrictMargin::for_interval(const OrderInterval& I, double relative) {
  const double scale = I.width();
  if (!(scale > 0.0))
    throw ConfigError("cannot derive a strict margin from a degenerate interval");
  return StrictMargin(relative * scale, scale);
}

} // namespace amann
