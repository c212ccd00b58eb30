#pragma once

#include <memory>
#include <span>
#include <vector>

#include "amann/errors.hpp"

namespace amann {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

// One-dimensional quadrature grid: strictly increasing points with one
// nonnegative weight per point. A single-point grid (weight 1) is the
// embedding of scalar problems; for two or more points the weights must
// sum to the domain length within 1e-12 relative.
class Grid {
public:
  Grid(std::vector<double> points, std::vector<double> weights);

  // Uniform grid on [a, b] with trapezoidal weights. n_points == 1
  // degenerates to single((a + b) / 2).
  static GridPtr uniform(double a, double b, std::size_t n_points);
  static GridPtr single(double point);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  double domain_lo() const { return points_.front(); }
  double domain_hi() const { return points_.back(); }

  bool same_as(const Grid& other) const;

private:
  std::vector<double> points_;
  std::vector<double> weights_;
};

bool compatible(const Grid& a, const Grid& b);

// Real-valued function on a grid; immutable after construction.
// NaN or infinite values are rejected so that order comparisons stay total.
class GridFunction {
public:
  GridFunction(GridPtr grid, std::vector<double> values);
  static GridFunction constant(GridPtr grid, double value);

  std::size_t size() const { return values_.size(); }
  const GridPtr& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Exact value equality on compatible grids; no tolerance.
  friend bool operator==(const GridFunction& a, const GridFunction& b);
  friend bool operator!=(const GridFunction& a, const GridFunction& b) { return !(a == b); }

private:
  GridPtr grid_;
  std::vector<double> values_;
};

void require_same_grid(const GridFunction& a, const GridFunction& b);

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);
GridFunction operator+(const GridFunction& a, double c);

// Componentwise order interval [lo, hi]; construction requires lo <= hi
// on one shared grid.
class OrderInterval {
public:
  OrderInterval(GridFunction lo, GridFunction hi);

  const GridFunction& lo() const { return lo_; }
  const GridFunction& hi() const { return hi_; }
  const GridPtr& grid() const { return lo_.grid(); }

  double width() const; // sup norm of hi - lo
  bool contains(const GridFunction& u) const;

private:
  GridFunction lo_;
  GridFunction hi_;
};

// Positive threshold below which a componentwise gap does not count as
// strict. Strict cone-interior membership is open, so it is meaningless
// at exact floating-point zero; every strict comparison in the library
// goes through one of these.
struct StrictMargin {
  double margin;
  double relative_to; // scale the margin was derived from (0 if set directly)

  explicit StrictMargin(double m, double rel = 0.0);

  // Default policy: margin = relative * sup_norm(hi - lo).
  static StrictMargin for_interval(const OrderInterval& I, double relative = 1e-8);
};

} // namespace amann
