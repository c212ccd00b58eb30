#include "amann/lattice.hpp"

#include "amann/kernels.hpp"

namespace amann {

bool leq(const GridFunction& x, const GridFunction& y) {
  require_same_grid(x, y);
  return kernels::all_leq(x.values(), y.values());
}

bool lt(const GridFunction& x, const GridFunction& y) {
  require_same_grid(x, y);
  return kernels::all_leq(x.values(), y.values()) && x != y;
}

bool strictly_less(const GridFunction& x, const GridFunction& y, const StrictMargin& m) {
  require_same_grid(x, y);
  return kernels::min_diff(x.values(), y.values()) > m.margin;
}

GridFunction sup2(const GridFunction& x, const GridFunction& y) {
  require_same_grid(x, y);
  std::vector<double> out(x.size());
  kernels::cwise_max(x.values(), y.values(), out);
  return GridFunction(x.grid(), std::move(out));
}

GridFunction inf2(const GridFunction& x, const GridFunction& y) {
  require_same_grid(x, y);
  std::vector<double> out(x.size());
  kernels::cwise_min(x.values(), y.values(), out);
  return GridFunction(x.grid(), std::move(out));
}

GridFunction clamp_to_interval(const GridFunction& u, const OrderInterval& I) {
  require_same_grid(u, I.lo());
  std::vector<double> out(u.size());
  kernels::clamp(I.lo().values(), I.hi().values(), u.values(), out);
  return GridFunction(u.grid(), std::move(out));
}

double sup_norm(const GridFunction& x) { return kernels::max_abs(x.values()); }

double normality_constant() { return 1.0; }

double interior_distance(const GridFunction& x) {
  return kernels::min_element(x.values());
}

} // namespace amann
