#pragma once

#include "amann/grid.hpp"

// Lattice structure of grid functions under componentwise order: the cone
// of nonnegative functions is normal (N = 1 under the sup norm) and
// minihedral, so binary sup/inf exist and are the componentwise max/min.

namespace amann {

// x <= y at every grid point.
bool leq(const GridFunction& x, const GridFunction& y);

// x <= y and x != y at some point.
bool lt(const GridFunction& x, const GridFunction& y);

// y - x exceeds the margin at every grid point (numerical form of
// "y - x lies in the cone interior").
bool strictly_less(const GridFunction& x, const GridFunction& y, const StrictMargin& m);

// Least upper bound: componentwise maximum.
GridFunction sup2(const GridFunction& x, const GridFunction& y);

// Greatest lower bound: componentwise minimum.
GridFunction inf2(const GridFunction& x, const GridFunction& y);

// sup2(inf2(u, I.hi), I.lo); always lands inside the interval.
GridFunction clamp_to_interval(const GridFunction& u, const OrderInterval& I);

double sup_norm(const GridFunction& x);

// For componentwise order under the sup norm, 0 <= x <= y forces
// ||x|| <= ||y|| with constant exactly 1.
double normality_constant();

// Minimum component of x: positive exactly when x lies in the cone
// interior, and then equal to the sup-norm distance to the cone boundary.
double interior_distance(const GridFunction& x);

} // namespace amann
