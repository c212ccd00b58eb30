#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amann/operator.hpp"

namespace amann {

// Nonnegative kernel k(x, y); nonnegativity is what makes the assembled
// integral operator monotone increasing and is checked entry by entry.
struct KernelSpec {
  enum class Kind { constant, separable, exponential_decay, table };

  Kind kind = Kind::constant;
  double c = 1.0;                // constant: k = c
  double alpha = 1.0;            // exponential_decay: k = exp(-alpha |x - y|)
  std::vector<double> g_coeffs;  // separable: k = g(x) g(y), g polynomial (low order first)
  std::vector<double> table;     // table: row-major entries, rows = x index

  static KernelSpec constant_kernel(double c);
  static KernelSpec separable(std::vector<double> g_coeffs);
  static KernelSpec exponential_decay(double alpha);
  static KernelSpec table_kernel(std::vector<double> entries);

  bool is_symbolic() const { return kind != Kind::table; }
  // Pointwise evaluation; symbolic kinds only.
  double eval(double x, double y) const;
};

// Scalar nonlinearity f(y, u), required nondecreasing in u on the
// instance's value range. Current kinds ignore y; the argument stays in
// the contract for kernel-matched generalizations.
struct NonlinearitySpec {
  enum class Kind { power, affine_power, polynomial, table };

  Kind kind = Kind::power;
  double q = 2.0;             // power / affine_power exponent (> 0)
  double a = 0.0, b = 1.0;    // affine_power: a + b u^q
  std::vector<double> coeffs; // polynomial, low order first
  std::vector<double> table_u, table_f; // table: piecewise-linear samples

  static NonlinearitySpec power(double q);
  static NonlinearitySpec affine_power(double a, double b, double q);
  static NonlinearitySpec polynomial(std::vector<double> coeffs);
  static NonlinearitySpec table(std::vector<double> u, std::vector<double> f);

  double eval(double y, double u) const;
  std::string describe() const;
};

struct ProblemInstance {
  std::string label;
  GridPtr grid;
  KernelSpec kernel;
  NonlinearitySpec nonlinearity;
  OrderInterval interval;
  double lambda = 1.0;
  std::optional<GridFunction> expected_fixed_point;
  std::string expectation_note;
};

// (T u)(x_i) = lambda * sum_j w_j k(x_i, y_j) f(y_j, u(y_j)) with the
// grid's quadrature weights. The weighted kernel matrix is assembled once;
// evaluation is a fixed-order matvec. On a single-point grid with
// constant kernel 1 this is the scalar map lambda * f(u).
//
// Construction is rejected for negative kernel entries and for
// nonlinearities that decrease anywhere on the sampled value range
// [min lo, max hi]; evaluation outside that range raises DomainViolation.
MonotoneOperator assemble(const ProblemInstance& p);

// Rebuild the instance on an n-point uniform grid over the same domain.
// Needs a symbolic kernel and a constant interval; lambda is kept as is.
ProblemInstance regrid(const ProblemInstance& p, std::size_t n_points);

// Bisection on lambda balancing the supersolution margin against the
// subsolution margin (their difference is strictly decreasing in lambda).
// Fails unless both balanced margins reach target_margin.
double calibrate_lambda(const GridPtr& grid, const KernelSpec& kernel,
                        const NonlinearitySpec& f, const OrderInterval& interval,
                        double target_margin);

// Built-in certified test problems:
//   C1 scalar square map on [0.25, 2], fixed point 1
//   C2 constant-kernel quadratic on a 101-point grid, fixed point == 1
//   C3 scalar cubic on [0.1, 3], fixed point 1
//   C4 exponential-decay kernel, lambda calibrated, residual-only acceptance
//   C5 scalar square root on [0.25, 2] -- negative control with the
//      classic (non-reversed) boundary configuration; fails certification
//   C6 scalar increasing cubic polynomial with interior crossings at 1, 2, 3
std::vector<ProblemInstance> catalog();

// Catalog entry whose label starts with the given prefix ("C1" .. "C6").
const ProblemInstance& catalog_instance(const std::vector<ProblemInstance>& instances,
                                        std::string_view label_prefix);

} // namespace amann
