#include "amann/hammerstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "amann/kernels.hpp"

namespace amann {

KernelSpec KernelSpec::constant_kernel(double c) {
  KernelSpec k;
  k.kind = Kind::constant;
  k.c = c;
  return k;
}

KernelSpec KernelSpec::separable(std::vector<double> g_coeffs) {
  if (g_coeffs.empty()) throw ConfigError("separable kernel needs polynomial coefficients");
  KernelSpec k;
  k.kind = Kind::separable;
  k.g_coeffs = std::move(g_coeffs);
  return k;
}

KernelSpec KernelSpec::exponential_decay(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("exponential decay rate must be positive");
  KernelSpec k;
  k.kind = Kind::exponential_decay;
  k.alpha = alpha;
  return k;
}

KernelSpec KernelSpec::table_kernel(std::vector<double> entries) {
  KernelSpec k;
  k.kind = Kind::table;
  k.table = std::move(entries);
  return k;
}

namespace {

double poly_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

} // namespace

double KernelSpec::eval(double x, double y) const {
  switch (kind) {
    case Kind::constant: return c;
    case Kind::separable: return poly_eval(g_coeffs, x) * poly_eval(g_coeffs, y);
    case Kind::exponential_decay: return std::exp(-alpha * std::abs(x - y));
    case Kind::table: break;
  }
  throw ConfigError("table kernels have no pointwise evaluation");
}

NonlinearitySpec NonlinearitySpec::power(double q) {
  if (!(q > 0.0)) throw ConfigError("power nonlinearity needs q > 0");
  NonlinearitySpec f;
  f.kind = Kind::power;
  f.q = q;
  return f;
}

NonlinearitySpec NonlinearitySpec::affine_power(double a, double b, double q) {
  if (!(q > 0.0)) throw ConfigError("affine power nonlinearity needs q > 0");
  NonlinearitySpec f;
  f.kind = Kind::affine_power;
  f.a = a;
  f.b = b;
  f.q = q;
  return f;
}

NonlinearitySpec NonlinearitySpec::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ConfigError("polynomial nonlinearity needs coefficients");
  NonlinearitySpec f;
  f.kind = Kind::polynomial;
  f.coeffs = std::move(coeffs);
  return f;
}

NonlinearitySpec NonlinearitySpec::table(std::vector<double> u, std::vector<double> fv) {
  if (u.size() < 2 || u.size() != fv.size())
    throw ConfigError("table nonlinearity needs matching u and f columns (>= 2 rows)");
  for (std::size_t i = 1; i < u.size(); ++i)
    if (!(u[i - 1] < u[i]))
      throw ConfigError("table nonlinearity u column must be strictly increasing");
  NonlinearitySpec f;
  f.kind = Kind::table;
  f.table_u = std::move(u);
  f.table_f = std::move(fv);
  return f;
}

double NonlinearitySpec::eval(double /*y*/, double u) const {
  switch (kind) {
    case Kind::power: return std::pow(u, q);
    case Kind::affine_power: return a + b * std::pow(u, q);
    case Kind::polynomial: return poly_eval(coeffs, u);
    case Kind::table: {
      if (u <= table_u.front()) return table_f.front();
      if (u >= table_u.back()) return table_f.back();
      auto it = std::upper_bound(table_u.begin(), table_u.end(), u);
      const std::size_t hi = static_cast<std::size_t>(it - table_u.begin());
      const std::size_t lo = hi - 1;
      const double s = (u - table_u[lo]) / (table_u[hi] - table_u[lo]);
      return table_f[lo] + s * (table_f[hi] - table_f[lo]);
    }
  }
  throw ConfigError("unknown nonlinearity kind");
}

std::string NonlinearitySpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::power: os << "u^" << q; break;
    case Kind::affine_power: os << a << " + " << b << " u^" << q; break;
    case Kind::polynomial: os << "polynomial of degree " << coeffs.size() - 1; break;
    case Kind::table: os << "table with " << table_u.size() << " rows"; break;
  }
  return os.str();
}

namespace {

// Weighted kernel matrix W[i][j] = lambda * w_j * k(x_i, y_j); also checks
// the raw kernel entries for nonnegativity and finiteness.
std::shared_ptr<const std::vector<double>> assemble_matrix(const ProblemInstance& p) {
  const std::size_t n = p.grid->size();
  if (p.kernel.kind == KernelSpec::Kind::table && p.kernel.table.size() != n * n)
    throw ConfigError("kernel table has " + std::to_string(p.kernel.table.size()) +
                      " entries, expected " + std::to_string(n * n));

  auto matrix = std::make_shared<std::vector<double>>(n * n);
  const auto pts = p.grid->points();
  const auto wts = p.grid->weights();
  std::vector<double>& m = *matrix;

  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for if (n * n >= static_cast<std::size_t>(kernels::matvec_cutoff))
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = p.kernel.kind == KernelSpec::Kind::table
                           ? p.kernel.table[static_cast<std::size_t>(i) * n + j]
                           : p.kernel.eval(pts[static_cast<std::size_t>(i)], pts[j]);
      m[static_cast<std::size_t>(i) * n + j] = p.lambda * wts[j] * k;
    }
  }

  // Validation runs on the raw kernel sign: lambda and the weights are
  // nonnegative, so checking the scaled entries is equivalent, except that
  // a zero weight could mask a negative kernel value. Check raw entries.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = p.kernel.kind == KernelSpec::Kind::table
                           ? p.kernel.table[i * n + j]
                           : p.kernel.eval(pts[i], pts[j]);
      if (!std::isfinite(k))
        throw ConfigError("kernel entry (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") is not finite");
      if (k < 0.0)
        throw ConfigError("kernel entry (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") = " + std::to_string(k) +
                          " is negative; a monotone integral operator needs k >= 0");
    }
  }
  return matrix;
}

void check_nondecreasing(const NonlinearitySpec& f, double dom_lo, double dom_hi) {
  constexpr std::size_t kSamples = 2048;
  double prev_u = dom_lo;
  double prev_f = f.eval(0.0, dom_lo);
  for (std::size_t s = 1; s <= kSamples; ++s) {
    const double u = dom_lo + (dom_hi - dom_lo) * static_cast<double>(s) /
                                  static_cast<double>(kSamples);
    const double fu = f.eval(0.0, u);
    if (!std::isfinite(fu))
      throw ConfigError("nonlinearity " + f.describe() + " is not finite at u = " +
                        std::to_string(u));
    if (fu < prev_f)
      throw ConfigError("nonlinearity " + f.describe() + " decreases on the value range: f(" +
                        std::to_string(prev_u) + ") = " + std::to_string(prev_f) + " > f(" +
                        std::to_string(u) + ") = " + std::to_string(fu));
    prev_u = u;
    prev_f = fu;
  }
}

} // namespace

MonotoneOperator assemble(const ProblemInstance& p) {
  if (!p.grid) throw ConfigError("problem instance needs a grid");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    throw ConfigError("problem scale lambda must be a positive finite number");
  if (!compatible(*p.interval.grid(), *p.grid))
    throw GridMismatch("problem interval lives on a different grid");

  const double dom_lo = kernels::min_element(p.interval.lo().values());
  double dom_hi = -std::numeric_limits<double>::infinity();
  for (double v : p.interval.hi().values()) dom_hi = std::max(dom_hi, v);

  check_nondecreasing(p.nonlinearity, dom_lo, dom_hi);
  auto matrix = assemble_matrix(p);

  const std::size_t n = p.grid->size();
  GridPtr grid = p.grid;
  NonlinearitySpec f = p.nonlinearity;
  auto pts = std::make_shared<std::vector<double>>(p.grid->points().begin(),
                                                   p.grid->points().end());

  auto eval = [matrix, grid, f, pts, n, dom_lo, dom_hi](const GridFunction& u) {
    std::vector<double> fu(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double uj = u[j];
      if (uj < dom_lo || uj > dom_hi)
        throw DomainViolation("nonlinearity evaluated at u = " + std::to_string(uj) +
                              " outside its value range [" + std::to_string(dom_lo) + ", " +
                              std::to_string(dom_hi) + "]");
      fu[j] = f.eval((*pts)[j], uj);
    }
    std::vector<double> out(n);
    kernels::matvec(*matrix, fu, out, n, n);
    return GridFunction(grid, std::move(out));
  };

  return MonotoneOperator(p.label, p.grid, std::move(eval), p.interval);
}

ProblemInstance regrid(const ProblemInstance& p, std::size_t n_points) {
  if (!p.kernel.is_symbolic())
    throw ConfigError("cannot regrid an instance with a table kernel");
  if (p.grid->size() < 2)
    throw ConfigError("cannot regrid a single-point instance (no domain to refine)");
  const double lo0 = p.interval.lo()[0];
  const double hi0 = p.interval.hi()[0];
  for (std::size_t i = 0; i < p.grid->size(); ++i) {
    if (p.interval.lo()[i] != lo0 || p.interval.hi()[i] != hi0)
      throw ConfigError("cannot regrid an instance with a non-constant interval");
  }
  ProblemInstance out = p;
  out.grid = Grid::uniform(p.grid->domain_lo(), p.grid->domain_hi(), n_points);
  out.interval = OrderInterval(GridFunction::constant(out.grid, lo0),
                               GridFunction::constant(out.grid, hi0));
  if (p.expected_fixed_point) {
    const double v0 = (*p.expected_fixed_point)[0];
    out.expected_fixed_point = GridFunction::constant(out.grid, v0);
  }
  return out;
}

double calibrate_lambda(const GridPtr& grid, const KernelSpec& kernel,
                        const NonlinearitySpec& f, const OrderInterval& interval,
                        double target_margin) {
  auto margins_at = [&](double lambda) {
    ProblemInstance trial{"calibration", grid, kernel, f, interval, lambda, {}, ""};
    MonotoneOperator T = assemble(trial);
    return certify_boundary(T, interval);
  };

  // g(lambda) = super - sub is strictly decreasing: raising lambda raises
  // T(lo) (hurting the supersolution margin) and raises T(hi) (helping the
  // subsolution margin). Bracket the sign change, then bisect.
  double lo = 1e-9;
  double hi = 1.0;
  auto balance = [&](double lambda) {
    BoundaryMargins m = margins_at(lambda);
    return m.super_margin - m.sub_margin;
  };
  if (balance(lo) <= 0.0)
    throw ConfigError("lambda calibration failed: margins cannot be balanced");
  int grow = 0;
  while (balance(hi) > 0.0) {
    hi *= 2.0;
    if (++grow > 60) throw ConfigError("lambda calibration failed: no sign change found");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (balance(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);

  BoundaryMargins m = margins_at(lambda);
  if (!(m.super_margin >= target_margin && m.sub_margin >= target_margin))
    throw ConfigError("lambda calibration failed: balanced margins " +
                      std::to_string(m.super_margin) + " / " + std::to_string(m.sub_margin) +
                      " fall short of the target " + std::to_string(target_margin));
  return lambda;
}

std::vector<ProblemInstance> catalog() {
  std::vector<ProblemInstance> instances;

  {
    GridPtr g = Grid::single(0.5);
    OrderInterval I(GridFunction::constant(g, 0.25), GridFunction::constant(g, 2.0));
    instances.push_back(ProblemInstance{
        "C1-scalar-square", g, KernelSpec::constant_kernel(1.0),
        NonlinearitySpec::power(2.0), I, 1.0, GridFunction::constant(g, 1.0),
        "unique interior crossing of u^2 = u in (0.25, 2)"});
  }
  {
    GridPtr g = Grid::uniform(0.0, 1.0, 101);
    OrderInterval I(GridFunction::constant(g, 0.25), GridFunction::constant(g, 2.0));
    instances.push_back(ProblemInstance{
        "C2-constant-kernel-square", g, KernelSpec::constant_kernel(1.0),
        NonlinearitySpec::power(2.0), I, 1.0, GridFunction::constant(g, 1.0),
        "constant-function reduction to the scalar square map; fixed point == 1"});
  }
  {
    GridPtr g = Grid::single(0.5);
    OrderInterval I(GridFunction::constant(g, 0.1), GridFunction::constant(g, 3.0));
    instances.push_back(ProblemInstance{
        "C3-scalar-cubic", g, KernelSpec::constant_kernel(1.0),
        NonlinearitySpec::power(3.0), I, 1.0, GridFunction::constant(g, 1.0),
        "unique interior crossing of u^3 = u in (0.1, 3)"});
  }
  {
    GridPtr g = Grid::uniform(0.0, 1.0, 101);
    OrderInterval I(GridFunction::constant(g, 0.25), GridFunction::constant(g, 2.0));
    const double target = 10.0 * StrictMargin::for_interval(I).margin;
    const KernelSpec kernel = KernelSpec::exponential_decay(1.0);
    const NonlinearitySpec f = NonlinearitySpec::power(2.0);
    const double lambda = calibrate_lambda(g, kernel, f, I, target);
    instances.push_back(ProblemInstance{
        "C4-exp-kernel", g, kernel, f, I, lambda, std::nullopt,
        "no closed form; acceptance by residual and exclusion checks only"});
  }
  {
    GridPtr g = Grid::single(0.5);
    OrderInterval I(GridFunction::constant(g, 0.25), GridFunction::constant(g, 2.0));
    instances.push_back(ProblemInstance{
        "C5-scalar-sqrt-negative-control", g, KernelSpec::constant_kernel(1.0),
        NonlinearitySpec::power(0.5), I, 1.0, std::nullopt,
        "classic boundary configuration (T lo >> lo, T hi << hi); certification must fail"});
  }
  {
    GridPtr g = Grid::single(0.5);
    OrderInterval I(GridFunction::constant(g, 0.5), GridFunction::constant(g, 3.5));
    instances.push_back(ProblemInstance{
        "C6-scalar-multiroot", g, KernelSpec::constant_kernel(1.0),
        NonlinearitySpec::polynomial({-3.0, 6.5, -3.0, 0.5}), I, 1.0,
        GridFunction::constant(g, 2.0),
        "f(u) = u + 0.5 (u-1)(u-2)(u-3); interior crossings at u = 1, 2, 3"});
  }

  return instances;
}

const ProblemInstance& catalog_instance(const std::vector<ProblemInstance>& instances,
                                        std::string_view label_prefix) {
  for (const ProblemInstance& p : instances) {
    if (std::string_view(p.label).substr(0, label_prefix.size()) == label_prefix) return p;
  }
  throw ConfigError("no catalog instance labelled '" + std::string(label_prefix) + "'");
}

} // namespace amann
