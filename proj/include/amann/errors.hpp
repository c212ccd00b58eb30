#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace amann {

// Base class for every failure the library raises.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operands live on incompatible grids.
class GridMismatch : public Error {
public:
  using Error::Error;
};

// A nonlinearity or operator was evaluated outside its declared domain.
class DomainViolation : public Error {
public:
  using Error::Error;
};

// Invalid argument, configuration value, or violated precondition.
// The CLI maps this (and ParseError) to exit code 2.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Problem file could not be parsed; carries the 1-based line number
// (0 when no specific line applies, e.g. unreadable file).
class ParseError : public Error {
public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

private:
  long line_;
};

// Interval endpoints are not ordered (u_minus <= u_plus fails somewhere).
// Carries the violated margin min(u_plus - u_minus) so reports can show
// the correctly signed value; a mathematical failure, not a parse error.
class IntervalOrderError : public Error {
public:
  IntervalOrderError(const std::string& what, double interval_order_margin)
      : Error(what), margin_(interval_order_margin) {}
  double interval_order_margin() const { return margin_; }

private:
  double margin_;
};

// Anchor scan exhausted the dyadic range or produced an inconsistent pair.
class AnchorSearchError : public Error {
public:
  AnchorSearchError(const std::string& what, double best_super, double best_sub)
      : Error(what), best_super_(best_super), best_sub_(best_sub) {}
  // Best strict margins seen on each side before giving up.
  double best_super_margin() const { return best_super_; }
  double best_sub_margin() const { return best_sub_; }

private:
  double best_super_;
  double best_sub_;
};

// Newton linear solve hit a singular or ill-conditioned Jacobian.
// Carries the values of the last iterate for diagnosis.
class JacobianBreakdown : public Error {
public:
  JacobianBreakdown(const std::string& what, std::vector<double> last_iterate,
                    double cond_estimate)
      : Error(what), last_iterate_(std::move(last_iterate)), cond_(cond_estimate) {}
  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double cond_estimate() const { return cond_; }

private:
  std::vector<double> last_iterate_;
  double cond_;
};

// monotone_iterate was given a start not comparable with its image.
class NotMonotoneStart : public Error {
public:
  using Error::Error;
};

} // namespace amann
