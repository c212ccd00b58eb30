#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "amann/hammerstein.hpp"
#include "amann/solver.hpp"

namespace amann {

// Command-line overrides applied on top of the file's [solver] section.
struct SolverOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> margin; // absolute
  std::optional<double> tol_res;
  std::optional<long> max_iter;
  std::optional<int> n_starts;
};

struct ProblemFile {
  ProblemInstance instance;
  SolverConfig solver;
  std::string label;
  bool lambda_auto = false; // lambda came from calibration
};

// Parses the INI-style problem description:
//
//   [meta]          label
//   [grid]          n_points, domain (two reals "a b")
//   [kernel]        kind = constant | separable | exponential_decay | table,
//                   c / alpha / coeffs / csv, lambda (positive real or "auto")
//   [nonlinearity]  kind = power | affine_power | polynomial | table,
//                   q / a / b / coeffs / csv
//   [interval]      u_minus, u_plus (constants) or u_minus_csv, u_plus_csv
//                   (one value per line, n_points lines)
//   [solver]        seed, margin, tol_res, tol_step, max_iter, damping,
//                   n_starts, fd_step
//
// '#' and ';' start comments. Unknown sections or keys are rejected with
// the offending name and line; all numeric fields must be finite. CSV
// paths resolve relative to the problem file. "lambda = auto" runs the
// margin-balancing calibration against 10x the active strict margin.
ProblemFile load_problem_file(const std::filesystem::path& path,
                              const SolverOverrides& overrides = {});

} // namespace amann
