#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "amann/operator.hpp"
#include "amann/solver.hpp"

namespace amann {

struct PhaseTiming {
  std::string phase;
  double milliseconds = 0.0;
};

// Everything one CLI run produced. Serialization is deterministic for a
// given problem file and seed: fixed key order, floats at 17 significant
// digits, and no environment-dependent content. Timings are therefore
// kept out of the JSON and shown in the stderr summary only.
struct RunReport {
  std::string command;
  std::string label;
  std::uint64_t seed = 0;
  StrictMargin margin{1.0};
  GridPtr grid;
  std::optional<CertificationReport> certification;
  std::optional<AnchorPair> anchors;
  std::optional<std::string> anchor_error;
  std::optional<SolveReport> solve;
  std::optional<std::vector<FixedPointCluster>> clusters;
  std::string failed_stage; // empty when all stages passed
  std::vector<PhaseTiming> timings;
};

std::string to_json(const RunReport& report);

// One "x,value" row per grid point, 17 significant digits.
void write_solution_csv(const std::filesystem::path& path, const GridFunction& u);

// Human-readable summary including per-phase wall-clock timings.
void print_summary(std::ostream& os, const RunReport& report);

} // namespace amann
