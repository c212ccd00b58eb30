// Command-line frontend: certify / anchors / solve / scan on a problem
// file. JSON report to stdout (or --out), human summary to stderr.
// Exit codes: 0 success, 1 mathematical failure (certification, anchors,
// or solve), 2 input or configuration error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "amann/problem_file.hpp"
#include "amann/report.hpp"
#include "amann/version.hpp"

namespace {

enum class Command { certify, anchors, solve, scan };

struct Options {
  Command command = Command::certify;
  std::string problem_path;
  std::string out_path;
  amann::SolverOverrides overrides;
};

class PhaseClock {
public:
  explicit PhaseClock(amann::RunReport& report) : report_(report) {}

  template <typename F>
  auto run(const std::string& phase, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      record(phase, t0);
    } else {
      auto result = body();
      record(phase, t0);
      return result;
    }
  }

private:
  void record(const std::string& phase, std::chrono::steady_clock::time_point t0) {
    const auto t1 = std::chrono::steady_clock::now();
    report_.timings.push_back(
        {phase, std::chrono::duration<double, std::milli>(t1 - t0).count()});
  }

  amann::RunReport& report_;
};

void emit(const amann::RunReport& report, const Options& opt) {
  const std::string json = amann::to_json(report);
  if (opt.out_path.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(opt.out_path);
    if (!out) throw amann::ConfigError("cannot write report to '" + opt.out_path + "'");
    out << json;
  }
  amann::print_summary(std::cerr, report);

  // Fixed-point values also go beside the report as a per-point CSV.
  if (!opt.out_path.empty() && report.solve &&
      report.solve->classification == amann::Classification::interior_fixed_point) {
    std::filesystem::path csv(opt.out_path);
    csv.replace_extension(".csv");
    amann::write_solution_csv(csv, report.solve->candidate);
    std::cerr << "   solution csv: " << csv.string() << "\n";
  }
}

int run(const Options& opt) {
  amann::RunReport report;
  PhaseClock clock(report);
  switch (opt.command) {
    case Command::certify: report.command = "certify"; break;
    case Command::anchors: report.command = "anchors"; break;
    case Command::solve: report.command = "solve"; break;
    case Command::scan: report.command = "scan"; break;
  }

  amann::ProblemFile problem = [&] {
    try {
      return clock.run("load", [&] {
        return amann::load_problem_file(opt.problem_path, opt.overrides);
      });
    } catch (const amann::IntervalOrderError& e) {
      // Reversed endpoints: report the signed margin as a certification
      // failure rather than aborting without a report.
      report.label = std::filesystem::path(opt.problem_path).stem().string();
      amann::CertificationReport cert;
      cert.interval_order_margin = e.interval_order_margin();
      report.certification = cert;
      report.failed_stage = "certify";
      emit(report, opt);
      std::cerr << "error: " << e.what() << "\n";
      std::exit(1);
    }
  }();
  report.label = problem.label;
  report.seed = problem.solver.seed;
  report.margin = *problem.solver.margin;
  report.grid = problem.instance.grid;

  amann::MonotoneOperator T = clock.run("assemble", [&] {
    return amann::assemble(problem.instance);
  });
  const amann::OrderInterval& I = problem.instance.interval;

  constexpr long kCertifySamples = 1000;
  report.certification = clock.run("certify", [&] {
    return amann::certify(T, I, *problem.solver.margin, kCertifySamples,
                          problem.solver.seed);
  });
  if (!report.certification->passed()) {
    report.failed_stage = "certify";
    emit(report, opt);
    return 1;
  }
  if (opt.command == Command::certify) {
    emit(report, opt);
    return 0;
  }

  try {
    report.anchors = clock.run("anchors", [&] {
      return amann::find_anchors(T, I, problem.solver);
    });
  } catch (const amann::AnchorSearchError& e) {
    report.anchor_error = e.what();
    report.failed_stage = "anchors";
    emit(report, opt);
    return 1;
  }
  if (opt.command == Command::anchors) {
    emit(report, opt);
    return 0;
  }

  if (opt.command == Command::solve) {
    report.solve = clock.run("solve", [&] {
      return amann::find_interior_fixed_point(T, I, *report.anchors, problem.solver);
    });
    if (report.solve->classification != amann::Classification::interior_fixed_point) {
      report.failed_stage = "solve";
      emit(report, opt);
      return 1;
    }
    emit(report, opt);
    return 0;
  }

  // scan
  report.solve = clock.run("solve", [&] {
    return amann::find_interior_fixed_point(T, I, *report.anchors, problem.solver);
  });
  report.clusters = clock.run("scan", [&] {
    return amann::scan_fixed_points(T, I, *report.anchors, problem.solver);
  });
  if (report.clusters->empty()) {
    report.failed_stage = "scan";
    emit(report, opt);
    return 1;
  }
  emit(report, opt);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"amann: certified interior fixed points of monotone increasing "
               "operators between a strong supersolution below and a strong "
               "subsolution above"};
  app.require_subcommand(1);

  Options opt;
  std::optional<std::uint64_t> seed;
  std::optional<double> margin;
  std::optional<double> tol_res;
  std::optional<long> max_iter;
  std::optional<int> starts;

  app.add_option("--seed", seed, "RNG seed for sampling and start generation (default 0)");
  app.add_option("--margin", margin, "absolute strict-order margin (default 1e-8 * interval width)");
  app.add_option("--tol-res", tol_res, "residual tolerance (default 1e-10)");
  app.add_option("--max-iter", max_iter, "iteration cap (default 10000)");
  app.add_option("--out", opt.out_path, "write the JSON report to this path instead of stdout");

  auto add_problem = [&](CLI::App* sub) {
    sub->add_option("problem", opt.problem_path, "problem file")->required();
    sub->fallthrough();
  };
  CLI::App* certify = app.add_subcommand("certify", "check the reversed-configuration hypotheses");
  add_problem(certify);
  CLI::App* anchors = app.add_subcommand("anchors", "certification plus the strict anchor pair");
  add_problem(anchors);
  CLI::App* solve = app.add_subcommand("solve", "full pipeline: certify, anchors, interior fixed point");
  add_problem(solve);
  CLI::App* scan = app.add_subcommand("scan", "solve, then report all distinct fixed points found");
  add_problem(scan);
  scan->add_option("--starts", starts, "number of multi-start parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (certify->parsed()) opt.command = Command::certify;
  if (anchors->parsed()) opt.command = Command::anchors;
  if (solve->parsed()) opt.command = Command::solve;
  if (scan->parsed()) opt.command = Command::scan;

  opt.overrides.seed = seed;
  opt.overrides.margin = margin;
  opt.overrides.tol_res = tol_res;
  opt.overrides.max_iter = max_iter;
  opt.overrides.n_starts = starts;

  try {
    return run(opt);
  } catch (const amann::ParseError& e) {
    std::cerr << "error: " << opt.problem_path << ": " << e.what() << "\n";
    return 2;
  } catch (const amann::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const amann::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
