#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>

#include "subprocess.hpp"

using namespace amann::testing;

TEST_CASE("certify: exit 0 on C1 with the exact super margin in the report") {
  RunResult r = run_cli("certify " + problem("c1.ini"), "certify_c1");
  CHECK(r.exit_code == 0);
  CHECK(json_scalar(r.out, "super_margin") == "0.1875");
  CHECK(json_scalar(r.out, "passed") == "true");
  CHECK(json_scalar(r.out, "failed_stage") == "\"\"");
}

TEST_CASE("certify: exit 1 on the C5 negative control with negative margins") {
  RunResult r = run_cli("certify " + problem("c5.ini"), "certify_c5");
  CHECK(r.exit_code == 1);
  CHECK(json_scalar(r.out, "super_margin") == "-0.25");
  CHECK(json_scalar(r.out, "failed_stage") == "\"certify\"");
}

TEST_CASE("certify: exit 1 on a reversed interval with the signed margin") {
  RunResult r = run_cli("certify " + problem("reversed_interval.ini"), "certify_rev");
  CHECK(r.exit_code == 1);
  CHECK(json_scalar(r.out, "interval_order_margin") == "-1.75");
  CHECK(json_scalar(r.out, "failed_stage") == "\"certify\"");
}

TEST_CASE("anchors: C1 brackets the analytic threshold t = 3/7") {
  RunResult r = run_cli("anchors " + problem("c1.ini"), "anchors_c1");
  CHECK(r.exit_code == 0);
  CHECK(json_scalar(r.out, "t_minus") == "0.25");
  CHECK(json_scalar(r.out, "t_plus") == "0.75");
}

TEST_CASE("anchors: identity fails at the certification stage with zero margins") {
  RunResult r = run_cli("anchors " + problem("identity.ini"), "anchors_id");
  CHECK(r.exit_code == 1);
  CHECK(json_scalar(r.out, "super_margin") == "0");
  CHECK(json_scalar(r.out, "sub_margin") == "0");
}

TEST_CASE("solve: C1 reaches the interior fixed point") {
  RunResult r = run_cli("solve " + problem("c1.ini"), "solve_c1");
  CHECK(r.exit_code == 0);
  CHECK(json_scalar(r.out, "classification") == "\"interior_fixed_point\"");
  const auto pos = r.out.find("\"candidate\": [");
  REQUIRE(pos != std::string::npos);
  const double u = std::stod(r.out.substr(pos + 14));
  CHECK(std::abs(u - 1.0) <= 1e-8);
}

TEST_CASE("solve: --out writes the report and the solution CSV beside it") {
  const std::string out = std::string(AMANN_TEST_TMPDIR) + "/c1_report.json";
  RunResult r = run_cli("solve " + problem("c1.ini") + " --out " + out, "solve_out");
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(std::filesystem::exists(out));
  const std::string csv = std::string(AMANN_TEST_TMPDIR) + "/c1_report.csv";
  REQUIRE(std::filesystem::exists(csv));
  const std::string content = slurp(csv);
  REQUIRE(content.substr(0, 4) == "0.5,");
  CHECK(std::abs(std::stod(content.substr(4)) - 1.0) <= 1e-8);
}

TEST_CASE("scan: multiroot instance reports three clusters") {
  RunResult r = run_cli("scan " + problem("c6_multiroot.ini") + " --starts 32", "scan_c6");
  CHECK(r.exit_code == 0);
  std::size_t count = 0;
  for (std::size_t pos = 0;
       (pos = r.out.find("\"multiplicity\"", pos)) != std::string::npos; pos += 14)
    ++count;
  CHECK(count == 3);
  CHECK(r.err.find("clusters: 3") != std::string::npos);
}

TEST_CASE("scan: zero starts is a configuration error (exit 2)") {
  RunResult r = run_cli("scan " + problem("c1.ini") + " --starts 0", "scan_zero");
  CHECK(r.exit_code == 2);
}

TEST_CASE("parse failures exit 2 with the offending key") {
  const std::string bad = std::string(AMANN_TEST_TMPDIR) + "/bad.ini";
  {
    std::ofstream f(bad);
    f << "[grid]\nn_points = 1\ndomain = 0 1\nwarp = 9\n";
  }
  RunResult r = run_cli("certify " + bad, "parse_bad");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("warp") != std::string::npos);
  CHECK(r.err.find("line 4") != std::string::npos);

  RunResult missing = run_cli("certify /nonexistent/q.ini", "parse_missing");
  CHECK(missing.exit_code == 2);

  RunResult noargs = run_cli("certify", "parse_noargs");
  CHECK(noargs.exit_code == 2);
}

TEST_CASE("identical runs produce byte-identical reports") {
  RunResult a = run_cli("solve " + problem("c2.ini") + " --seed 0", "det_a");
  RunResult b = run_cli("solve " + problem("c2.ini") + " --seed 0", "det_b");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("global flags are honored and echoed into the report") {
  RunResult r = run_cli("solve " + problem("c1.ini") + " --seed 5 --margin 1e-6",
                        "flags_c1");
  CHECK(r.exit_code == 0);
  CHECK(json_scalar(r.out, "seed") == "5");
  // The outer "margin" key holds an object; read its inner "margin" field.
  const auto pos = r.out.find("\"margin\": {");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(json_scalar(r.out.substr(pos + 11), "margin")) - 1e-6) <=
        1e-20);
}
