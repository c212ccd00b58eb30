#include "amann/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace amann {

namespace {

struct Entry {
  std::string value;
  long line = 0;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

struct RawFile {
  std::map<std::string, Section> sections;
  std::filesystem::path dir;
};

std::string trim(std::string_view s) {
  const char* ws = " \t\r";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return std::string(s.substr(begin, end - begin + 1));
}

const std::map<std::string, std::set<std::string>> kSchema = {
    {"meta", {"label"}},
    {"grid", {"n_points", "domain"}},
    {"kernel", {"kind", "c", "alpha", "coeffs", "csv", "lambda"}},
    {"nonlinearity", {"kind", "q", "a", "b", "coeffs", "csv"}},
    {"interval", {"u_minus", "u_plus", "u_minus_csv", "u_plus_csv"}},
    {"solver",
     {"seed", "margin", "tol_res", "tol_step", "max_iter", "damping", "n_starts",
      "fd_step"}},
};

RawFile read_raw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path.string() + "'", 0);

  RawFile raw;
  raw.dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::string line;
  std::string section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const std::string body = trim(line);
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", lineno);
      section = trim(std::string_view(body).substr(1, body.size() - 2));
      if (!kSchema.count(section))
        throw ParseError("unknown section '" + section + "'", lineno);
      raw.sections[section]; // materialize
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value', got '" + body + "'", lineno);
    if (section.empty()) throw ParseError("key outside any section", lineno);
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!kSchema.at(section).count(key))
      throw ParseError("unknown key '" + key + "' in section [" + section + "]", lineno);
    auto [it, inserted] = raw.sections[section].emplace(key, Entry{value, lineno, false});
    if (!inserted)
      throw ParseError("duplicate key '" + key + "' in section [" + section + "]", lineno);
    if (value.empty()) throw ParseError("key '" + key + "' has no value", lineno);
  }
  return raw;
}

double parse_double(const std::string& text, const std::string& key, long line) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("key '" + key + "': '" + text + "' is not a number", line);
  if (!std::isfinite(v))
    throw ParseError("key '" + key + "': value must be finite", line);
  return v;
}

long parse_long(const std::string& text, const std::string& key, long line) {
  long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError("key '" + key + "': '" + text + "' is not an integer", line);
  return v;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& key,
                                  long line) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, key, line));
  if (out.empty()) throw ParseError("key '" + key + "': expected numbers", line);
  return out;
}

class SectionReader {
public:
  SectionReader(RawFile& raw, std::string name)
      : name_(std::move(name)), section_(raw.sections.count(name_)
                                             ? &raw.sections.at(name_)
                                             : nullptr) {}

  bool present() const { return section_ != nullptr; }

  Entry* find(const std::string& key) const {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  Entry& require(const std::string& key) const {
    Entry* e = find(key);
    if (!e)
      throw ParseError("missing required key '" + key + "' in section [" + name_ + "]", 0);
    return *e;
  }

  std::optional<double> get_double(const std::string& key) const {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return parse_double(e->value, key, e->line);
  }

  std::optional<long> get_long(const std::string& key) const {
    Entry* e = find(key);
    if (!e) return std::nullopt;
    return parse_long(e->value, key, e->line);
  }

  double require_double(const std::string& key) const {
    Entry& e = require(key);
    return parse_double(e.value, key, e.line);
  }

private:
  std::string name_;
  Section* section_;
};

std::vector<double> load_values_csv(const std::filesystem::path& path, long ref_line) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'", ref_line);
  std::vector<double> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    out.push_back(parse_double(body, path.filename().string(), lineno));
  }
  if (out.empty()) throw ParseError("CSV file '" + path.string() + "' is empty", ref_line);
  return out;
}

std::vector<std::vector<double>> load_rows_csv(const std::filesystem::path& path,
                                               long ref_line) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV file '" + path.string() + "'", ref_line);
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<double> row;
    std::string cell;
    std::istringstream is(body);
    while (std::getline(is, cell, ','))
      row.push_back(parse_double(trim(cell), path.filename().string(), lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("CSV file '" + path.string() + "' is empty", ref_line);
  return rows;
}

KernelSpec build_kernel(const SectionReader& sec, const RawFile& raw, std::size_t n) {
  Entry& kind = sec.require("kind");
  if (kind.value == "constant") {
    return KernelSpec::constant_kernel(sec.get_double("c").value_or(1.0));
  }
  if (kind.value == "separable") {
    Entry& coeffs = sec.require("coeffs");
    return KernelSpec::separable(parse_doubles(coeffs.value, "coeffs", coeffs.line));
  }
  if (kind.value == "exponential_decay") {
    return KernelSpec::exponential_decay(sec.get_double("alpha").value_or(1.0));
  }
  if (kind.value == "table") {
    Entry& csv = sec.require("csv");
    const auto rows = load_rows_csv(raw.dir / csv.value, csv.line);
    if (rows.size() != n)
      throw ParseError("kernel CSV has " + std::to_string(rows.size()) +
                           " rows, expected " + std::to_string(n),
                       csv.line);
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : rows) {
      if (row.size() != n)
        throw ParseError("kernel CSV row has " + std::to_string(row.size()) +
                             " columns, expected " + std::to_string(n),
                         csv.line);
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return KernelSpec::table_kernel(std::move(entries));
  }
  throw ParseError("unknown kernel kind '" + kind.value + "'", kind.line);
}

NonlinearitySpec build_nonlinearity(const SectionReader& sec, const RawFile& raw) {
  Entry& kind = sec.require("kind");
  if (kind.value == "power") {
    return NonlinearitySpec::power(sec.require_double("q"));
  }
  if (kind.value == "affine_power") {
    return NonlinearitySpec::affine_power(sec.require_double("a"),
                                          sec.require_double("b"),
                                          sec.require_double("q"));
  }
  if (kind.value == "polynomial") {
    Entry& coeffs = sec.require("coeffs");
    return NonlinearitySpec::polynomial(parse_doubles(coeffs.value, "coeffs", coeffs.line));
  }
  if (kind.value == "table") {
    Entry& csv = sec.require("csv");
    const auto rows = load_rows_csv(raw.dir / csv.value, csv.line);
    std::vector<double> u, f;
    for (const auto& row : rows) {
      if (row.size() != 2)
        throw ParseError("nonlinearity CSV rows need exactly 'u,f'", csv.line);
      u.push_back(row[0]);
      f.push_back(row[1]);
    }
    return NonlinearitySpec::table(std::move(u), std::move(f));
  }
  throw ParseError("unknown nonlinearity kind '" + kind.value + "'", kind.line);
}

GridFunction build_endpoint(const SectionReader& sec, const RawFile& raw,
                            const GridPtr& grid, const std::string& base_key) {
  Entry* constant = sec.find(base_key);
  Entry* csv = sec.find(base_key + "_csv");
  if (constant && csv)
    throw ParseError("give either '" + base_key + "' or '" + base_key + "_csv', not both",
                     csv->line);
  if (constant)
    return GridFunction::constant(grid,
                                  parse_double(constant->value, base_key, constant->line));
  if (csv) {
    auto values = load_values_csv(raw.dir / csv->value, csv->line);
    if (values.size() != grid->size())
      throw ParseError("'" + base_key + "_csv' has " + std::to_string(values.size()) +
                           " values on a " + std::to_string(grid->size()) + "-point grid",
                       csv->line);
    return GridFunction(grid, std::move(values));
  }
  throw ParseError("section [interval] needs '" + base_key + "' or '" + base_key + "_csv'",
                   0);
}

} // namespace

ProblemFile load_problem_file(const std::filesystem::path& path,
                              const SolverOverrides& overrides) {
  RawFile raw = read_raw(path);

  for (const char* required : {"grid", "kernel", "nonlinearity", "interval"}) {
    if (!raw.sections.count(required))
      throw ParseError("missing required section [" + std::string(required) + "]", 0);
  }

  SectionReader meta(raw, "meta");
  SectionReader grid_sec(raw, "grid");
  SectionReader kernel_sec(raw, "kernel");
  SectionReader nonlin_sec(raw, "nonlinearity");
  SectionReader interval_sec(raw, "interval");
  SectionReader solver_sec(raw, "solver");

  std::string label_text;
  if (Entry* label = meta.find("label")) label_text = label->value;
  if (label_text.empty()) label_text = path.stem().string();

  Entry& n_points_entry = grid_sec.require("n_points");
  const long n_points = parse_long(n_points_entry.value, "n_points", n_points_entry.line);
  if (n_points < 1) throw ParseError("n_points must be at least 1", n_points_entry.line);
  Entry& domain_entry = grid_sec.require("domain");
  const auto domain = parse_doubles(domain_entry.value, "domain", domain_entry.line);
  if (domain.size() != 2)
    throw ParseError("domain needs exactly two numbers 'a b'", domain_entry.line);
  GridPtr grid;
  try {
    grid = Grid::uniform(domain[0], domain[1], static_cast<std::size_t>(n_points));
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), domain_entry.line);
  }

  GridFunction u_minus = build_endpoint(interval_sec, raw, grid, "u_minus");
  GridFunction u_plus = build_endpoint(interval_sec, raw, grid, "u_plus");
  {
    // A reversed interval is a violated hypothesis, not a parse error: it
    // must surface as a certification failure with the signed margin.
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < u_minus.size(); ++i)
      min_gap = std::min(min_gap, u_plus[i] - u_minus[i]);
    if (min_gap < 0.0)
      throw IntervalOrderError("interval order violated: min(u_plus - u_minus) = " +
                                   std::to_string(min_gap),
                               min_gap);
  }
  std::optional<OrderInterval> interval;
  try {
    interval.emplace(std::move(u_minus), std::move(u_plus));
  } catch (const ConfigError& e) {
    throw ParseError(e.what(), 0);
  }

  SolverConfig solver;
  if (auto v = solver_sec.get_double("tol_res")) solver.tol_res = *v;
  if (auto v = solver_sec.get_double("tol_step")) solver.tol_step = *v;
  if (auto v = solver_sec.get_long("max_iter")) solver.max_iter = *v;
  if (auto v = solver_sec.get_double("damping")) solver.damping = *v;
  if (auto v = solver_sec.get_long("n_starts")) solver.n_starts = static_cast<int>(*v);
  if (auto v = solver_sec.get_long("seed")) solver.seed = static_cast<std::uint64_t>(*v);
  if (auto v = solver_sec.get_double("fd_step")) solver.fd_step = *v;
  std::optional<double> margin_abs = solver_sec.get_double("margin");

  if (overrides.seed) solver.seed = *overrides.seed;
  if (overrides.margin) margin_abs = *overrides.margin;
  if (overrides.tol_res) solver.tol_res = *overrides.tol_res;
  if (overrides.max_iter) solver.max_iter = *overrides.max_iter;
  if (overrides.n_starts) solver.n_starts = *overrides.n_starts;

  try {
    const double width = interval->width();
    solver.margin = margin_abs ? StrictMargin(*margin_abs, width)
                               : StrictMargin::for_interval(*interval);
    solver.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid solver configuration: ") + e.what());
  }

  KernelSpec kernel = build_kernel(kernel_sec, raw, grid->size());
  NonlinearitySpec nonlinearity = build_nonlinearity(nonlin_sec, raw);

  double lambda = 1.0;
  bool lambda_auto = false;
  if (Entry* lam = kernel_sec.find("lambda")) {
    if (lam->value == "auto") {
      lambda_auto = true;
      lambda = calibrate_lambda(grid, kernel, nonlinearity, *interval,
                                10.0 * solver.margin->margin);
    } else {
      lambda = parse_double(lam->value, "lambda", lam->line);
      if (!(lambda > 0.0)) throw ParseError("lambda must be positive", lam->line);
    }
  }

  return ProblemFile{ProblemInstance{label_text, grid, std::move(kernel),
                                     std::move(nonlinearity), *interval, lambda,
                                     std::nullopt, ""},
                     solver, label_text, lambda_auto};
}

} // namespace amann
