#include "amann/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace amann {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Minimal ordered JSON writer: keys are emitted in call order and doubles
// always go through fmt_double, so identical reports are identical bytes.
class JsonWriter {
public:
  std::string take() {
    out_ += '\n';
    return std::move(out_);
  }

  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view name) {
    separate();
    out_ += '"';
    out_ += escape(name);
    out_ += "\": ";
    after_key_ = true;
  }

  void value(double v) { literal(fmt_double(v)); }
  void value(long long v) { literal(std::to_string(v)); }
  void value(unsigned long long v) { literal(std::to_string(v)); }
  void value(bool v) { literal(v ? "true" : "false"); }
  void value(std::string_view s) { literal('"' + escape(s) + '"'); }
  void null() { literal("null"); }

  // Numeric arrays go on a single line.
  void values(std::span<const double> xs) {
    separate();
    out_ += '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ += ", ";
      out_ += fmt_double(xs[i]);
    }
    out_ += ']';
  }

  void values(std::span<const int> xs) {
    separate();
    out_ += '[';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) out_ += ", ";
      out_ += std::to_string(xs[i]);
    }
    out_ += ']';
  }

private:
  void open(char c) {
    separate();
    out_ += c;
    stack_.push_back(false);
  }

  void close(char c) {
    const bool had_items = stack_.back();
    stack_.pop_back();
    if (had_items) {
      out_ += '\n';
      out_.append(2 * stack_.size(), ' ');
    }
    out_ += c;
  }

  void literal(std::string_view text) {
    separate();
    out_ += text;
  }

  void separate() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    if (stack_.empty()) return;
    if (stack_.back()) out_ += ',';
    stack_.back() = true;
    out_ += '\n';
    out_.append(2 * stack_.size(), ' ');
  }

  std::string out_;
  std::vector<bool> stack_;
  bool after_key_ = false;
};

void write_certification(JsonWriter& w, const CertificationReport& c) {
  w.begin_object();
  w.key("monotone_ok");
  w.value(c.monotone_ok);
  w.key("monotone_samples");
  w.value(static_cast<long long>(c.monotone_samples));
  w.key("monotone_counterexample");
  if (c.monotone_counterexample) {
    w.begin_object();
    w.key("u");
    w.values(c.monotone_counterexample->first.values());
    w.key("v");
    w.values(c.monotone_counterexample->second.values());
    w.end_object();
  } else {
    w.null();
  }
  w.key("super_margin");
  w.value(c.super_margin);
  w.key("sub_margin");
  w.value(c.sub_margin);
  w.key("interval_order_margin");
  w.value(c.interval_order_margin);
  w.key("endpoints_fixed_by_truncation");
  w.value(c.endpoints_fixed_by_truncation);
  w.key("normality_constant");
  w.value(c.normality_constant);
  w.key("passed");
  w.value(c.passed());
  w.end_object();
}

void write_anchors(JsonWriter& w, const AnchorPair& a) {
  w.begin_object();
  w.key("t_minus");
  w.value(a.t_minus);
  w.key("t_plus");
  w.value(a.t_plus);
  w.key("super_margin_at_p_minus");
  w.value(a.super_margin_at_p_minus);
  w.key("sub_margin_at_p_plus");
  w.value(a.sub_margin_at_p_plus);
  w.key("p_minus");
  w.values(a.p_minus.values());
  w.key("p_plus");
  w.values(a.p_plus.values());
  w.end_object();
}

void write_solve(JsonWriter& w, const SolveReport& s) {
  w.begin_object();
  w.key("classification");
  w.value(to_string(s.classification));
  w.key("residual_sup");
  w.value(s.residual_sup);
  w.key("iterations");
  w.value(static_cast<long long>(s.iterations));
  w.key("starts_tried");
  w.value(static_cast<long long>(s.starts_tried));
  w.key("exclusion_lo");
  if (s.exclusion_lo) w.value(*s.exclusion_lo); else w.null();
  w.key("exclusion_hi");
  if (s.exclusion_hi) w.value(*s.exclusion_hi); else w.null();
  w.key("within_interval");
  w.value(s.within_interval);
  w.key("candidate");
  w.values(s.candidate.values());
  w.key("starts");
  w.begin_array();
  for (const StartOutcome& o : s.start_outcomes) {
    w.begin_object();
    w.key("index");
    w.value(static_cast<long long>(o.index));
    w.key("t");
    w.value(o.t);
    w.key("classification");
    w.value(to_string(o.classification));
    w.key("residual_sup");
    w.value(o.residual_sup);
    w.key("iterations");
    w.value(static_cast<long long>(o.iterations));
    w.key("accepted");
    w.value(o.accepted);
    w.key("note");
    w.value(o.note);
    w.end_object();
  }
  w.end_array();
  w.end_object();
}

void write_clusters(JsonWriter& w, const std::vector<FixedPointCluster>& clusters) {
  w.begin_array();
  for (const FixedPointCluster& c : clusters) {
    w.begin_object();
    w.key("residual_sup");
    w.value(c.residual_sup);
    w.key("multiplicity");
    w.value(static_cast<long long>(c.multiplicity));
    w.key("start_indices");
    w.values(std::span<const int>(c.start_indices));
    w.key("representative");
    w.values(c.representative.values());
    w.end_object();
  }
  w.end_array();
}

} // namespace

std::string to_json(const RunReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("tool");
  w.value(std::string_view("amann"));
  w.key("version");
  w.value(std::string_view("0.1.0"));
  w.key("command");
  w.value(std::string_view(report.command));
  w.key("label");
  w.value(std::string_view(report.label));
  w.key("seed");
  w.value(static_cast<unsigned long long>(report.seed));
  w.key("margin");
  w.begin_object();
  w.key("margin");
  w.value(report.margin.margin);
  w.key("relative_to");
  w.value(report.margin.relative_to);
  w.end_object();
  w.key("grid");
  if (report.grid) {
    w.begin_object();
    w.key("n_points");
    w.value(static_cast<long long>(report.grid->size()));
    w.key("domain");
    const double domain[2] = {report.grid->domain_lo(), report.grid->domain_hi()};
    w.values(std::span<const double>(domain, 2));
    w.end_object();
  } else {
    w.null();
  }
  w.key("certification");
  if (report.certification) write_certification(w, *report.certification); else w.null();
  w.key("anchors");
  if (report.anchors) write_anchors(w, *report.anchors); else w.null();
  w.key("anchor_error");
  if (report.anchor_error) w.value(std::string_view(*report.anchor_error)); else w.null();
  w.key("solve");
  if (report.solve) write_solve(w, *report.solve); else w.null();
  w.key("clusters");
  if (report.clusters) write_clusters(w, *report.clusters); else w.null();
  w.key("failed_stage");
  w.value(std::string_view(report.failed_stage));
  w.end_object();
  return w.take();
}

void write_solution_csv(const std::filesystem::path& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write solution CSV '" + path.string() + "'");
  for (std::size_t i = 0; i < u.size(); ++i)
    out << fmt_double(u.grid()->point(i)) << ',' << fmt_double(u[i]) << '\n';
}

void print_summary(std::ostream& os, const RunReport& report) {
  os << "== " << report.command << " '" << report.label << "' (seed " << report.seed
     << ", margin " << fmt_double(report.margin.margin) << ")\n";
  if (report.grid)
    os << "   grid: " << report.grid->size() << " points on ["
       << fmt_double(report.grid->domain_lo()) << ", "
       << fmt_double(report.grid->domain_hi()) << "]\n";
  if (report.certification) {
    const CertificationReport& c = *report.certification;
    os << "   certification: " << (c.passed() ? "PASS" : "FAIL")
       << "  (monotone_ok=" << (c.monotone_ok ? "yes" : "no")
       << ", super=" << fmt_double(c.super_margin)
       << ", sub=" << fmt_double(c.sub_margin)
       << ", interval=" << fmt_double(c.interval_order_margin) << ")\n";
  }
  if (report.anchors) {
    os << "   anchors: t- = " << fmt_double(report.anchors->t_minus)
       << ", t+ = " << fmt_double(report.anchors->t_plus)
       << "  (margins " << fmt_double(report.anchors->super_margin_at_p_minus) << " / "
       << fmt_double(report.anchors->sub_margin_at_p_plus) << ")\n";
  }
  if (report.anchor_error) os << "   anchors: FAIL (" << *report.anchor_error << ")\n";
  if (report.solve) {
    const SolveReport& s = *report.solve;
    os << "   solve: " << to_string(s.classification)
       << "  residual=" << fmt_double(s.residual_sup) << "  iterations=" << s.iterations
       << "  starts=" << s.starts_tried << "\n";
    if (s.candidate.size() == 1)
      os << "   candidate: " << fmt_double(s.candidate[0]) << "\n";
  }
  if (report.clusters) {
    os << "   clusters: " << report.clusters->size() << "\n";
    for (const FixedPointCluster& c : *report.clusters) {
      os << "     multiplicity " << c.multiplicity
         << ", residual " << fmt_double(c.residual_sup);
      if (c.representative.size() == 1) os << ", at " << fmt_double(c.representative[0]);
      os << "\n";
    }
  }
  if (!report.failed_stage.empty())
    os << "   FAILED at stage: " << report.failed_stage << "\n";
  for (const PhaseTiming& t : report.timings)
    os << "   time[" << t.phase << "] = " << t.milliseconds << " ms\n";
}

} // namespace amann
