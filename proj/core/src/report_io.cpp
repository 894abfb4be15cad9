#include "dualinspect/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dualinspect {

namespace {

using nlohmann::ordered_json;

// NaN and infinities serialize as null.
ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json params_json(const ParamValues& v) {
  return {{"lambda", number(v.lambda)}, {"p1", number(v.p1)}, {"p2", number(v.p2)}};
}

ordered_json interval_json(const Interval& i) { return ordered_json::array({number(i.low), number(i.high)}); }

std::string_view table_name(TableId id) {
  switch (id) {
    case TableId::T1: return "t1";
    case TableId::T2: return "t2";
    case TableId::T3: return "t3";
  }
  return "?";
}

// Shortest decimal that round-trips to the same double.
std::string shortest(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fixed(double x, int digits) {
  if (!std::isfinite(x)) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace

std::string to_json(const EstimateReport& report) {
  ordered_json j;
  j["method"] = to_string(report.method);
  j["m"] = report.m;
  j["alpha"] = report.alpha;
  j["estimates"] = params_json(report.estimate);
  j["standard_errors"] = params_json(report.standard_error);
  j["ci"] = {{"lambda", interval_json(report.ci_lambda)},
             {"p1", interval_json(report.ci_p1)},
             {"p2", interval_json(report.ci_p2)}};
  j["flags"] = report.flags;
  j["interval_kind"] = report.interval_kind;
  if (report.solver) {
    ordered_json residuals = ordered_json::array();
    for (double r : report.solver->residuals) residuals.push_back(number(r));
    j["solver"] = {{"iterations", report.solver->iterations}, {"residuals", residuals}};
  }
  return dump(j);
}

std::string to_json(const StudyReport& report) {
  const StudyConfig& c = report.config;
  ordered_json methods_cfg = ordered_json::array();
  for (Method m : c.methods.list()) methods_cfg.push_back(to_string(m));

  ordered_json j;
  j["config"] = {{"lambda", c.params.lambda()}, {"p1", c.params.p1()},     {"p2", c.params.p2()},
                 {"m", c.m},                    {"replicates", c.replicates}, {"seed", c.seed.value},
                 {"methods", methods_cfg}};
  j["replicates"] = report.replicates;
  ordered_json methods = ordered_json::array();
  for (const MethodSummary& s : report.methods) {
    ordered_json failures = ordered_json::object();
    for (const auto& [kind, count] : s.failures) failures[std::string(to_string(kind))] = count;
    methods.push_back({{"method", to_string(s.method)},
                       {"successes", s.successes},
                       {"failures", failures},
                       {"flagged", s.flagged},
                       {"mean", params_json(s.mean)},
                       {"std", params_json(s.std)},
                       {"bias", params_json(s.bias)}});
  }
  j["methods"] = methods;
  if (report.head_to_head) {
    j["head_to_head"] = {{"compared", report.head_to_head->compared},
                         {"mle_better", report.head_to_head->mle_better},
                         {"fraction", number(report.head_to_head->fraction)}};
  }
  return dump(j);
}

std::string to_json(const TableReport& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r = ordered_json::array();
    for (double x : row) r.push_back(number(x));
    rows.push_back(r);
  }
  ordered_json j;
  j["table"] = table_name(table.id);
  j["title"] = table.title;
  j["replicates"] = table.replicates;
  j["seed"] = table.seed.value;
  j["columns"] = table.columns;
  j["rows"] = rows;
  return dump(j);
}

std::string to_json(std::span<const RatioPoint> curve) {
  ordered_json j = ordered_json::array();
  for (const auto& p : curve) {
    j.push_back({{"p1", p.p1}, {"p2", p.p2}, {"lambda", p.lambda}, {"ratio", number(p.ratio)}});
  }
  return dump(j);
}

std::string error_to_json(std::string_view kind, std::string_view message, int exit_code) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  j["exit_code"] = exit_code;
  return dump(j);
}

std::string format_text(const EstimateReport& report) {
  std::ostringstream os;
  os << "method: " << to_string(report.method) << "   M = " << report.m << "   alpha = " << report.alpha
     << "   intervals: " << report.interval_kind << "\n";
  os << std::left << std::setw(8) << "param" << std::right << std::setw(14) << "estimate" << std::setw(14)
     << "std.err" << std::setw(14) << "ci.low" << std::setw(14) << "ci.high" << "\n";
  const auto row = [&](const char* name, double est, double se, const Interval& ci) {
    os << std::left << std::setw(8) << name << std::right << std::setw(14) << fixed(est, 6) << std::setw(14)
       << fixed(se, 6) << std::setw(14) << fixed(ci.low, 6) << std::setw(14) << fixed(ci.high, 6) << "\n";
  };
  row("lambda", report.estimate.lambda, report.standard_error.lambda, report.ci_lambda);
  row("p1", report.estimate.p1, report.standard_error.p1, report.ci_p1);
  row("p2", report.estimate.p2, report.standard_error.p2, report.ci_p2);
  if (!report.flags.empty()) {
    os << "flags:";
    for (const auto& f : report.flags) os << " " << f;
    os << "\n";
  }
  if (report.solver) {
    os << "solver: " << report.solver->iterations << " evaluations, residuals";
    for (double r : report.solver->residuals) os << " " << std::scientific << std::setprecision(2) << r;
    os << "\n";
  }
  return os.str();
}

std::string format_text(const StudyReport& report) {
  const StudyConfig& c = report.config;
  std::ostringstream os;
  os << "study: lambda=" << c.params.lambda() << " p1=" << c.params.p1() << " p2=" << c.params.p2()
     << " M=" << c.m << " replicates=" << report.replicates << " seed=" << c.seed.value << "\n";
  os << std::left << std::setw(8) << "method" << std::right << std::setw(10) << "ok" << std::setw(10) << "failed"
     << std::setw(12) << "mean.lam" << std::setw(12) << "std.lam" << std::setw(12) << "mean.p1" << std::setw(12)
     << "mean.p2" << "\n";
  for (const auto& s : report.methods) {
    os << std::left << std::setw(8) << to_string(s.method) << std::right << std::setw(10) << s.successes
       << std::setw(10) << s.failure_total() << std::setw(12) << fixed(s.mean.lambda, 4) << std::setw(12)
       << fixed(s.std.lambda, 4) << std::setw(12) << fixed(s.mean.p1, 4) << std::setw(12) << fixed(s.mean.p2, 4)
       << "\n";
    for (const auto& [kind, count] : s.failures) {
      os << "    " << to_string(kind) << ": " << count << "\n";
    }
  }
  if (report.head_to_head) {
    os << "likelihood closer to truth in " << fixed(100.0 * report.head_to_head->fraction, 1) << "% of "
       << report.head_to_head->compared << " replicates where both succeeded\n";
  }
  return os.str();
}

std::string format_text(const TableReport& table) {
  std::ostringstream os;
  os << table.title << "\n";
  os << "replicates=" << table.replicates << " seed=" << table.seed.value << "\n";
  for (const auto& col : table.columns) os << std::setw(16) << col;
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      const bool integral = k == 0 || table.columns[k].find("failures") != std::string::npos;
      os << std::setw(16) << fixed(row[k], integral ? 0 : 3);
    }
    os << "\n";
  }
  return os.str();
}

void write_ratio_csv(std::ostream& out, std::span<const RatioPoint> curve) {
  out << "p1,p2,lambda,ratio\n";
  for (const auto& p : curve) {
    out << shortest(p.p1) << ',' << shortest(p.p2) << ',' << shortest(p.lambda) << ',' << shortest(p.ratio) << '\n';
  }
}

}  // namespace dualinspect
