#include "dualinspect_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "dualinspect/capture_recapture.hpp"
#include "dualinspect/errors.hpp"
#include "dualinspect/fisher.hpp"
#include "dualinspect/mle.hpp"
#include "dualinspect/moment.hpp"
#include "dualinspect/report_io.hpp"
#include "dualinspect/simulation.hpp"
#include "dualinspect_cli/csv_input.hpp"

namespace dualinspect::cli {

namespace {

/// Raised for bad flags; maps to exit code 1 like any other input error.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain:
    case ErrorKind::SampleSize:
    case ErrorKind::InvalidInput:
      return kExitInputError;
    default:
      return kExitPathology;
  }
}

// Writes either to the named file or to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
    stream_ = path.empty() ? &fallback : &file_;
  }

  std::ostream& stream() { return *stream_; }

  void finish() {
    stream_->flush();
    if (!*stream_) throw UsageError("failed writing output");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

// Runs `body`, turning every failure into a diagnostic plus exit code. In
// JSON mode the failure is also reported as a JSON document on the output.
template <class Body>
int guarded(Format format, const std::string& output, std::ostream& out, std::ostream& err, Body&& body) {
  const auto fail = [&](std::string_view kind, const std::string& message, int code) {
    err << "dualinspect: " << message << "\n";
    if (format == Format::Json) {
      try {
        Sink sink(output, out);
        sink.stream() << error_to_json(kind, message, code);
        sink.finish();
      } catch (const std::exception&) {
        out << error_to_json(kind, message, code);
      }
    }
    return code;
  };
  try {
    return body();
  } catch (const CsvError& e) {
    std::string message = e.what();
    for (const auto& d : e.diagnostics()) {
      message += "\n  " + d;
    }
    return fail("csv", message, kExitInputError);
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitInputError);
  }
}

void require_format(Format format, std::initializer_list<Format> allowed, std::string_view command) {
  for (Format f : allowed) {
    if (f == format) return;
  }
  throw UsageError("unsupported --format for " + std::string(command));
}

MethodSet parse_methods(std::string_view list) {
  MethodSet set;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = list.find(',', start);
    const std::string_view item = list.substr(start, comma == std::string_view::npos ? list.npos : comma - start);
    if (item == "moment") {
      set.insert(Method::Moment);
    } else if (item == "mle") {
      set.insert(Method::Mle);
    } else if (item == "cr") {
      set.insert(Method::CaptureRecapture);
    } else {
      throw UsageError("unknown method '" + std::string(item) + "' (expected moment, mle or cr)");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return set;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  return in;
}

EstimateReport moment_report(const CountSample& sample, double alpha) {
  const MomentEstimate est = estimate_moment(sample);
  if (!est.flagged()) return moment_confidence_intervals(est, alpha);
  // Out-of-range detection rates: report the raw estimates, no intervals.
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  EstimateReport report;
  report.method = Method::Moment;
  report.m = sample.size();
  report.alpha = alpha;
  report.estimate = {est.lambda_hat, est.p1_hat, est.p2_hat};
  report.standard_error = {kNaN, kNaN, kNaN};
  report.ci_lambda = report.ci_p1 = report.ci_p2 = Interval{kNaN, kNaN};
  if (est.p1_out_of_range) report.flags.emplace_back("P1_OUT_OF_RANGE");
  if (est.p2_out_of_range) report.flags.emplace_back("P2_OUT_OF_RANGE");
  return report;
}

EstimateReport mle_report(const CountSample& sample, double alpha) {
  const MleEstimate est = solve_mle(sample);
  const FisherMatrix fisher = fisher_information(ModelParams(est.lambda_star, est.p1_star, est.p2_star));
  return mle_confidence_intervals(est, fisher, sample.size(), alpha);
}

void write_estimate_csv(std::ostream& os, const EstimateReport& r) {
  os << "param,estimate,standard_error,ci_low,ci_high\n" << std::setprecision(17);
  os << "lambda," << r.estimate.lambda << ',' << r.standard_error.lambda << ',' << r.ci_lambda.low << ','
     << r.ci_lambda.high << '\n';
  os << "p1," << r.estimate.p1 << ',' << r.standard_error.p1 << ',' << r.ci_p1.low << ',' << r.ci_p1.high << '\n';
  os << "p2," << r.estimate.p2 << ',' << r.standard_error.p2 << ',' << r.ci_p2.low << ',' << r.ci_p2.high << '\n';
}

void write_table_csv(std::ostream& os, const TableReport& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n' << std::setprecision(17);
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << '\n';
  }
}

}  // namespace

std::optional<Format> parse_format(std::string_view text) {
  if (text == "json") return Format::Json;
  if (text == "table") return Format::Table;
  if (text == "csv") return Format::Csv;
  return std::nullopt;
}

std::vector<double> parse_grid(std::string_view text) {
  const auto to_double = [](std::string_view s) {
    std::size_t used = 0;
    const std::string str(s);
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != str.size()) throw UsageError("invalid number '" + str + "' in grid");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const std::size_t a = text.find(':');
    const std::size_t b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw UsageError("range grid must be start:stop:step");
    const double start = to_double(text.substr(0, a));
    const double stop = to_double(text.substr(a + 1, b - a - 1));
    const double step = to_double(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw UsageError("range grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) {
      // Rounded to 12 decimals so 0.05:0.95:0.05 yields 0.2, not 0.20000000000000001.
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.push_back(to_double(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_estimate(const EstimateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(o.format, o.output, out, err, [&] {
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    EstimateReport report;
    std::ifstream in = open_input(o.input);
    if (o.method == "moment" || o.method == "mle") {
      const CountSample sample(read_pairs(in));
      report = o.method == "moment" ? moment_report(sample, o.alpha) : mle_report(sample, o.alpha);
    } else if (o.method == "cr") {
      const CrEstimate est = estimate_cr(FullCountSample(read_triples(in)));
      report = cr_confidence_intervals(est, o.alpha);
    } else {
      throw UsageError("unknown method '" + o.method + "' (expected moment, mle or cr)");
    }
    Sink sink(o.output, out);
    switch (o.format) {
      case Format::Json: sink.stream() << to_json(report); break;
      case Format::Table: sink.stream() << format_text(report); break;
      case Format::Csv: write_estimate_csv(sink.stream(), report); break;
    }
    sink.finish();
    return static_cast<int>(kExitOk);
  });
}

int run_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(o.format, o.output, out, err, [&] {
    require_format(o.format, {Format::Json, Format::Table}, "simulate");
    StudyConfig config;
    config.params = ModelParams(o.lambda, o.p1, o.p2);
    config.m = o.m;
    config.replicates = o.reps;
    config.seed = RngSeed{o.seed};
    config.methods = parse_methods(o.methods);
    config.threads = o.threads;
    err << "dualinspect: seed " << o.seed << "\n";
    const StudyReport report = run_study(config);
    Sink sink(o.output, out);
    sink.stream() << (o.format == Format::Json ? to_json(report) : format_text(report));
    sink.finish();
    return static_cast<int>(kExitOk);
  });
}

int run_tables(const TablesOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(o.format, o.output, out, err, [&] {
    TableId id;
    if (o.which == "t1") {
      id = TableId::T1;
    } else if (o.which == "t2") {
      id = TableId::T2;
    } else if (o.which == "t3") {
      id = TableId::T3;
    } else {
      throw UsageError("unknown table '" + o.which + "' (expected t1, t2 or t3)");
    }
    if (o.reps && *o.reps < 1) throw UsageError("--reps must be at least 1");
    err << "dualinspect: seed " << o.seed << "\n";
    const TableReport table = reproduce_table(id, o.reps, RngSeed{o.seed}, o.threads);
    Sink sink(o.output, out);
    switch (o.format) {
      case Format::Json: sink.stream() << to_json(table); break;
      case Format::Table: sink.stream() << format_text(table); break;
      case Format::Csv: write_table_csv(sink.stream(), table); break;
    }
    sink.finish();
    return static_cast<int>(kExitOk);
  });
}

int run_ratio(const RatioOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(o.format, o.output, out, err, [&] {
    const std::vector<double> p1s = parse_grid(o.p1_list);
    const std::vector<double> p2s = parse_grid(o.p2_grid);
    std::vector<RatioPoint> curve;
    for (double p1 : p1s) {
      const auto part = std_ratio_curve(o.lambda, p1, p2s, o.tail_eps);
      curve.insert(curve.end(), part.begin(), part.end());
    }
    Sink sink(o.output, out);
    switch (o.format) {
      case Format::Json: sink.stream() << to_json(curve); break;
      case Format::Csv: write_ratio_csv(sink.stream(), curve); break;
      case Format::Table:
        for (const auto& p : curve) {
          sink.stream() << "p1=" << p.p1 << " p2=" << p.p2 << " lambda=" << p.lambda << " ratio=" << std::fixed
                        << std::setprecision(4) << p.ratio << std::defaultfloat << "\n";
        }
        break;
    }
    sink.finish();
    return static_cast<int>(kExitOk);
  });
}

int run_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(Format::Csv, o.output, out, err, [&] {
    const ModelParams params(o.lambda, o.p1, o.p2);
    err << "dualinspect: seed " << o.seed << "\n";
    const auto triples = sample_full(params, o.m, RngSeed{o.seed});
    Sink sink(o.output, out);
    if (o.full) {
      write_triples(sink.stream(), triples);
    } else {
      const CountSample sample = collapse(triples);
      write_pairs(sink.stream(), sample.items());
    }
    sink.finish();
    return static_cast<int>(kExitOk);
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Defect-rate and detection-rate estimation from two imperfect inspectors"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand("estimate", "Estimate lambda, p1, p2 from a CSV of counts");
  estimate->add_option("--input,-i", est.input, "CSV with header r1,r2 (moment, mle) or x1,x2,y (cr)")->required();
  estimate->add_option("--method", est.method, "moment, mle or cr")->capture_default_str();
  estimate->add_option("--alpha", est.alpha, "1 - confidence level")->capture_default_str();
  estimate->add_option("--output,-o", est.output, "Write the report here instead of stdout");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo study");
  simulate->add_option("--lambda", sim.lambda)->capture_default_str();
  simulate->add_option("--p1", sim.p1)->capture_default_str();
  simulate->add_option("--p2", sim.p2)->capture_default_str();
  simulate->add_option("--m", sim.m, "Items per sample")->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replicates")->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--methods", sim.methods, "Comma list of moment, mle, cr")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "Worker threads (results do not depend on it)")
      ->capture_default_str();
  simulate->add_option("--output,-o", sim.output);

  TablesOptions tab;
  std::size_t tab_reps = 0;
  auto* tables = app.add_subcommand("tables", "Reproduce the reference simulation tables");
  tables->add_option("which", tab.which, "t1, t2 or t3")->required()->check(CLI::IsMember({"t1", "t2", "t3"}));
  auto* reps_opt = tables->add_option("--reps", tab_reps, "Override the replicate count");
  tables->add_option("--seed", tab.seed)->capture_default_str();
  tables->add_option("--threads", tab.threads)->capture_default_str();
  tables->add_option("--output,-o", tab.output);

  RatioOptions rat;
  auto* ratio = app.add_subcommand("ratio", "Asymptotic std ratio of the likelihood to the moment estimator");
  ratio->add_option("--lambda", rat.lambda)->capture_default_str();
  ratio->add_option("--p1", rat.p1_list, "Comma list or start:stop:step")->capture_default_str();
  ratio->add_option("--p2", rat.p2_grid, "Comma list or start:stop:step")->capture_default_str();
  ratio->add_option("--tail-eps", rat.tail_eps, "Fisher grid truncation")->capture_default_str();
  ratio->add_option("--output,-o", rat.output, "CSV output path");

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a simulated sample as CSV");
  generate->add_option("--lambda", gen.lambda)->capture_default_str();
  generate->add_option("--p1", gen.p1)->capture_default_str();
  generate->add_option("--p2", gen.p2)->capture_default_str();
  generate->add_option("--m", gen.m)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_flag("--full", gen.full, "Write x1,x2,y triples instead of r1,r2 pairs");
  generate->add_option("--output,-o", gen.output);

  std::string est_fmt = "table", sim_fmt = "table", tab_fmt = "table", rat_fmt = "csv";
  for (auto [sub, target] : {std::pair{estimate, &est_fmt}, {simulate, &sim_fmt}, {tables, &tab_fmt},
                             {ratio, &rat_fmt}}) {
    sub->add_option("--format", *target, "json, table or csv")
        ->check(CLI::IsMember({"json", "table", "csv"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (estimate->parsed()) {
    est.format = *parse_format(est_fmt);
    return run_estimate(est, out, err);
  }
  if (simulate->parsed()) {
    sim.format = *parse_format(sim_fmt);
    return run_simulate(sim, out, err);
  }
  if (tables->parsed()) {
    tab.format = *parse_format(tab_fmt);
    if (reps_opt->count() > 0) tab.reps = tab_reps;
    return run_tables(tab, out, err);
  }
  if (ratio->parsed()) {
    rat.format = *parse_format(rat_fmt);
    return run_ratio(rat, out, err);
  }
  return run_generate(gen, out, err);
}

}  // namespace dualinspect::cli
