#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dualinspect::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitPathology = 2,
};

enum class Format { Json, Table, Csv };

std::optional<Format> parse_format(std::string_view text);

struct EstimateOptions {
  std::string input;
  std::string method = "moment";
  double alpha = 0.05;
  Format format = Format::Table;
  std::string output;
};

struct SimulateOptions {
  double lambda = 10.0;
  double p1 = 0.4;
  double p2 = 0.7;
  std::size_t m = 100;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  std::string methods = "moment";
  Format format = Format::Table;
  unsigned threads = 1;
  std::string output;
};

struct TablesOptions {
  std::string which;
  std::optional<std::size_t> reps;
  std::uint64_t seed = 0;
  Format format = Format::Table;
  unsigned threads = 1;
  std::string output;
};

struct RatioOptions {
  double lambda = 10.0;
  std::string p1_list = "0.2,0.5,0.8";
  std::string p2_grid = "0.05:0.95:0.05";
  double tail_eps = 1e-12;
  Format format = Format::Csv;
  std::string output;
};

struct GenerateOptions {
  double lambda = 10.0;
  double p1 = 0.4;
  double p2 = 0.7;
  std::size_t m = 100;
  std::uint64_t seed = 0;
  bool full = false;
  std::string output;
};

// Each command writes its report to options.output (or `out` when empty)
// and diagnostics to `err`, and returns an ExitCode.

int run_estimate(const EstimateOptions& options, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err);
int run_tables(const TablesOptions& options, std::ostream& out, std::ostream& err);
int run_ratio(const RatioOptions& options, std::ostream& out, std::ostream& err);
int run_generate(const GenerateOptions& options, std::ostream& out, std::ostream& err);

/// Comma list ("0.2,0.5") or inclusive range "start:stop:step".
std::vector<double> parse_grid(std::string_view text);

/// Full command line: parses with CLI11 and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dualinspect::cli
