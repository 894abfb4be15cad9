#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualinspect/model.hpp"

namespace dualinspect::cli {

/// Malformed CSV. Every offending row is listed in diagnostics(), one line
/// per problem, as "line N: ...".
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::vector<std::string> diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Format: comma-separated, mandatory header row, unquoted non-negative
// integers only. Blank lines are skipped. A UTF-8 byte order mark and CRLF
// line endings are accepted; nothing else is coerced.

std::vector<CountPair> read_pairs(std::istream& in);
std::vector<LatentTriple> read_triples(std::istream& in);

void write_pairs(std::ostream& out, std::span<const CountPair> pairs);
void write_triples(std::ostream& out, std::span<const LatentTriple> triples);

}  // namespace dualinspect::cli
