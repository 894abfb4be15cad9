#include "dualinspect_cli/csv_input.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <string_view>

namespace dualinspect::cli {

namespace {

constexpr std::string_view kBom = "\xEF\xBB\xBF";
constexpr std::size_t kMaxDiagnostics = 20;

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::string clean_line(std::string line, bool first) {
  if (first && std::string_view(line).starts_with(kBom)) line.erase(0, kBom.size());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

bool parse_count(std::string_view field, std::uint32_t& out) {
  if (field.empty()) return false;
  for (char c : field) {
    if (c < '0' || c > '9') return false;
  }
  const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
  return res.ec == std::errc{} && res.ptr == field.data() + field.size();
}

template <std::size_t N>
std::vector<std::array<std::uint32_t, N>> read_rows(std::istream& in, const std::array<std::string_view, N>& header) {
  std::string expected;
  for (std::size_t i = 0; i < N; ++i) expected += (i ? "," : "") + std::string(header[i]);

  std::vector<std::array<std::uint32_t, N>> rows;
  std::vector<std::string> problems;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = clean_line(std::move(raw), line_no == 1);
    if (is_blank(line)) continue;
    if (!seen_header) {
      if (line != expected) {
        throw CsvError("unexpected CSV header", {"line " + std::to_string(line_no) + ": expected header '" +
                                                 expected + "', found '" + line + "'"});
      }
      seen_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != N) {
      problems.push_back("line " + std::to_string(line_no) + ": expected " + std::to_string(N) + " fields, found " +
                         std::to_string(fields.size()));
      continue;
    }
    std::array<std::uint32_t, N> row{};
    bool ok = true;
    for (std::size_t i = 0; i < N && ok; ++i) {
      ok = parse_count(fields[i], row[i]);
      if (!ok) {
        problems.push_back("line " + std::to_string(line_no) + ": field '" + std::string(header[i]) +
                           "' is not a non-negative integer: '" + std::string(fields[i]) + "'");
      }
    }
    if (ok) rows.push_back(row);
  }
  if (!seen_header) {
    throw CsvError("empty CSV input", {"expected header '" + expected + "'"});
  }
  if (!problems.empty()) {
    const std::size_t total = problems.size();
    if (total > kMaxDiagnostics) {
      problems.resize(kMaxDiagnostics);
      problems.push_back("... and " + std::to_string(total - kMaxDiagnostics) + " more");
    }
    throw CsvError("malformed CSV: " + std::to_string(total) + " bad row(s)", std::move(problems));
  }
  return rows;
}

}  // namespace

std::vector<CountPair> read_pairs(std::istream& in) {
  std::vector<CountPair> out;
  for (const auto& row : read_rows<2>(in, {"r1", "r2"})) out.push_back({row[0], row[1]});
  return out;
}

std::vector<LatentTriple> read_triples(std::istream& in) {
  std::vector<LatentTriple> out;
  for (const auto& row : read_rows<3>(in, {"x1", "x2", "y"})) out.push_back({row[0], row[1], row[2]});
  return out;
}

void write_pairs(std::ostream& out, std::span<const CountPair> pairs) {
  out << "r1,r2\n";
  for (const auto& p : pairs) out << p.r1 << ',' << p.r2 << '\n';
}

void write_triples(std::ostream& out, std::span<const LatentTriple> triples) {
  out << "x1,x2,y\n";
  for (const auto& t : triples) out << t.x1 << ',' << t.x2 << ',' << t.y << '\n';
}

}  // namespace dualinspect::cli
