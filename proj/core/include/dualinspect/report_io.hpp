#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "dualinspect/errors.hpp"
#include "dualinspect/report.hpp"
#include "dualinspect/simulation.hpp"

namespace dualinspect {

// JSON documents are pretty-printed with two-space indentation; the key
// layout is documented in README.md and is part of the public interface.

std::string to_json(const EstimateReport& report);
std::string to_json(const StudyReport& report);
std::string to_json(const TableReport& table);
std::string to_json(std::span<const RatioPoint> curve);
std::string error_to_json(std::string_view kind, std::string_view message, int exit_code);

std::string format_text(const EstimateReport& report);
std::string format_text(const StudyReport& report);
std::string format_text(const TableReport& table);

/// Header "p1,p2,lambda,ratio", one row per point, shortest round-trip decimals.
void write_ratio_csv(std::ostream& out, std::span<const RatioPoint> curve);

}  // namespace dualinspect
