#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "report.hpp"

namespace extmorph::cli {

struct BatteryOptions {
  std::uint64_t seed = 7;
  int max_relation_size = 9;
  std::size_t sample_bound = 2000;
  unsigned jobs = 1;
};

// Every selectable id: proposition ids, relation identity ids and example ids.
std::vector<std::string> battery_ids();

// "all", a group ("2" or "3", optionally prefixed with §), or a comma-separated id list.
// Throws std::invalid_argument on unknown ids.
std::vector<std::string> parse_suite(std::string_view suite);

// Runs the selection over the built-in generated categories. Entry ids are
// "<check>@<category>"; order follows the selection, not scheduling.
std::vector<ReportEntry> run_battery(const std::vector<std::string>& selection, const BatteryOptions& opt);

}  // namespace extmorph::cli
