#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "extmorph/analysis.hpp"
#include "extmorph/extensivity.hpp"

namespace extmorph {

struct PropositionInfo {
  std::string id;
  std::string group;  // suite group: "2" or "3"
  std::string summary;
};

// Stable ids in catalogue order.
const std::vector<PropositionInfo>& proposition_catalogue();

struct SuiteOptions {
  std::size_t sample_bound = 2000;  // sampled statements check at most this many instances
  std::uint64_t seed = 7;
};

// pass: the conclusion holds on every instance whose hypotheses hold.
// inapplicable: no instance satisfies the hypotheses (witness names the failing one).
// fail: a counterexample diagram.
// Throws std::invalid_argument for an unknown id.
CheckStatus run_proposition(Analysis& a, std::string_view id, const SuiteOptions& opt = {});

// Empty selection runs the whole catalogue. Results keep catalogue order.
std::vector<std::pair<std::string, CheckStatus>> proposition_suite(Analysis& a, std::span<const std::string> selection,
                                                                   const SuiteOptions& opt = {});

}  // namespace extmorph
