#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/fincat.hpp"

namespace extmorph {

struct MorphismProfile {
  bool is_mono = false;
  bool is_epi = false;
  bool is_split_mono = false;
  bool is_split_epi = false;
  bool is_regular_mono = false;
  bool is_regular_epi = false;
  bool is_extremal_epi = false;
  bool is_iso = false;
  std::optional<MorphismId> retraction;  // r . f = id
  std::optional<MorphismId> section;     // f . s = id
  std::optional<std::pair<MorphismId, MorphismId>> coequalised_pair;
  std::optional<std::pair<MorphismId, MorphismId>> equalised_pair;
};

enum class MorphismClass {
  mono,
  epi,
  split_mono,
  split_epi,
  regular_epi,
  regular_mono,
  extremal_epi,
  iso,
  product_projection,
  coproduct_inclusion,
  all,
};

std::string_view to_string(MorphismClass k);
std::optional<MorphismClass> parse_morphism_class(std::string_view name);
// Throws std::invalid_argument on an unknown name.
MorphismClass morphism_class_or_throw(std::string_view name);

MorphismProfile classify_morphism(const FinCategory& c, MorphismId f);
std::vector<MorphismId> morphisms_of_class(const FinCategory& c, MorphismClass k);
std::vector<MorphismId> morphisms_of_class(const FinCategory& c, std::string_view name);

nlohmann::json to_json(const FinCategory& c, const MorphismProfile& p);

}  // namespace extmorph
