#pragma once

#include <nlohmann/json.hpp>

#include "extmorph/fincat.hpp"

namespace extmorph {

// {"objects":[...], "morphisms":[{"id","dom","cod"}...], "identities":{obj:id},
//  "composition":[{"g","f","gf"}...], "metadata":{...}}
nlohmann::json to_json(const CategoryDescription& d);
nlohmann::json to_json(const FinCategory& c);

// Throws std::invalid_argument when the document does not have the expected shape.
CategoryDescription description_from_json(const nlohmann::json& j);

}  // namespace extmorph
