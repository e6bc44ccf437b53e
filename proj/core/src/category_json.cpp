#include "extmorph/category_json.hpp"

#include <stdexcept>

namespace extmorph {

nlohmann::json to_json(const CategoryDescription& d) {
  nlohmann::json j;
  j["objects"] = d.objects;
  auto& ms = j["morphisms"] = nlohmann::json::array();
  for (const auto& m : d.morphisms) ms.push_back({{"id", m.id}, {"dom", m.dom}, {"cod", m.cod}});
  auto& ids = j["identities"] = nlohmann::json::object();
  for (const auto& [o, f] : d.identities) ids[o] = f;
  auto& comp = j["composition"] = nlohmann::json::array();
  for (const auto& e : d.composition) comp.push_back({{"g", e.g}, {"f", e.f}, {"gf", e.gf}});
  if (!d.metadata.is_null()) j["metadata"] = d.metadata;
  return j;
}

nlohmann::json to_json(const FinCategory& c) { return to_json(c.describe()); }

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string(where) + ": missing field '" + key + "'");
  return j.at(key);
}

std::string string_field(const nlohmann::json& j, const char* key, const char* where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) throw std::invalid_argument(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

CategoryDescription description_from_json(const nlohmann::json& j) {
  CategoryDescription d;
  const auto& objects = field(j, "objects", "category");
  if (!objects.is_array()) throw std::invalid_argument("category: 'objects' must be an array");
  for (const auto& o : objects) {
    if (!o.is_string()) throw std::invalid_argument("category: object ids must be strings");
    d.objects.push_back(o.get<std::string>());
  }
  const auto& morphisms = field(j, "morphisms", "category");
  if (!morphisms.is_array()) throw std::invalid_argument("category: 'morphisms' must be an array");
  for (const auto& m : morphisms)
    d.morphisms.push_back({string_field(m, "id", "morphism"), string_field(m, "dom", "morphism"),
                           string_field(m, "cod", "morphism")});
  const auto& identities = field(j, "identities", "category");
  if (!identities.is_object()) throw std::invalid_argument("category: 'identities' must be an object");
  for (const auto& [o, f] : identities.items()) {
    if (!f.is_string()) throw std::invalid_argument("category: identity ids must be strings");
    d.identities.emplace_back(o, f.get<std::string>());
  }
  const auto& composition = field(j, "composition", "category");
  if (!composition.is_array()) throw std::invalid_argument("category: 'composition' must be an array");
  d.composition.reserve(composition.size());
  for (const auto& e : composition)
    d.composition.push_back({string_field(e, "g", "composition"), string_field(e, "f", "composition"),
                             string_field(e, "gf", "composition")});
  if (j.contains("metadata")) d.metadata = j.at("metadata");
  return d;
}

}  // namespace extmorph
