#include "extmorph/classify.hpp"

#include <array>
#include <stdexcept>

#include "extmorph/analysis.hpp"

namespace extmorph {

namespace {

constexpr std::array<std::pair<MorphismClass, std::string_view>, 11> class_names{{
    {MorphismClass::mono, "mono"},
    {MorphismClass::epi, "epi"},
    {MorphismClass::split_mono, "split-mono"},
    {MorphismClass::split_epi, "split-epi"},
    {MorphismClass::regular_epi, "regular-epi"},
    {MorphismClass::regular_mono, "regular-mono"},
    {MorphismClass::extremal_epi, "extremal-epi"},
    {MorphismClass::iso, "iso"},
    {MorphismClass::product_projection, "product-projection"},
    {MorphismClass::coproduct_inclusion, "coproduct-inclusion"},
    {MorphismClass::all, "all"},
}};

}  // namespace

std::string_view to_string(MorphismClass k) {
  for (auto [cls, name] : class_names)
    if (cls == k) return name;
  return "?";
}

std::optional<MorphismClass> parse_morphism_class(std::string_view name) {
  for (auto [cls, n] : class_names)
    if (n == name) return cls;
  return std::nullopt;
}

MorphismClass morphism_class_or_throw(std::string_view name) {
  if (auto k = parse_morphism_class(name)) return *k;
  throw std::invalid_argument("unknown morphism class: " + std::string(name));
}

MorphismProfile classify_morphism(const FinCategory& c, MorphismId f) {
  if (f.index() >= c.morphism_count()) throw std::invalid_argument("classify: unknown morphism");
  Analysis a(c);
  return a.profile(f);
}

std::vector<MorphismId> morphisms_of_class(const FinCategory& c, MorphismClass k) {
  Analysis a(c);
  std::vector<MorphismId> out;
  for (MorphismId f : c.morphisms())
    if (a.in_class(f, k)) out.push_back(f);
  return out;
}

std::vector<MorphismId> morphisms_of_class(const FinCategory& c, std::string_view name) {
  return morphisms_of_class(c, morphism_class_or_throw(name));
}

nlohmann::json to_json(const FinCategory& c, const MorphismProfile& p) {
  nlohmann::json j{{"mono", p.is_mono},
                   {"epi", p.is_epi},
                   {"split_mono", p.is_split_mono},
                   {"split_epi", p.is_split_epi},
                   {"regular_mono", p.is_regular_mono},
                   {"regular_epi", p.is_regular_epi},
                   {"extremal_epi", p.is_extremal_epi},
                   {"iso", p.is_iso}};
  if (p.retraction) j["retraction"] = c.morphism_name(*p.retraction);
  if (p.section) j["section"] = c.morphism_name(*p.section);
  if (p.coequalised_pair)
    j["coequalised_pair"] = {c.morphism_name(p.coequalised_pair->first), c.morphism_name(p.coequalised_pair->second)};
  if (p.equalised_pair)
    j["equalised_pair"] = {c.morphism_name(p.equalised_pair->first), c.morphism_name(p.equalised_pair->second)};
  return j;
}

}  // namespace extmorph
