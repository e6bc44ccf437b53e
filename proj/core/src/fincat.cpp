#include "extmorph/fincat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace extmorph {

struct FinCategory::Data {
  std::vector<std::string> object_names;
  std::vector<std::string> morphism_names;
  std::vector<ObjectId> dom;
  std::vector<ObjectId> cod;
  std::vector<MorphismId> identity;
  std::vector<bool> is_identity;
  std::vector<std::size_t> hom_offset;  // n*n + 1
  std::vector<MorphismId> hom_list;
  std::vector<std::uint32_t> local;
  std::vector<std::size_t> block_offset;  // composition block of (a,b,c), n^3
  std::vector<MorphismId> comp;
  std::unordered_map<std::string, ObjectId> object_index;
  std::unordered_map<std::string, MorphismId> morphism_index;
  nlohmann::json metadata;

  [[nodiscard]] std::size_t n() const { return object_names.size(); }
  [[nodiscard]] std::span<const MorphismId> hom(ObjectId a, ObjectId b) const {
    const std::size_t k = a.index() * n() + b.index();
    return {hom_list.data() + hom_offset[k], hom_offset[k + 1] - hom_offset[k]};
  }
  [[nodiscard]] std::size_t hom_size(std::size_t a, std::size_t b) const {
    const std::size_t k = a * n() + b;
    return hom_offset[k + 1] - hom_offset[k];
  }
  [[nodiscard]] std::size_t slot(MorphismId g, MorphismId f) const {
    const std::size_t a = dom[f.index()].index();
    const std::size_t b = cod[f.index()].index();
    const std::size_t c = cod[g.index()].index();
    return block_offset[(a * n() + b) * n() + c] + local[g.index()] * hom_size(a, b) + local[f.index()];
  }
  [[nodiscard]] MorphismId compose(MorphismId g, MorphismId f) const { return comp[slot(g, f)]; }
};

std::string_view to_string(ValidationError::Kind kind) {
  using K = ValidationError::Kind;
  switch (kind) {
    case K::duplicate_object: return "duplicate-object";
    case K::duplicate_morphism: return "duplicate-morphism";
    case K::unknown_object: return "unknown-object";
    case K::unknown_morphism: return "unknown-morphism";
    case K::missing_identity: return "missing-identity";
    case K::duplicate_identity: return "duplicate-identity";
    case K::identity_not_endomorphism: return "identity-not-endomorphism";
    case K::not_composable: return "not-composable";
    case K::composite_wrong_type: return "composite-wrong-type";
    case K::duplicate_composite: return "duplicate-composite";
    case K::missing_composite: return "missing-composite";
    case K::identity_law: return "identity-law";
    case K::associativity: return "associativity";
  }
  return "unknown";
}

std::size_t FinCategory::object_count() const { return data_->n(); }
std::size_t FinCategory::morphism_count() const { return data_->morphism_names.size(); }

ObjectId FinCategory::dom(MorphismId f) const { return opposite_ ? data_->cod[f.index()] : data_->dom[f.index()]; }
ObjectId FinCategory::cod(MorphismId f) const { return opposite_ ? data_->dom[f.index()] : data_->cod[f.index()]; }
MorphismId FinCategory::identity(ObjectId a) const { return data_->identity[a.index()]; }
bool FinCategory::is_identity(MorphismId f) const { return data_->is_identity[f.index()]; }

std::span<const MorphismId> FinCategory::hom(ObjectId a, ObjectId b) const {
  return opposite_ ? data_->hom(b, a) : data_->hom(a, b);
}

std::size_t FinCategory::local_index(MorphismId f) const { return data_->local[f.index()]; }

MorphismId FinCategory::compose(MorphismId g, MorphismId f) const {
  return opposite_ ? data_->compose(f, g) : data_->compose(g, f);
}

const std::string& FinCategory::object_name(ObjectId a) const { return data_->object_names[a.index()]; }
const std::string& FinCategory::morphism_name(MorphismId f) const { return data_->morphism_names[f.index()]; }

std::optional<ObjectId> FinCategory::find_object(std::string_view name) const {
  auto it = data_->object_index.find(std::string(name));
  if (it == data_->object_index.end()) return std::nullopt;
  return it->second;
}

std::optional<MorphismId> FinCategory::find_morphism(std::string_view name) const {
  auto it = data_->morphism_index.find(std::string(name));
  if (it == data_->morphism_index.end()) return std::nullopt;
  return it->second;
}

const nlohmann::json& FinCategory::metadata() const { return data_->metadata; }

FinCategory FinCategory::opposite() const { return FinCategory(data_, !opposite_); }

FinCategory FinCategory::materialized() const { return validated_or_throw(describe()); }

CategoryDescription FinCategory::describe() const {
  CategoryDescription d;
  d.objects = data_->object_names;
  d.morphisms.reserve(morphism_count());
  for (MorphismId f : morphisms())
    d.morphisms.push_back({morphism_name(f), object_name(dom(f)), object_name(cod(f))});
  for (ObjectId a : objects()) d.identities.emplace_back(object_name(a), morphism_name(identity(a)));
  for (MorphismId f : morphisms()) {
    for (ObjectId c : objects()) {
      for (MorphismId g : hom(cod(f), c))
        d.composition.push_back({morphism_name(g), morphism_name(f), morphism_name(compose(g, f))});
    }
  }
  d.metadata = data_->metadata;
  return d;
}

bool operator==(const FinCategory& a, const FinCategory& b) {
  if (a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count()) return false;
  for (ObjectId o : a.objects()) {
    if (a.object_name(o) != b.object_name(o)) return false;
    if (a.identity(o) != b.identity(o)) return false;
  }
  for (MorphismId f : a.morphisms()) {
    if (a.morphism_name(f) != b.morphism_name(f) || a.dom(f) != b.dom(f) || a.cod(f) != b.cod(f)) return false;
  }
  for (MorphismId f : a.morphisms()) {
    for (ObjectId c : a.objects()) {
      auto ha = a.hom(a.cod(f), c);
      auto hb = b.hom(b.cod(f), c);
      if (!std::ranges::equal(ha, hb)) return false;
      for (MorphismId g : ha)
        if (a.compose(g, f) != b.compose(g, f)) return false;
    }
  }
  return true;
}

namespace {

ValidationError make_error(ValidationError::Kind kind, std::vector<std::string> ids, std::string message) {
  return ValidationError{kind, std::move(ids), std::move(message)};
}

}  // namespace

ValidationResult validate_category(const CategoryDescription& raw) {
  using K = ValidationError::Kind;
  std::vector<ValidationError> errors;
  auto data = std::make_shared<FinCategory::Data>();
  data->metadata = raw.metadata;

  for (const auto& name : raw.objects) {
    auto [it, fresh] = data->object_index.emplace(name, ObjectId{data->object_names.size()});
    if (!fresh) {
      errors.push_back(make_error(K::duplicate_object, {name}, "object declared twice"));
      continue;
    }
    data->object_names.push_back(name);
  }
  const std::size_t n = data->n();

  for (const auto& m : raw.morphisms) {
    auto d = data->object_index.find(m.dom);
    auto c = data->object_index.find(m.cod);
    if (d == data->object_index.end())
      errors.push_back(make_error(K::unknown_object, {m.id, m.dom}, "morphism domain is not a declared object"));
    if (c == data->object_index.end())
      errors.push_back(make_error(K::unknown_object, {m.id, m.cod}, "morphism codomain is not a declared object"));
    if (d == data->object_index.end() || c == data->object_index.end()) continue;
    auto [it, fresh] = data->morphism_index.emplace(m.id, MorphismId{data->morphism_names.size()});
    if (!fresh) {
      errors.push_back(make_error(K::duplicate_morphism, {m.id}, "morphism declared twice"));
      continue;
    }
    data->morphism_names.push_back(m.id);
    data->dom.push_back(d->second);
    data->cod.push_back(c->second);
  }
  const std::size_t m_count = data->morphism_names.size();

  // hom-sets in declaration order
  data->hom_offset.assign(n * n + 1, 0);
  for (std::size_t f = 0; f < m_count; ++f) ++data->hom_offset[data->dom[f].index() * n + data->cod[f].index() + 1];
  for (std::size_t k = 0; k < n * n; ++k) data->hom_offset[k + 1] += data->hom_offset[k];
  data->hom_list.resize(m_count);
  data->local.resize(m_count);
  {
    std::vector<std::size_t> fill(data->hom_offset.begin(), data->hom_offset.end() - 1);
    for (std::size_t f = 0; f < m_count; ++f) {
      const std::size_t k = data->dom[f].index() * n + data->cod[f].index();
      data->local[f] = static_cast<std::uint32_t>(fill[k] - data->hom_offset[k]);
      data->hom_list[fill[k]++] = MorphismId{f};
    }
  }

  constexpr std::uint32_t unset = ~std::uint32_t{0};
  std::vector<std::uint32_t> identity(n, unset);
  for (const auto& [obj, mor] : raw.identities) {
    auto o = data->object_index.find(obj);
    auto f = data->morphism_index.find(mor);
    if (o == data->object_index.end()) {
      errors.push_back(make_error(K::unknown_object, {obj}, "identity declared for unknown object"));
      continue;
    }
    if (f == data->morphism_index.end()) {
      errors.push_back(make_error(K::unknown_morphism, {obj, mor}, "identity is not a declared morphism"));
      continue;
    }
    const auto fi = f->second.index();
    if (data->dom[fi] != o->second || data->cod[fi] != o->second) {
      errors.push_back(make_error(K::identity_not_endomorphism, {obj, mor}, "identity must be an endomorphism"));
      continue;
    }
    if (identity[o->second.index()] != unset) {
      errors.push_back(make_error(K::duplicate_identity, {obj, mor}, "object has two identities"));
      continue;
    }
    identity[o->second.index()] = f->second.value;
  }
  for (std::size_t a = 0; a < n; ++a)
    if (identity[a] == unset)
      errors.push_back(make_error(K::missing_identity, {data->object_names[a]}, "object has no identity"));

  // composition blocks
  data->block_offset.assign(n * n * n, 0);
  std::size_t total = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        data->block_offset[(a * n + b) * n + c] = total;
        total += data->hom_size(a, b) * data->hom_size(b, c);
      }
  data->comp.assign(total, MorphismId{unset});

  for (const auto& e : raw.composition) {
    auto g = data->morphism_index.find(e.g);
    auto f = data->morphism_index.find(e.f);
    auto gf = data->morphism_index.find(e.gf);
    bool known = true;
    for (auto [it, name] : {std::pair{g, &e.g}, std::pair{f, &e.f}, std::pair{gf, &e.gf}}) {
      if (it == data->morphism_index.end()) {
        errors.push_back(make_error(K::unknown_morphism, {e.g, e.f, e.gf}, "composition entry names unknown morphism " + *name));
        known = false;
      }
    }
    if (!known) continue;
    const auto gi = g->second.index(), fi = f->second.index(), ri = gf->second.index();
    if (data->cod[fi] != data->dom[gi]) {
      errors.push_back(make_error(K::not_composable, {e.g, e.f, e.gf}, "cod f differs from dom g"));
      continue;
    }
    if (data->dom[ri] != data->dom[fi] || data->cod[ri] != data->cod[gi]) {
      errors.push_back(make_error(K::composite_wrong_type, {e.g, e.f, e.gf}, "composite not in hom(dom f, cod g)"));
      continue;
    }
    auto& cell = data->comp[data->slot(g->second, f->second)];
    if (cell.value != unset) {
      errors.push_back(make_error(K::duplicate_composite, {e.g, e.f, e.gf}, "pair composed twice"));
      continue;
    }
    cell = gf->second;
  }
  for (std::size_t f = 0; f < m_count; ++f) {
    for (std::size_t c = 0; c < n; ++c) {
      for (MorphismId g : data->hom(data->cod[f], ObjectId{c})) {
        if (data->comp[data->slot(g, MorphismId{f})].value == unset)
          errors.push_back(make_error(K::missing_composite, {data->morphism_names[g.index()], data->morphism_names[f]},
                                      "composable pair without composite"));
      }
    }
  }

  if (!errors.empty()) return errors;

  data->identity.reserve(n);
  data->is_identity.assign(m_count, false);
  for (std::size_t a = 0; a < n; ++a) {
    data->identity.emplace_back(identity[a]);
    data->is_identity[identity[a]] = true;
  }

  for (std::size_t fi = 0; fi < m_count; ++fi) {
    const MorphismId f{fi};
    const MorphismId left = data->identity[data->cod[fi].index()];
    const MorphismId right = data->identity[data->dom[fi].index()];
    if (data->compose(left, f) != f || data->compose(f, right) != f)
      errors.push_back(make_error(K::identity_law, {data->morphism_names[fi]}, "identity law fails"));
  }

  for (std::size_t fi = 0; fi < m_count; ++fi) {
    const MorphismId f{fi};
    for (std::size_t c = 0; c < n; ++c) {
      for (MorphismId g : data->hom(data->cod[fi], ObjectId{c})) {
        const MorphismId gf = data->compose(g, f);
        for (std::size_t d = 0; d < n; ++d) {
          for (MorphismId h : data->hom(ObjectId{c}, ObjectId{d})) {
            if (data->compose(h, gf) != data->compose(data->compose(h, g), f)) {
              errors.push_back(make_error(
                  K::associativity,
                  {data->morphism_names[h.index()], data->morphism_names[g.index()], data->morphism_names[fi]},
                  "h(gf) differs from (hg)f"));
            }
          }
        }
      }
    }
  }
  if (!errors.empty()) return errors;
  return FinCategory(std::move(data), false);
}

FinCategory validated_or_throw(const CategoryDescription& raw) {
  auto result = validate_category(raw);
  if (auto* c = std::get_if<FinCategory>(&result)) return *c;
  std::ostringstream out;
  out << "invalid category:";
  for (const auto& e : std::get<std::vector<ValidationError>>(result)) {
    out << "\n  " << to_string(e.kind) << " [";
    for (std::size_t i = 0; i < e.ids.size(); ++i) out << (i ? ", " : "") << e.ids[i];
    out << "] " << e.message;
  }
  throw std::invalid_argument(out.str());
}

}  // namespace extmorph
