#include "extmorph/limits.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "cocone_space.hpp"
#include "extmorph/analysis.hpp"

namespace extmorph {

namespace detail {

CoconeSpace::CoconeSpace(const FinCategory& c, DiagramBase base)
    : c_(&c), base_(std::move(base)), vertices_(base_.vertices()), counts_(c.object_count(), -1) {}

std::size_t CoconeSpace::count(ObjectId t) const {
  auto& slot = counts_[t.index()];
  if (slot >= 0) return static_cast<std::size_t>(slot);
  const FinCategory& c = *c_;
  std::size_t n = 0;
  switch (base_.shape) {
    case Shape::discrete:
      n = 1;
      for (ObjectId v : vertices_) n *= c.hom(v, t).size();
      break;
    case Shape::parallel: {
      const MorphismId u = base_.arrows[0], v = base_.arrows[1];
      for (MorphismId h : c.hom(base_.objects[1], t))
        if (c.compose(h, u) == c.compose(h, v)) ++n;
      break;
    }
    case Shape::corner: {
      const MorphismId f = base_.arrows[0], g = base_.arrows[1];
      std::vector<std::uint32_t> bucket(c.hom(base_.objects[0], t).size(), 0);
      for (MorphismId a : c.hom(base_.objects[1], t)) ++bucket[c.local_index(c.compose(a, f))];
      for (MorphismId b : c.hom(base_.objects[2], t)) n += bucket[c.local_index(c.compose(b, g))];
      break;
    }
  }
  slot = static_cast<std::int64_t>(n);
  return n;
}

bool CoconeSpace::compatible(std::span<const MorphismId> legs) const {
  const FinCategory& c = *c_;
  if (legs.size() != vertices_.size()) return false;
  if (legs.empty()) return true;
  const ObjectId nadir = c.cod(legs[0]);
  for (std::size_t i = 0; i < legs.size(); ++i)
    if (c.dom(legs[i]) != vertices_[i] || c.cod(legs[i]) != nadir) return false;
  switch (base_.shape) {
    case Shape::discrete: return true;
    case Shape::parallel: return c.compose(legs[0], base_.arrows[0]) == c.compose(legs[0], base_.arrows[1]);
    case Shape::corner: return c.compose(legs[0], base_.arrows[0]) == c.compose(legs[1], base_.arrows[1]);
  }
  return false;
}

bool CoconeSpace::signature_matches(ObjectId nadir) const {
  for (ObjectId t : c_->objects())
    if (c_->hom(nadir, t).size() != count(t)) return false;
  return true;
}

std::uint64_t CoconeSpace::key(MorphismId k, std::span<const MorphismId> legs, ObjectId t) const {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < legs.size(); ++i)
    key = key * c_->hom(vertices_[i], t).size() + c_->local_index(c_->compose(k, legs[i]));
  return key;
}

bool CoconeSpace::universal(ObjectId nadir, std::span<const MorphismId> legs) const {
  if (!signature_matches(nadir)) return false;
  thread_local std::vector<std::uint64_t> keys;
  for (ObjectId t : c_->objects()) {
    const auto h = c_->hom(nadir, t);
    if (h.size() <= 1) continue;
    keys.clear();
    for (MorphismId k : h) keys.push_back(key(k, legs, t));
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return false;
  }
  return true;
}

std::optional<UniversalCounterexample> CoconeSpace::counterexample(ObjectId nadir,
                                                                    std::span<const MorphismId> legs) const {
  const FinCategory& c = *c_;
  for (ObjectId t : c.objects()) {
    std::unordered_map<std::uint64_t, std::vector<MorphismId>> by_key;
    for (MorphismId k : c.hom(nadir, t)) by_key[key(k, legs, t)].push_back(k);
    std::optional<UniversalCounterexample> found;
    for_each_cocone(t, [&](std::span<const MorphismId> cocone) {
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < cocone.size(); ++i)
        key = key * c.hom(vertices_[i], t).size() + c.local_index(cocone[i]);
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        found = UniversalCounterexample{t, {cocone.begin(), cocone.end()}, {}};
      } else if (it->second.size() > 1) {
        found = UniversalCounterexample{t, {cocone.begin(), cocone.end()}, it->second};
      }
      return !found.has_value();
    });
    if (found) return found;
  }
  return std::nullopt;
}

}  // namespace detail

std::vector<ObjectId> DiagramBase::vertices() const {
  switch (shape) {
    case Shape::discrete: return objects;
    case Shape::parallel: return {objects.at(1)};
    case Shape::corner: return {objects.at(1), objects.at(2)};
  }
  return {};
}

DiagramBase discrete_base(std::vector<ObjectId> family) { return {Shape::discrete, std::move(family), {}}; }

DiagramBase parallel_base(const FinCategory& c, MorphismId u, MorphismId v) {
  if (u.index() >= c.morphism_count() || v.index() >= c.morphism_count())
    throw std::invalid_argument("parallel pair: unknown morphism");
  if (c.dom(u) != c.dom(v) || c.cod(u) != c.cod(v)) throw std::invalid_argument("parallel pair: arrows not parallel");
  return {Shape::parallel, {c.dom(u), c.cod(u)}, {u, v}};
}

DiagramBase corner_base(const FinCategory& c, MorphismId f, MorphismId g) {
  if (f.index() >= c.morphism_count() || g.index() >= c.morphism_count())
    throw std::invalid_argument("corner: unknown morphism");
  if (c.dom(f) != c.dom(g)) throw std::invalid_argument("corner: arrows do not share an end");
  return {Shape::corner, {c.dom(f), c.cod(f), c.cod(g)}, {f, g}};
}

namespace {

void require_well_formed(const FinCategory& c, const DiagramBase& base) {
  for (ObjectId o : base.objects)
    if (o.index() >= c.object_count()) throw std::invalid_argument("diagram base: unknown object");
  switch (base.shape) {
    case Shape::discrete:
      if (!base.arrows.empty()) throw std::invalid_argument("diagram base: discrete family with arrows");
      return;
    case Shape::parallel:
      if (base.objects.size() != 2 || base.arrows.size() != 2 ||
          parallel_base(c, base.arrows[0], base.arrows[1]) != base)
        throw std::invalid_argument("diagram base: malformed parallel pair");
      return;
    case Shape::corner:
      if (base.objects.size() != 3 || base.arrows.size() != 2 || corner_base(c, base.arrows[0], base.arrows[1]) != base)
        throw std::invalid_argument("diagram base: malformed corner");
      return;
  }
}

void require_cocone(const FinCategory& c, const detail::CoconeSpace& space, const CospanDiagram& d) {
  if (d.nadir.index() >= c.object_count()) throw std::invalid_argument("cocone: unknown nadir");
  if (d.legs.size() != space.vertices().size()) throw std::invalid_argument("cocone: wrong number of legs");
  for (MorphismId l : d.legs)
    if (l.index() >= c.morphism_count() || c.cod(l) != d.nadir) throw std::invalid_argument("cocone: leg does not reach nadir");
  if (!space.compatible(d.legs)) throw std::invalid_argument("cocone does not commute with its base");
}

}  // namespace

UniversalityResult is_universal_cocone(const FinCategory& c, const CospanDiagram& d) {
  require_well_formed(c, d.base);
  detail::CoconeSpace space(c, d.base);
  require_cocone(c, space, d);
  UniversalityResult r;
  r.universal = space.universal(d.nadir, d.legs);
  if (!r.universal) r.counterexample = space.counterexample(d.nadir, d.legs);
  return r;
}

UniversalityResult is_universal_cone(const FinCategory& c, const SpanDiagram& d) {
  return is_universal_cocone(dual(c), as_cospan(d));
}

UniversalWitness universal_witness(const FinCategory& c, const CospanDiagram& d) {
  require_well_formed(c, d.base);
  detail::CoconeSpace space(c, d.base);
  require_cocone(c, space, d);
  if (!space.universal(d.nadir, d.legs)) throw std::invalid_argument("witness requested for a non-universal cocone");
  UniversalWitness w;
  for (ObjectId t : c.objects()) {
    for (MorphismId k : c.hom(d.nadir, t)) {
      std::vector<MorphismId> cocone;
      for (MorphismId l : d.legs) cocone.push_back(c.compose(k, l));
      w.mediators.emplace_back(std::move(cocone), k);
    }
  }
  std::sort(w.mediators.begin(), w.mediators.end());
  return w;
}

UniversalWitness universal_witness(const FinCategory& c, const SpanDiagram& d) {
  return universal_witness(dual(c), as_cospan(d));
}

std::vector<CospanDiagram> all_colimits(const FinCategory& c, const DiagramBase& base) {
  require_well_formed(c, base);
  detail::CoconeSpace space(c, base);
  std::vector<CospanDiagram> out;
  for (ObjectId n : c.objects()) {
    if (!space.signature_matches(n)) continue;
    space.for_each_cocone(n, [&](std::span<const MorphismId> legs) {
      if (space.universal(n, legs)) out.push_back({base, n, {legs.begin(), legs.end()}});
      return true;
    });
  }
  return out;
}

std::optional<CospanDiagram> colimit(const FinCategory& c, const DiagramBase& base) {
  require_well_formed(c, base);
  detail::CoconeSpace space(c, base);
  for (ObjectId n : c.objects()) {
    if (!space.signature_matches(n)) continue;
    std::optional<CospanDiagram> found;
    space.for_each_cocone(n, [&](std::span<const MorphismId> legs) {
      if (space.universal(n, legs)) found = CospanDiagram{base, n, {legs.begin(), legs.end()}};
      return !found.has_value();
    });
    if (found) return found;
  }
  return std::nullopt;
}

std::optional<SpanDiagram> limit(const FinCategory& c, const DiagramBase& base_in_opposite) {
  auto d = colimit(dual(c), base_in_opposite);
  if (!d) return std::nullopt;
  return as_span(std::move(*d));
}

std::optional<CospanDiagram> initial_object(const FinCategory& c) { return colimit(c, discrete_base({})); }
std::optional<CospanDiagram> coproduct(const FinCategory& c, ObjectId a, ObjectId b) {
  return colimit(c, discrete_base({a, b}));
}
std::optional<CospanDiagram> coequaliser(const FinCategory& c, MorphismId u, MorphismId v) {
  return colimit(c, parallel_base(c, u, v));
}
std::optional<CospanDiagram> pushout(const FinCategory& c, MorphismId f, MorphismId g) {
  return colimit(c, corner_base(c, f, g));
}

std::optional<SpanDiagram> terminal_object(const FinCategory& c) { return limit(c, discrete_base({})); }
std::optional<SpanDiagram> product(const FinCategory& c, ObjectId a, ObjectId b) {
  return limit(c, discrete_base({a, b}));
}
std::optional<SpanDiagram> equaliser(const FinCategory& c, MorphismId u, MorphismId v) {
  return limit(c, parallel_base(dual(c), u, v));
}
std::optional<SpanDiagram> pullback(const FinCategory& c, MorphismId f, MorphismId g) {
  return limit(c, corner_base(dual(c), f, g));
}
std::optional<SpanDiagram> kernel_pair(const FinCategory& c, MorphismId f) { return pullback(c, f, f); }

std::optional<MorphismId> mediator_out_of(const FinCategory& c, const CospanDiagram& colimit_cocone, ObjectId target,
                                          std::span<const MorphismId> cocone) {
  if (cocone.size() != colimit_cocone.legs.size()) return std::nullopt;
  for (MorphismId k : c.hom(colimit_cocone.nadir, target)) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < cocone.size(); ++i) ok = c.compose(k, colimit_cocone.legs[i]) == cocone[i];
    if (ok) return k;
  }
  return std::nullopt;
}

std::optional<MorphismId> mediator_into(const FinCategory& c, const SpanDiagram& limit_cone, ObjectId source,
                                        std::span<const MorphismId> cone) {
  return mediator_out_of(dual(c), as_cospan(limit_cone), source, cone);
}

namespace {

void require_binary(const SpanDiagram& d, const char* what) {
  if (d.base.shape != Shape::discrete || d.legs.size() != 2) throw std::invalid_argument(std::string(what) + ": not a binary product");
}

}  // namespace

MorphismId product_of_morphisms(const FinCategory& c, MorphismId f1, MorphismId f2, const SpanDiagram& dom_product,
                                const SpanDiagram& cod_product) {
  require_binary(dom_product, "domain product");
  require_binary(cod_product, "codomain product");
  if (!is_universal_cone(c, dom_product).universal || !is_universal_cone(c, cod_product).universal)
    throw std::invalid_argument("product of morphisms: product diagram not certified");
  if (c.dom(f1) != dom_product.base.objects[0] || c.dom(f2) != dom_product.base.objects[1] ||
      c.cod(f1) != cod_product.base.objects[0] || c.cod(f2) != cod_product.base.objects[1])
    throw std::invalid_argument("product of morphisms: factors do not match the products");
  const MorphismId cone[2] = {c.compose(f1, dom_product.legs[0]), c.compose(f2, dom_product.legs[1])};
  auto k = mediator_into(c, cod_product, dom_product.apex, cone);
  if (!k) throw std::logic_error("certified product without mediator");
  return *k;
}

MorphismId coproduct_of_morphisms(const FinCategory& c, MorphismId f1, MorphismId f2,
                                  const CospanDiagram& dom_coproduct, const CospanDiagram& cod_coproduct) {
  // in the opposite category the factors run cod -> dom
  return product_of_morphisms(dual(c), f1, f2, as_span(cod_coproduct), as_span(dom_coproduct));
}

std::optional<ImageFactorisation> image_factorisation(const FinCategory& c, MorphismId f) {
  Analysis a(c);
  return a.image_factorisation(f);
}

std::optional<MorphismId> comparison_iso(const FinCategory& c, const CospanDiagram& a, const CospanDiagram& b) {
  auto k = mediator_out_of(c, a, b.nadir, b.legs);
  if (!k) return std::nullopt;
  auto back = mediator_out_of(c, b, a.nadir, a.legs);
  if (!back) return std::nullopt;
  if (c.compose(*back, *k) != c.identity(a.nadir) || c.compose(*k, *back) != c.identity(b.nadir)) return std::nullopt;
  return k;
}

namespace {

std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::discrete: return "discrete";
    case Shape::parallel: return "parallel";
    case Shape::corner: return "corner";
  }
  return "?";
}

nlohmann::json names(const FinCategory& c, std::span<const MorphismId> ms) {
  auto out = nlohmann::json::array();
  for (MorphismId m : ms) out.push_back(c.morphism_name(m));
  return out;
}

}  // namespace

nlohmann::json to_json(const FinCategory& c, const DiagramBase& base) {
  auto objs = nlohmann::json::array();
  for (ObjectId o : base.objects) objs.push_back(c.object_name(o));
  return {{"shape", shape_name(base.shape)}, {"objects", objs}, {"arrows", names(c, base.arrows)}};
}

nlohmann::json to_json(const FinCategory& c, const CospanDiagram& d) {
  return {{"base", to_json(c, d.base)}, {"nadir", c.object_name(d.nadir)}, {"legs", names(c, d.legs)}};
}

nlohmann::json to_json(const FinCategory& c, const SpanDiagram& d) {
  return {{"base", to_json(c, d.base)}, {"apex", c.object_name(d.apex)}, {"legs", names(c, d.legs)}};
}

}  // namespace extmorph
