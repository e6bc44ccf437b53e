#include "extmorph/analysis.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "cocone_space.hpp"

namespace extmorph {

namespace {

using Key = std::vector<std::uint32_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (std::uint32_t x : k) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

Key base_key(const DiagramBase& b) {
  Key k;
  k.reserve(2 + b.objects.size() + b.arrows.size());
  k.push_back(static_cast<std::uint32_t>(b.shape));
  k.push_back(static_cast<std::uint32_t>(b.objects.size()));
  for (ObjectId o : b.objects) k.push_back(o.value);
  for (MorphismId m : b.arrows) k.push_back(m.value);
  return k;
}

constexpr std::int8_t unknown = -1;

}  // namespace

struct Analysis::Impl {
  explicit Impl(FinCategory c) : cat(std::move(c)) {
    const auto m = cat.morphism_count();
    mono.assign(m, unknown);
    iso.assign(m, unknown);
    inverse.assign(m, std::nullopt);
    regular_epi.assign(m, unknown);
    coequalised.assign(m, std::nullopt);
    profiles.assign(m, std::nullopt);
    orbit.assign(m, ~std::uint32_t{0});
    inclusion.assign(m, unknown);
    autos.assign(cat.object_count(), std::nullopt);
    images.assign(m, std::nullopt);
  }

  FinCategory cat;
  std::vector<std::int8_t> mono;
  std::vector<std::int8_t> iso;
  std::vector<std::optional<MorphismId>> inverse;
  std::vector<std::int8_t> regular_epi;
  std::vector<std::optional<std::pair<MorphismId, MorphismId>>> coequalised;
  std::vector<std::optional<MorphismProfile>> profiles;
  std::vector<std::uint32_t> orbit;
  std::vector<std::int8_t> inclusion;
  std::vector<std::optional<std::vector<MorphismId>>> autos;
  std::vector<std::optional<std::optional<ImageFactorisation>>> images;
  std::unordered_map<Key, std::unique_ptr<detail::CoconeSpace>, KeyHash> spaces;
  std::unordered_map<Key, bool, KeyHash> universal;
  std::unordered_map<Key, std::optional<CospanDiagram>, KeyHash> colimits;
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<CospanDiagram>> decompositions;
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<SpanDiagram>> product_decompositions;
  std::optional<bool> binary_coproducts, pullbacks, equalisers, kernel_pairs;

  detail::CoconeSpace& space(const DiagramBase& base) {
    auto key = base_key(base);
    auto it = spaces.find(key);
    if (it == spaces.end()) it = spaces.emplace(std::move(key), std::make_unique<detail::CoconeSpace>(cat, base)).first;
    return *it->second;
  }
};

Analysis::Analysis(FinCategory c) : impl_(std::make_unique<Impl>(std::move(c))) {}
Analysis::~Analysis() = default;

const FinCategory& Analysis::category() const { return impl_->cat; }

Analysis& Analysis::opposite() {
  if (opposite_ == nullptr) {
    owned_opposite_ = std::make_unique<Analysis>(impl_->cat.opposite());
    owned_opposite_->opposite_ = this;
    opposite_ = owned_opposite_.get();
  }
  return *opposite_;
}

bool Analysis::is_mono(MorphismId f) {
  auto& slot = impl_->mono[f.index()];
  if (slot != unknown) return slot == 1;
  const FinCategory& c = impl_->cat;
  const ObjectId a = c.dom(f), x = c.cod(f);
  bool ok = true;
  std::vector<bool> seen;
  for (ObjectId w : c.objects()) {
    seen.assign(c.hom(w, x).size(), false);
    for (MorphismId g : c.hom(w, a)) {
      const auto k = c.local_index(c.compose(f, g));
      if (seen[k]) {
        ok = false;
        break;
      }
      seen[k] = true;
    }
    if (!ok) break;
  }
  slot = ok ? 1 : 0;
  return ok;
}

bool Analysis::is_epi(MorphismId f) { return opposite().is_mono(f); }

std::optional<MorphismId> Analysis::inverse(MorphismId f) {
  auto& slot = impl_->iso[f.index()];
  if (slot == unknown) {
    const FinCategory& c = impl_->cat;
    const ObjectId a = c.dom(f), x = c.cod(f);
    slot = 0;
    for (MorphismId g : c.hom(x, a)) {
      if (c.compose(g, f) == c.identity(a) && c.compose(f, g) == c.identity(x)) {
        impl_->inverse[f.index()] = g;
        slot = 1;
        break;
      }
    }
  }
  return impl_->inverse[f.index()];
}

bool Analysis::is_iso(MorphismId f) { return inverse(f).has_value(); }

std::span<const MorphismId> Analysis::automorphisms(ObjectId a) {
  auto& slot = impl_->autos[a.index()];
  if (!slot) {
    std::vector<MorphismId> out{impl_->cat.identity(a)};
    for (MorphismId s : impl_->cat.hom(a, a))
      if (s != impl_->cat.identity(a) && is_iso(s)) out.push_back(s);
    slot = std::move(out);
  }
  return *slot;
}

MorphismId Analysis::orbit_rep(MorphismId f) {
  auto& slot = impl_->orbit[f.index()];
  if (slot != ~std::uint32_t{0}) return MorphismId{slot};
  const FinCategory& c = impl_->cat;
  MorphismId best = f;
  for (MorphismId s : automorphisms(c.dom(f))) {
    const MorphismId g = c.compose(f, s);
    if (c.local_index(g) < c.local_index(best)) best = g;
  }
  slot = best.value;
  return best;
}

bool Analysis::is_universal(const CospanDiagram& d) {
  Key key = base_key(d.base);
  key.push_back(d.nadir.value);
  for (MorphismId l : d.legs) key.push_back(l.value);
  auto it = impl_->universal.find(key);
  if (it != impl_->universal.end()) return it->second;
  auto& space = impl_->space(d.base);
  bool ok = space.compatible(d.legs) && (d.legs.empty() ? true : impl_->cat.cod(d.legs[0]) == d.nadir) &&
            space.universal(d.nadir, d.legs);
  impl_->universal.emplace(std::move(key), ok);
  return ok;
}

bool Analysis::is_universal(const SpanDiagram& d) { return opposite().is_universal(as_cospan(d)); }

bool Analysis::is_coproduct(std::span<const MorphismId> injections) {
  const FinCategory& c = impl_->cat;
  if (injections.empty()) return false;
  std::vector<ObjectId> family;
  for (MorphismId i : injections) {
    if (c.cod(i) != c.cod(injections[0])) return false;
    family.push_back(c.dom(i));
  }
  return is_universal(CospanDiagram{discrete_base(std::move(family)), c.cod(injections[0]),
                                    {injections.begin(), injections.end()}});
}

bool Analysis::is_product(std::span<const MorphismId> projections) { return opposite().is_coproduct(projections); }

bool Analysis::is_coproduct(MorphismId i1, MorphismId i2) {
  const MorphismId legs[2] = {i1, i2};
  return is_coproduct(legs);
}

bool Analysis::is_product(MorphismId p1, MorphismId p2) { return opposite().is_coproduct(p1, p2); }

bool Analysis::is_pushout_square(MorphismId p1, MorphismId p2, MorphismId f, MorphismId g) {
  const FinCategory& c = impl_->cat;
  if (c.dom(f) != c.dom(g) || c.dom(p1) != c.cod(f) || c.dom(p2) != c.cod(g) || c.cod(p1) != c.cod(p2)) return false;
  return is_universal(CospanDiagram{corner_base(c, f, g), c.cod(p1), {p1, p2}});
}

bool Analysis::is_pullback_square(MorphismId p1, MorphismId p2, MorphismId f, MorphismId g) {
  return opposite().is_pushout_square(p1, p2, f, g);
}

bool Analysis::is_coequaliser(MorphismId q, MorphismId u, MorphismId v) {
  const FinCategory& c = impl_->cat;
  if (c.dom(u) != c.dom(v) || c.cod(u) != c.cod(v) || c.dom(q) != c.cod(u)) return false;
  return is_universal(CospanDiagram{parallel_base(c, u, v), c.cod(q), {q}});
}

bool Analysis::is_equaliser(MorphismId e, MorphismId u, MorphismId v) { return opposite().is_coequaliser(e, u, v); }

std::optional<CospanDiagram> Analysis::colimit(const DiagramBase& base) {
  auto key = base_key(base);
  auto it = impl_->colimits.find(key);
  if (it != impl_->colimits.end()) return it->second;
  auto& space = impl_->space(base);
  std::optional<CospanDiagram> found;
  for (ObjectId n : impl_->cat.objects()) {
    if (!space.signature_matches(n)) continue;
    space.for_each_cocone(n, [&](std::span<const MorphismId> legs) {
      if (space.universal(n, legs)) found = CospanDiagram{base, n, {legs.begin(), legs.end()}};
      return !found.has_value();
    });
    if (found) break;
  }
  impl_->colimits.emplace(std::move(key), found);
  return found;
}

std::optional<SpanDiagram> Analysis::limit(const DiagramBase& base_in_opposite) {
  auto d = opposite().colimit(base_in_opposite);
  if (!d) return std::nullopt;
  return as_span(std::move(*d));
}

std::optional<CospanDiagram> Analysis::initial() { return colimit(discrete_base({})); }
std::optional<SpanDiagram> Analysis::terminal() { return limit(discrete_base({})); }
std::optional<CospanDiagram> Analysis::coproduct(ObjectId a, ObjectId b) { return colimit(discrete_base({a, b})); }
std::optional<SpanDiagram> Analysis::product(ObjectId a, ObjectId b) { return limit(discrete_base({a, b})); }
std::optional<CospanDiagram> Analysis::pushout(MorphismId f, MorphismId g) {
  return colimit(corner_base(impl_->cat, f, g));
}
std::optional<SpanDiagram> Analysis::pullback(MorphismId f, MorphismId g) {
  return limit(corner_base(opposite().category(), f, g));
}
std::optional<CospanDiagram> Analysis::coequaliser(MorphismId u, MorphismId v) {
  return colimit(parallel_base(impl_->cat, u, v));
}
std::optional<SpanDiagram> Analysis::equaliser(MorphismId u, MorphismId v) {
  return limit(parallel_base(opposite().category(), u, v));
}
std::optional<SpanDiagram> Analysis::kernel_pair(MorphismId f) { return pullback(f, f); }

const std::vector<CospanDiagram>& Analysis::coproduct_decompositions(ObjectId x, std::size_t arity) {
  auto key = std::pair{x.value, arity};
  auto it = impl_->decompositions.find(key);
  if (it != impl_->decompositions.end()) return it->second;

  const FinCategory& c = impl_->cat;
  const std::size_t n = c.object_count();
  std::vector<std::size_t> target(n);
  for (ObjectId t : c.objects()) target[t.index()] = c.hom(x, t).size();

  std::vector<std::vector<MorphismId>> reps_of(n);
  std::vector<bool> reps_ready(n, false);
  auto reps = [&](ObjectId a) -> const std::vector<MorphismId>& {
    if (!reps_ready[a.index()]) {
      for (MorphismId m : c.hom(a, x))
        if (orbit_rep(m) == m) reps_of[a.index()].push_back(m);
      reps_ready[a.index()] = true;
    }
    return reps_of[a.index()];
  };

  std::vector<CospanDiagram> out;
  std::vector<ObjectId> family(arity);
  std::vector<std::size_t> partial(n, 1);

  // object tuples whose hom-size products match hom(x, -)
  auto choose = [&](auto&& self, std::size_t depth, const std::vector<std::size_t>& prod) -> void {
    if (depth == arity) {
      if (prod != target) return;
      DiagramBase base = discrete_base(family);
      auto& space = impl_->space(base);
      std::vector<MorphismId> legs(arity);
      auto pick = [&](auto&& pick_self, std::size_t i) -> void {
        if (i == arity) {
          if (space.universal(x, legs)) out.push_back({base, x, legs});
          return;
        }
        for (MorphismId m : reps(family[i])) {
          legs[i] = m;
          pick_self(pick_self, i + 1);
        }
      };
      pick(pick, 0);
      return;
    }
    for (ObjectId a : c.objects()) {
      std::vector<std::size_t> next(n);
      bool viable = true;
      for (std::size_t t = 0; t < n && viable; ++t) {
        next[t] = prod[t] * c.hom(a, ObjectId{t}).size();
        if (target[t] != 0 && (next[t] == 0 || target[t] % next[t] != 0)) viable = false;
      }
      if (!viable) continue;
      family[depth] = a;
      self(self, depth + 1, next);
    }
  };
  choose(choose, 0, partial);
  return impl_->decompositions.emplace(key, std::move(out)).first->second;
}

const std::vector<SpanDiagram>& Analysis::product_decompositions(ObjectId x, std::size_t arity) {
  auto key = std::pair{x.value, arity};
  auto it = impl_->product_decompositions.find(key);
  if (it != impl_->product_decompositions.end()) return it->second;
  std::vector<SpanDiagram> out;
  for (const auto& d : opposite().coproduct_decompositions(x, arity)) out.push_back(as_span(d));
  return impl_->product_decompositions.emplace(key, std::move(out)).first->second;
}

bool Analysis::is_coproduct_inclusion(MorphismId f) {
  auto& slot = impl_->inclusion[f.index()];
  if (slot != unknown) return slot == 1;
  const MorphismId rep = orbit_rep(f);
  bool found = false;
  for (const auto& d : coproduct_decompositions(impl_->cat.cod(f)))
    if (d.legs[0] == rep) {
      found = true;
      break;
    }
  slot = found ? 1 : 0;
  return found;
}

bool Analysis::is_product_projection(MorphismId f) { return opposite().is_coproduct_inclusion(f); }

bool Analysis::has_initial() { return initial().has_value(); }
bool Analysis::has_terminal() { return terminal().has_value(); }

bool Analysis::has_binary_coproducts() {
  if (!impl_->binary_coproducts) {
    bool ok = true;
    for (ObjectId a : impl_->cat.objects()) {
      for (ObjectId b : impl_->cat.objects()) {
        if (b < a) continue;
        if (!coproduct(a, b)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    impl_->binary_coproducts = ok;
  }
  return *impl_->binary_coproducts;
}

bool Analysis::has_binary_products() { return opposite().has_binary_coproducts(); }

bool Analysis::has_pullbacks() {
  if (!impl_->pullbacks) {
    const FinCategory& c = impl_->cat;
    bool ok = true;
    for (ObjectId x : c.objects()) {
      std::vector<MorphismId> into;
      for (ObjectId a : c.objects())
        for (MorphismId f : c.hom(a, x)) into.push_back(f);
      for (std::size_t i = 0; ok && i < into.size(); ++i)
        for (std::size_t j = i; ok && j < into.size(); ++j) ok = pullback(into[i], into[j]).has_value();
      if (!ok) break;
    }
    impl_->pullbacks = ok;
  }
  return *impl_->pullbacks;
}

bool Analysis::has_equalisers() {
  if (!impl_->equalisers) {
    const FinCategory& c = impl_->cat;
    bool ok = true;
    for (ObjectId a : c.objects()) {
      for (ObjectId b : c.objects()) {
        auto h = c.hom(a, b);
        for (std::size_t i = 0; ok && i < h.size(); ++i)
          for (std::size_t j = i + 1; ok && j < h.size(); ++j) ok = equaliser(h[i], h[j]).has_value();
        if (!ok) break;
      }
      if (!ok) break;
    }
    impl_->equalisers = ok;
  }
  return *impl_->equalisers;
}

bool Analysis::has_kernel_pairs() {
  if (!impl_->kernel_pairs) {
    bool ok = true;
    for (MorphismId f : impl_->cat.morphisms())
      if (!kernel_pair(f)) {
        ok = false;
        break;
      }
    impl_->kernel_pairs = ok;
  }
  return *impl_->kernel_pairs;
}

std::optional<MorphismId> Analysis::mediator_into(const SpanDiagram& cone, ObjectId source,
                                                  std::span<const MorphismId> legs) {
  return extmorph::mediator_into(impl_->cat, cone, source, legs);
}

std::optional<MorphismId> Analysis::mediator_out_of(const CospanDiagram& cocone, ObjectId target,
                                                    std::span<const MorphismId> legs) {
  return extmorph::mediator_out_of(impl_->cat, cocone, target, legs);
}

const MorphismProfile& Analysis::profile(MorphismId f) {
  auto& slot = impl_->profiles[f.index()];
  if (slot) return *slot;
  const FinCategory& c = impl_->cat;
  const ObjectId a = c.dom(f), x = c.cod(f);
  MorphismProfile p;
  p.is_mono = is_mono(f);
  p.is_epi = is_epi(f);
  p.is_iso = is_iso(f);
  for (MorphismId r : c.hom(x, a)) {
    if (!p.retraction && c.compose(r, f) == c.identity(a)) p.retraction = r;
    if (!p.section && c.compose(f, r) == c.identity(x)) p.section = r;
  }
  p.is_split_mono = p.retraction.has_value();
  p.is_split_epi = p.section.has_value();

  // regular epi: f iso, or f coequalises some parallel pair into its domain
  auto regular = [](Analysis& ctx, MorphismId g) -> std::optional<std::pair<MorphismId, MorphismId>> {
    const FinCategory& cc = ctx.category();
    const ObjectId ga = cc.dom(g);
    if (ctx.is_iso(g)) return std::pair{cc.identity(ga), cc.identity(ga)};
    if (!ctx.is_epi(g)) return std::nullopt;
    if (auto kp = ctx.kernel_pair(g)) {
      // a regular epi with a kernel pair coequalises it
      if (ctx.is_coequaliser(g, kp->legs[0], kp->legs[1])) return std::pair{kp->legs[0], kp->legs[1]};
      return std::nullopt;
    }
    for (ObjectId w : cc.objects()) {
      const auto h = cc.hom(w, ga);
      for (std::size_t i = 0; i < h.size(); ++i) {
        const MorphismId gu = cc.compose(g, h[i]);
        for (std::size_t j = i + 1; j < h.size(); ++j) {
          if (cc.compose(g, h[j]) != gu) continue;
          if (ctx.is_coequaliser(g, h[i], h[j])) return std::pair{h[i], h[j]};
        }
      }
    }
    return std::nullopt;
  };
  p.coequalised_pair = regular(*this, f);
  p.is_regular_epi = p.coequalised_pair.has_value();
  p.equalised_pair = regular(opposite(), f);
  p.is_regular_mono = p.equalised_pair.has_value();

  // extremal epi: every mono through which f factors is an iso
  p.is_extremal_epi = true;
  for (ObjectId m_obj : c.objects()) {
    for (MorphismId m : c.hom(m_obj, x)) {
      if (!is_mono(m) || is_iso(m)) continue;
      for (MorphismId i : c.hom(a, m_obj)) {
        if (c.compose(m, i) == f) {
          p.is_extremal_epi = false;
          break;
        }
      }
      if (!p.is_extremal_epi) break;
    }
    if (!p.is_extremal_epi) break;
  }
  slot = std::move(p);
  return *slot;
}

bool Analysis::in_class(MorphismId f, MorphismClass k) {
  switch (k) {
    case MorphismClass::mono: return is_mono(f);
    case MorphismClass::epi: return is_epi(f);
    case MorphismClass::iso: return is_iso(f);
    case MorphismClass::split_mono: return profile(f).is_split_mono;
    case MorphismClass::split_epi: return profile(f).is_split_epi;
    case MorphismClass::regular_epi: return profile(f).is_regular_epi;
    case MorphismClass::regular_mono: return profile(f).is_regular_mono;
    case MorphismClass::extremal_epi: return profile(f).is_extremal_epi;
    case MorphismClass::product_projection: return is_product_projection(f);
    case MorphismClass::coproduct_inclusion: return is_coproduct_inclusion(f);
    case MorphismClass::all: return true;
  }
  return false;
}

std::optional<ImageFactorisation> Analysis::image_factorisation(MorphismId f) {
  auto& slot = impl_->images[f.index()];
  if (slot) return *slot;
  const FinCategory& c = impl_->cat;
  const ObjectId a = c.dom(f), x = c.cod(f);
  std::optional<ImageFactorisation> found;
  for (ObjectId m_obj : c.objects()) {
    for (MorphismId m : c.hom(m_obj, x)) {
      if (!is_mono(m)) continue;
      for (MorphismId e : c.hom(a, m_obj)) {
        if (c.compose(m, e) != f) continue;
        if (profile(e).is_regular_epi) found = ImageFactorisation{e, m};
        break;  // m mono: e is unique
      }
      if (found) break;
    }
    if (found) break;
  }
  impl_->images[f.index()] = found;
  return found;
}

}  // namespace extmorph
