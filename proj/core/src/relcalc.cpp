#include "extmorph/relcalc.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

namespace extmorph {

using nlohmann::json;

// ---------------------------------------------------------------- subobjects

SubobjectPoset::SubobjectPoset(Analysis& a, ObjectId x) : ambient_(x) {
  const FinCategory& c = a.category();
  std::vector<MorphismId> monos;
  for (ObjectId s : c.objects())
    for (MorphismId m : c.hom(s, x))
      if (a.is_mono(m)) monos.push_back(m);
  std::sort(monos.begin(), monos.end());

  auto factors = [&](MorphismId m, MorphismId n) {  // m = n . k
    for (MorphismId k : c.hom(c.dom(m), c.dom(n)))
      if (c.compose(n, k) == m) return true;
    return false;
  };

  std::vector<int> cls(monos.size(), -1);
  for (std::size_t i = 0; i < monos.size(); ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = static_cast<int>(classes_.size());
    SubobjectClass k{x, monos[i], {monos[i]}};
    for (std::size_t j = i + 1; j < monos.size(); ++j) {
      if (cls[j] < 0 && factors(monos[i], monos[j]) && factors(monos[j], monos[i])) {
        cls[j] = cls[i];
        k.members.push_back(monos[j]);
      }
    }
    classes_.push_back(std::move(k));
  }
  for (std::size_t i = 0; i < monos.size(); ++i) lookup_[monos[i].value] = static_cast<std::size_t>(cls[i]);

  const std::size_t n = classes_.size();
  order_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      order_[i * n + j] = i == j || factors(classes_[i].representative, classes_[j].representative) ? 1 : 0;
  top_ = class_of(c.identity(x));
}

std::optional<std::size_t> SubobjectPoset::class_of(MorphismId m) const {
  auto it = lookup_.find(m.value);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> SubobjectPoset::bottom() const {
  for (std::size_t i = 0; i < size(); ++i) {
    bool least = true;
    for (std::size_t j = 0; j < size() && least; ++j) least = leq(i, j);
    if (least) return i;
  }
  return std::nullopt;
}

json to_json(const RelationFlags& f) {
  return {{"reflexive", f.reflexive},     {"symmetric", f.symmetric}, {"transitive", f.transitive},
          {"equivalence", f.equivalence}, {"effective", f.effective}};
}

// ---------------------------------------------------------------- categorical calculus

const SubobjectPoset& RelationCalculus::sub_poset(ObjectId x) {
  auto it = subs_.find(x.value);
  if (it == subs_.end()) it = subs_.emplace(x.value, SubobjectPoset(a_, x)).first;
  return it->second;
}

std::optional<std::size_t> RelationCalculus::direct_image(MorphismId f, std::size_t sub) {
  const FinCategory& c = category();
  MorphismId m = sub_poset(c.dom(f))[sub].representative;
  auto img = a_.image_factorisation(c.compose(f, m));
  if (!img) return std::nullopt;
  return sub_poset(c.cod(f)).class_of(img->mono);
}

std::optional<std::size_t> RelationCalculus::inverse_image(MorphismId f, std::size_t sub) {
  const FinCategory& c = category();
  MorphismId m = sub_poset(c.cod(f))[sub].representative;
  auto pb = a_.pullback(f, m);
  if (!pb) return std::nullopt;
  return sub_poset(c.dom(f)).class_of(pb->legs[0]);
}

std::optional<SpanDiagram> RelationCalculus::ambient(ObjectId x, ObjectId y) { return a_.product(x, y); }

std::optional<Relation> RelationCalculus::from_class(ObjectId x, ObjectId y, std::size_t sub) {
  auto p = ambient(x, y);
  if (!p) return std::nullopt;
  const SubobjectPoset& s = sub_poset(p->apex);
  if (sub >= s.size()) throw std::invalid_argument("subobject class out of range");
  const FinCategory& c = category();
  MorphismId m = s[sub].representative;
  return Relation{x, y, sub, m, c.compose(p->legs[0], m), c.compose(p->legs[1], m)};
}

std::vector<Relation> RelationCalculus::relations(ObjectId x, ObjectId y) {
  std::vector<Relation> out;
  auto p = ambient(x, y);
  if (!p) return out;
  const std::size_t n = sub_poset(p->apex).size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(*from_class(x, y, i));
  return out;
}

std::optional<Relation> RelationCalculus::from_span(ObjectId x, ObjectId y, MorphismId r1, MorphismId r2) {
  const FinCategory& c = category();
  if (c.dom(r1) != c.dom(r2) || c.cod(r1) != x || c.cod(r2) != y) throw std::invalid_argument("span does not fit");
  auto p = ambient(x, y);
  if (!p) return std::nullopt;
  const std::array<MorphismId, 2> legs{r1, r2};
  auto pair = a_.mediator_into(*p, c.dom(r1), legs);
  if (!pair) return std::nullopt;
  auto img = a_.image_factorisation(*pair);
  if (!img) return std::nullopt;
  auto cls = sub_poset(p->apex).class_of(img->mono);
  if (!cls) return std::nullopt;
  return from_class(x, y, *cls);
}

std::optional<Relation> RelationCalculus::delta(ObjectId x) {
  MorphismId id = category().identity(x);
  return from_span(x, x, id, id);
}

std::optional<Relation> RelationCalculus::nabla(ObjectId x) {
  auto p = ambient(x, x);
  if (!p) return std::nullopt;
  return from_class(x, x, *sub_poset(p->apex).top());
}

std::optional<Relation> RelationCalculus::opposite(const Relation& r) {
  return from_span(r.to, r.from, r.second, r.first);
}

std::optional<Relation> RelationCalculus::rel_compose(const Relation& r, const Relation& s) {
  if (r.to != s.from) throw std::invalid_argument("relations are not composable");
  auto pb = a_.pullback(r.second, s.first);
  if (!pb) return std::nullopt;
  const FinCategory& c = category();
  return from_span(r.from, s.to, c.compose(r.first, pb->legs[0]), c.compose(s.second, pb->legs[1]));
}

std::optional<Relation> RelationCalculus::image(MorphismId f, const Relation& r) {
  const FinCategory& c = category();
  if (r.from != c.dom(f) || r.to != c.dom(f)) throw std::invalid_argument("relation is not on dom f");
  return from_span(c.cod(f), c.cod(f), c.compose(f, r.first), c.compose(f, r.second));
}

std::optional<Relation> RelationCalculus::preimage(MorphismId f, const Relation& r) {
  const FinCategory& c = category();
  const ObjectId x = c.dom(f);
  const ObjectId y = c.cod(f);
  if (r.from != y || r.to != y) throw std::invalid_argument("relation is not on cod f");
  auto pxx = ambient(x, x);
  auto pyy = ambient(y, y);
  if (!pxx || !pyy) return std::nullopt;
  const std::array<MorphismId, 2> legs{c.compose(f, pxx->legs[0]), c.compose(f, pxx->legs[1])};
  auto ff = a_.mediator_into(*pyy, pxx->apex, legs);
  if (!ff) return std::nullopt;
  auto pb = a_.pullback(*ff, r.mono);
  if (!pb) return std::nullopt;
  auto cls = sub_poset(pxx->apex).class_of(pb->legs[0]);
  if (!cls) return std::nullopt;
  return from_class(x, x, *cls);
}

std::optional<Relation> RelationCalculus::product_relation(const Relation& r, const Relation& s,
                                                           const SpanDiagram& d) {
  const FinCategory& c = category();
  if (d.legs.size() != 2 || c.cod(d.legs[0]) != r.from || c.cod(d.legs[1]) != s.from || r.from != r.to ||
      s.from != s.to)
    throw std::invalid_argument("relations do not match the product diagram");
  auto t = a_.product(c.dom(r.mono), c.dom(s.mono));
  if (!t) return std::nullopt;
  const std::array<MorphismId, 2> lower{c.compose(r.first, t->legs[0]), c.compose(s.first, t->legs[1])};
  const std::array<MorphismId, 2> upper{c.compose(r.second, t->legs[0]), c.compose(s.second, t->legs[1])};
  auto u = a_.mediator_into(d, t->apex, lower);
  auto v = a_.mediator_into(d, t->apex, upper);
  if (!u || !v) return std::nullopt;
  return from_span(d.apex, d.apex, *u, *v);
}

std::optional<Relation> RelationCalculus::eq_of(MorphismId f) {
  auto kp = a_.kernel_pair(f);
  if (!kp) return std::nullopt;
  const ObjectId x = category().dom(f);
  return from_span(x, x, kp->legs[0], kp->legs[1]);
}

bool RelationCalculus::leq(const Relation& r, const Relation& s) {
  if (r.from != s.from || r.to != s.to) throw std::invalid_argument("relations have different endpoints");
  return sub_poset(category().cod(r.mono)).leq(r.sub, s.sub);
}

std::optional<RelationFlags> RelationCalculus::classify_relation(const Relation& r) {
  if (r.from != r.to) throw std::invalid_argument("classify_relation needs a relation on one object");
  auto d = delta(r.from);
  auto op = opposite(r);
  auto rr = rel_compose(r, r);
  if (!d || !op || !rr) return std::nullopt;
  RelationFlags f;
  f.reflexive = leq(*d, r);
  f.symmetric = leq(*op, r);
  f.transitive = leq(*rr, r);
  f.equivalence = f.reflexive && f.symmetric && f.transitive;
  if (f.equivalence) {
    auto it = effective_.find(r.from.value);
    if (it == effective_.end()) {
      std::vector<std::size_t> kernels;
      const FinCategory& c = category();
      for (ObjectId y : c.objects())
        for (MorphismId g : c.hom(r.from, y))
          if (auto e = eq_of(g)) kernels.push_back(e->sub);
      std::sort(kernels.begin(), kernels.end());
      kernels.erase(std::unique(kernels.begin(), kernels.end()), kernels.end());
      it = effective_.emplace(r.from.value, std::move(kernels)).first;
    }
    f.effective = std::binary_search(it->second.begin(), it->second.end(), r.sub);
  }
  return f;
}

json RelationCalculus::describe(const Relation& r) const {
  const FinCategory& c = category();
  return {{"from", c.object_name(r.from)},
          {"to", c.object_name(r.to)},
          {"subobject", c.morphism_name(r.mono)},
          {"legs", {c.morphism_name(r.first), c.morphism_name(r.second)}}};
}

// ---------------------------------------------------------------- concrete relations

json to_json(const SetRelation& r) {
  json pairs = json::array();
  for (int x = 0; x < r.from; ++x)
    for (int y = 0; y < r.to; ++y)
      if (r.contains(x, y)) pairs.push_back({x, y});
  return {{"from", r.from}, {"to", r.to}, {"pairs", pairs}};
}

namespace set_relations {
namespace {
void require_fits(int n, int m) {
  if (n < 0 || m < 0 || n * m > max_cells) throw std::invalid_argument("set relation exceeds 64 cells");
}
std::uint64_t bit(int x, int y, int to) { return std::uint64_t{1} << (x * to + y); }
}  // namespace

SetRelation delta(int n) {
  require_fits(n, n);
  SetRelation r{n, n, 0};
  for (int x = 0; x < n; ++x) r.bits |= bit(x, x, n);
  return r;
}

SetRelation nabla(int n) {
  require_fits(n, n);
  const int cells = n * n;
  return {n, n, cells == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1};
}

SetRelation opposite(const SetRelation& r) {
  SetRelation o{r.to, r.from, 0};
  for (int x = 0; x < r.from; ++x)
    for (int y = 0; y < r.to; ++y)
      if (r.contains(x, y)) o.bits |= bit(y, x, r.from);
  return o;
}

SetRelation compose(const SetRelation& r, const SetRelation& s) {
  if (r.to != s.from) throw std::invalid_argument("relations are not composable");
  require_fits(r.from, s.to);
  SetRelation out{r.from, s.to, 0};
  for (int x = 0; x < r.from; ++x)
    for (int y = 0; y < r.to; ++y) {
      if (!r.contains(x, y)) continue;
      for (int z = 0; z < s.to; ++z)
        if (s.contains(y, z)) out.bits |= bit(x, z, s.to);
    }
  return out;
}

SetRelation image(std::span<const int> f, int cod, const SetRelation& r) {
  require_fits(cod, cod);
  SetRelation out{cod, cod, 0};
  for (int x = 0; x < r.from; ++x)
    for (int y = 0; y < r.to; ++y)
      if (r.contains(x, y)) out.bits |= bit(f[static_cast<std::size_t>(x)], f[static_cast<std::size_t>(y)], cod);
  return out;
}

SetRelation preimage(std::span<const int> f, const SetRelation& r) {
  const int n = static_cast<int>(f.size());
  require_fits(n, n);
  SetRelation out{n, n, 0};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (r.contains(f[static_cast<std::size_t>(x)], f[static_cast<std::size_t>(y)])) out.bits |= bit(x, y, n);
  return out;
}

SetRelation kernel(std::span<const int> f) {
  const int n = static_cast<int>(f.size());
  require_fits(n, n);
  SetRelation out{n, n, 0};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (f[static_cast<std::size_t>(x)] == f[static_cast<std::size_t>(y)]) out.bits |= bit(x, y, n);
  return out;
}

bool leq(const SetRelation& r, const SetRelation& s) {
  return r.from == s.from && r.to == s.to && (r.bits & ~s.bits) == 0;
}

SetRelation product(const SetRelation& r, const SetRelation& s, std::span<const int> p1, std::span<const int> p2) {
  const int n = static_cast<int>(p1.size());
  require_fits(n, n);
  SetRelation out{n, n, 0};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto ux = static_cast<std::size_t>(x);
      const auto uy = static_cast<std::size_t>(y);
      if (r.contains(p1[ux], p1[uy]) && s.contains(p2[ux], p2[uy])) out.bits |= bit(x, y, n);
    }
  return out;
}

bool reflexive(const SetRelation& r) { return leq(delta(r.from), r); }
bool symmetric(const SetRelation& r) { return opposite(r) == r; }
bool transitive(const SetRelation& r) { return leq(compose(r, r), r); }

}  // namespace set_relations

SetRelation to_set_relation(const BuiltCategory& b, RelationCalculus& rc, const Relation& r) {
  if (b.tables.empty()) throw std::invalid_argument("category has no concrete tables");
  const auto& t1 = b.tables[r.first.index()];
  const auto& t2 = b.tables[r.second.index()];
  SetRelation out{b.algebras[r.from.index()].size, b.algebras[r.to.index()].size, 0};
  if (out.from * out.to > set_relations::max_cells) throw std::invalid_argument("set relation exceeds 64 cells");
  (void)rc;
  for (std::size_t e = 0; e < t1.size(); ++e) out.bits |= std::uint64_t{1} << (t1[e] * out.to + t2[e]);
  return out;
}

// ---------------------------------------------------------------- regularity

CheckStatus regularity_indicators(Analysis& a) {
  const FinCategory& c = a.category();
  json stats{{"kernel_pairs", 0},          {"kernel_pairs_missing", 0}, {"image_factorisations", 0},
             {"stability_instances", 0},   {"pullbacks_missing", 0}};
  if (!a.terminal()) return CheckStatus::fail({{"indicator", "terminal object"}, {"reason", "missing"}}, stats);

  for (MorphismId f : c.morphisms()) {
    if (auto kp = a.kernel_pair(f)) {
      stats["kernel_pairs"] = stats["kernel_pairs"].get<int>() + 1;
      if (!a.coequaliser(kp->legs[0], kp->legs[1]))
        return CheckStatus::fail({{"indicator", "kernel pair has a coequaliser"}, {"morphism", c.morphism_name(f)}},
                                 stats);
    } else {
      stats["kernel_pairs_missing"] = stats["kernel_pairs_missing"].get<int>() + 1;
    }
    if (!a.image_factorisation(f))
      return CheckStatus::fail({{"indicator", "image factorisation"}, {"morphism", c.morphism_name(f)}}, stats);
    stats["image_factorisations"] = stats["image_factorisations"].get<int>() + 1;
  }

  int instances = 0;
  int missing = 0;
  for (MorphismId e : c.morphisms()) {
    if (!a.profile(e).is_regular_epi) continue;
    for (ObjectId w : c.objects())
      for (MorphismId g : c.hom(w, c.cod(e))) {
        auto pb = a.pullback(e, g);
        if (!pb) {
          ++missing;
          continue;
        }
        ++instances;
        if (!a.profile(pb->legs[1]).is_regular_epi) {
          stats["stability_instances"] = instances;
          stats["pullbacks_missing"] = missing;
          return CheckStatus::fail({{"indicator", "regular epis stable under pullback"},
                                    {"regular_epi", c.morphism_name(e)},
                                    {"along", c.morphism_name(g)},
                                    {"pulled_back", c.morphism_name(pb->legs[1])}},
                                   stats);
        }
      }
  }
  stats["stability_instances"] = instances;
  stats["pullbacks_missing"] = missing;
  return {Status::pass, json(), stats};
}

// ---------------------------------------------------------------- identity suite

namespace {

constexpr std::size_t witness_cap = 8;

class Tally {
 public:
  void skip(json why) {
    ++skipped_;
    if (skip_example_.is_null()) skip_example_ = std::move(why);
  }
  void check(bool ok, const std::function<json()>& witness) {
    ++checked_;
    if (ok) return;
    ++failed_;
    if (failures_.size() < witness_cap) failures_.push_back(witness());
  }
  void vacuous() { ++vacuous_; }
  void enumerated(std::size_t total, bool sampled) {
    total_ += total;
    sampled_ = sampled_ || sampled;
  }
  [[nodiscard]] json stats() const {
    json s{{"instances", checked_}, {"failed", failed_}, {"skipped", skipped_}, {"enumerated", total_},
           {"sampled", sampled_}};
    if (vacuous_ > 0) s["hypothesis_false"] = vacuous_;
    return s;
  }
  [[nodiscard]] CheckStatus result(const char* nothing) const {
    if (failed_ > 0) return CheckStatus::fail({{"failures", failures_}}, stats());
    if (checked_ == 0) {
      json w{{"reason", nothing}};
      if (!skip_example_.is_null()) w["example"] = skip_example_;
      return CheckStatus::inapplicable(w, stats());
    }
    return {Status::pass, json(), stats()};
  }
  [[nodiscard]] std::size_t failed() const { return failed_; }
  [[nodiscard]] std::size_t checked() const { return checked_; }

 private:
  std::size_t checked_ = 0;
  std::size_t failed_ = 0;
  std::size_t skipped_ = 0;
  std::size_t vacuous_ = 0;
  std::size_t total_ = 0;
  bool sampled_ = false;
  std::vector<json> failures_;
  json skip_example_;
};

// Visits every (block, offset) below the block sizes, or `bound` uniform draws.
template <class Fn>
void visit_blocks(const std::vector<std::size_t>& sizes, std::size_t bound, std::mt19937_64& rng, Tally& t, Fn&& fn) {
  std::vector<std::size_t> ends(sizes.size());
  std::partial_sum(sizes.begin(), sizes.end(), ends.begin());
  const std::size_t total = ends.empty() ? 0 : ends.back();
  auto at = [&](std::size_t i) {
    const auto b = static_cast<std::size_t>(std::upper_bound(ends.begin(), ends.end(), i) - ends.begin());
    fn(b, i - (b == 0 ? 0 : ends[b - 1]));
  };
  if (total <= bound) {
    t.enumerated(total, false);
    for (std::size_t i = 0; i < total; ++i) at(i);
    return;
  }
  t.enumerated(total, true);
  std::uniform_int_distribution<std::size_t> pick(0, total - 1);
  for (std::size_t n = 0; n < bound; ++n) at(pick(rng));
}

// Categorical model.
class CatBackend {
 public:
  using Rel = Relation;

  CatBackend(RelationCalculus& rc, const IdentityOptions& opt) : rc_(rc), opt_(opt) {}

  Analysis& analysis() { return rc_.analysis(); }
  const FinCategory& category() const { return rc_.category(); }

  const std::vector<Rel>* relations(ObjectId x, ObjectId y) {
    auto key = std::make_pair(x.value, y.value);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::optional<std::vector<Rel>> rels;
      if (auto p = rc_.ambient(x, y); p && rc_.sub_poset(p->apex).size() <= opt_.max_relations)
        rels = rc_.relations(x, y);
      it = cache_.emplace(key, std::move(rels)).first;
    }
    return it->second ? &*it->second : nullptr;
  }
  std::optional<Rel> delta(ObjectId x) { return rc_.delta(x); }
  std::optional<Rel> nabla(ObjectId x) { return rc_.nabla(x); }
  std::optional<Rel> opposite(const Rel& r) { return rc_.opposite(r); }
  std::optional<Rel> compose(const Rel& r, const Rel& s) {
    auto key = std::array<std::uint64_t, 3>{std::uint64_t{r.from.value} << 32 | r.to.value,
                                            std::uint64_t{s.to.value} << 32 | r.sub, s.sub};
    auto it = compose_cache_.find(key);
    if (it == compose_cache_.end()) it = compose_cache_.emplace(key, rc_.rel_compose(r, s)).first;
    return it->second;
  }
  std::optional<Rel> image(MorphismId f, const Rel& r) { return rc_.image(f, r); }
  std::optional<Rel> preimage(MorphismId f, const Rel& r) { return rc_.preimage(f, r); }
  std::optional<Rel> eq(MorphismId f) { return rc_.eq_of(f); }
  std::optional<Rel> product(const Rel& r, const Rel& s, const SpanDiagram& d) {
    return rc_.product_relation(r, s, d);
  }
  bool leq(const Rel& r, const Rel& s) { return rc_.leq(r, s); }
  bool regular_epi(MorphismId f) { return analysis().profile(f).is_regular_epi; }
  json describe(const Rel& r) const { return rc_.describe(r); }
  bool square_exists(ObjectId x) { return relations(x, x) != nullptr; }

 private:
  RelationCalculus& rc_;
  const IdentityOptions& opt_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::optional<std::vector<Rel>>> cache_;
  std::map<std::array<std::uint64_t, 3>, std::optional<Rel>> compose_cache_;
};

// Concrete model over a set builder: objects and maps from the builder, every
// subset of X x Y as a relation.
class SetBackend {
 public:
  using Rel = SetRelation;

  SetBackend(const BuiltCategory& b, Analysis& a, const IdentityOptions& opt) : b_(b), a_(a), opt_(opt) {
    if (b.tables.size() != b.category.morphism_count() || b.algebras.empty())
      throw std::invalid_argument("concrete relation model needs a builder category with tables");
    for (const auto& alg : b.algebras)
      if (alg.kind != AlgebraKind::set) throw std::invalid_argument("concrete relation model needs plain sets");
  }

  Analysis& analysis() { return a_; }
  const FinCategory& category() const { return b_.category; }

  const std::vector<Rel>* relations(ObjectId x, ObjectId y) {
    const int n = size(x);
    const int m = size(y);
    const int cap = std::min({opt_.max_relation_size, set_relations::max_cells, 24});
    if (n * m > cap) return nullptr;
    auto key = std::make_pair(n, m);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::vector<Rel> all;
      const std::uint64_t count = std::uint64_t{1} << (n * m);
      all.reserve(count);
      for (std::uint64_t bits = 0; bits < count; ++bits) all.push_back({n, m, bits});
      it = cache_.emplace(key, std::move(all)).first;
    }
    return &it->second;
  }
  std::optional<Rel> delta(ObjectId x) { return set_relations::delta(size(x)); }
  std::optional<Rel> nabla(ObjectId x) { return set_relations::nabla(size(x)); }
  std::optional<Rel> opposite(const Rel& r) { return set_relations::opposite(r); }
  std::optional<Rel> compose(const Rel& r, const Rel& s) { return set_relations::compose(r, s); }
  std::optional<Rel> image(MorphismId f, const Rel& r) {
    return set_relations::image(table(f), size(b_.category.cod(f)), r);
  }
  std::optional<Rel> preimage(MorphismId f, const Rel& r) { return set_relations::preimage(table(f), r); }
  std::optional<Rel> eq(MorphismId f) { return set_relations::kernel(table(f)); }
  std::optional<Rel> product(const Rel& r, const Rel& s, const SpanDiagram& d) {
    if (size(d.apex) * size(d.apex) > set_relations::max_cells) return std::nullopt;
    return set_relations::product(r, s, table(d.legs[0]), table(d.legs[1]));
  }
  bool leq(const Rel& r, const Rel& s) { return set_relations::leq(r, s); }
  bool regular_epi(MorphismId f) {
    std::vector<bool> hit(static_cast<std::size_t>(size(b_.category.cod(f))), false);
    for (int v : table(f)) hit[static_cast<std::size_t>(v)] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
  }
  json describe(const Rel& r) const { return to_json(r); }
  bool square_exists(ObjectId x) { return relations(x, x) != nullptr; }

 private:
  int size(ObjectId x) const { return b_.algebras[x.index()].size; }
  std::span<const int> table(MorphismId f) const { return b_.tables[f.index()]; }

  const BuiltCategory& b_;
  Analysis& a_;
  const IdentityOptions& opt_;
  std::map<std::pair<int, int>, std::vector<Rel>> cache_;
};

template <class B>
class Suite {
 public:
  using Rel = typename B::Rel;

  Suite(B& b, const IdentityOptions& opt) : b_(b), opt_(opt), rng_(opt.seed) {}

  CheckStatus run(const std::string& id) {
    if (id == "delta-unit") return delta_unit();
    if (id == "nabla-absorb") return nabla_absorb();
    if (id == "img-lax-functorial") return img_lax();
    if (id == "prod-interchange") return prod_interchange();
    if (id == "transitive-idempotent") return transitive_idempotent();
    if (id == "img-preimg") return img_preimg();
    if (id == "preimg-img") return preimg_img();
    if (id == "img-of-preimg-comp") return img_of_preimg_comp();
    if (id == "lemma-eq-under-regepi") return lemma_eq_under_regepi();
    if (id == "lemma-reflexive-splits") return lemma_reflexive_splits();
    throw std::invalid_argument("unknown identity id: " + id);
  }

 private:
  const FinCategory& cat() const { return b_.category(); }
  std::string oname(ObjectId x) const { return cat().object_name(x); }
  std::string mname(MorphismId f) const { return cat().morphism_name(f); }

  bool same(const Rel& r, const Rel& s) { return r == s; }

  std::optional<bool> reflexive(ObjectId x, const Rel& r) {
    auto d = b_.delta(x);
    if (!d) return std::nullopt;
    return b_.leq(*d, r);
  }

  std::optional<bool> equivalence(ObjectId x, const Rel& r) {
    auto refl = reflexive(x, r);
    auto op = b_.opposite(r);
    auto rr = b_.compose(r, r);
    if (!refl || !op || !rr) return std::nullopt;
    return *refl && b_.leq(*op, r) && b_.leq(*rr, r);
  }

  const std::vector<Rel>& reflexive_on(ObjectId x) {
    auto it = reflexive_.find(x.value);
    if (it == reflexive_.end()) {
      std::vector<Rel> out;
      if (const auto* rels = b_.relations(x, x))
        for (const Rel& r : *rels)
          if (reflexive(x, r).value_or(false)) out.push_back(r);
      it = reflexive_.emplace(x.value, std::move(out)).first;
    }
    return it->second;
  }

  std::vector<MorphismId> regular_epis() {
    std::vector<MorphismId> out;
    for (MorphismId f : cat().morphisms())
      if (b_.regular_epi(f)) out.push_back(f);
    return out;
  }

  json missing(ObjectId x) { return {{"object", oname(x)}, {"reason", "relations on this object are not available"}}; }

  CheckStatus delta_unit() {
    Tally t;
    std::vector<std::pair<ObjectId, ObjectId>> pairs;
    std::vector<std::size_t> sizes;
    for (ObjectId x : cat().objects())
      for (ObjectId y : cat().objects()) {
        const auto* rels = b_.relations(x, y);
        if (!rels || !b_.delta(x) || !b_.delta(y)) {
          t.skip({{"from", oname(x)}, {"to", oname(y)}});
          continue;
        }
        pairs.emplace_back(x, y);
        sizes.push_back(rels->size());
      }
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      auto [x, y] = pairs[blk];
      const Rel& r = (*b_.relations(x, y))[off];
      auto after = b_.compose(r, *b_.delta(y));
      auto before = b_.compose(*b_.delta(x), r);
      if (!after || !before) return t.skip({{"relation", b_.describe(r)}, {"reason", "composite missing"}});
      t.check(same(*after, r) && same(*before, r), [&] {
        return json{{"relation", b_.describe(r)}, {"delta_after", b_.describe(*after)},
                    {"delta_before", b_.describe(*before)}};
      });
    });
    return t.result("no relations available");
  }

  CheckStatus nabla_absorb() {
    Tally t;
    std::vector<ObjectId> objs;
    std::vector<std::size_t> sizes;
    for (ObjectId x : cat().objects()) {
      if (!b_.square_exists(x) || !b_.nabla(x)) {
        t.skip(missing(x));
        continue;
      }
      objs.push_back(x);
      sizes.push_back(reflexive_on(x).size());
    }
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const ObjectId x = objs[blk];
      const Rel& r = reflexive_on(x)[off];
      const Rel n = *b_.nabla(x);
      auto left = b_.compose(r, n);
      auto right = b_.compose(n, r);
      if (!left || !right) return t.skip({{"relation", b_.describe(r)}, {"reason", "composite missing"}});
      t.check(same(*left, n) && same(*right, n), [&] {
        return json{{"relation", b_.describe(r)}, {"nabla_after", b_.describe(*left)},
                    {"nabla_before", b_.describe(*right)}};
      });
    });
    return t.result("no reflexive relations available");
  }

  CheckStatus img_lax() {
    Tally t;
    std::vector<MorphismId> maps;
    std::vector<std::size_t> sizes;
    for (MorphismId f : cat().morphisms()) {
      const ObjectId x = cat().dom(f);
      const auto* rels = b_.relations(x, x);
      if (!rels || !b_.square_exists(cat().cod(f))) {
        t.skip({{"morphism", mname(f)}, {"reason", "relations on its domain or codomain are not available"}});
        continue;
      }
      maps.push_back(f);
      sizes.push_back(rels->size() * rels->size());
    }
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const MorphismId f = maps[blk];
      const auto& rels = *b_.relations(cat().dom(f), cat().dom(f));
      const Rel& r = rels[off / rels.size()];
      const Rel& s = rels[off % rels.size()];
      auto rs = b_.compose(r, s);
      auto fr = b_.image(f, r);
      auto fs = b_.image(f, s);
      if (!rs || !fr || !fs) return t.skip({{"morphism", mname(f)}, {"reason", "composite or image missing"}});
      auto lhs = b_.image(f, *rs);
      auto rhs = b_.compose(*fr, *fs);
      if (!lhs || !rhs) return t.skip({{"morphism", mname(f)}, {"reason", "composite or image missing"}});
      t.check(b_.leq(*lhs, *rhs), [&] {
        return json{{"morphism", mname(f)}, {"R", b_.describe(r)}, {"S", b_.describe(s)},
                    {"image_of_composite", b_.describe(*lhs)}, {"composite_of_images", b_.describe(*rhs)}};
      });
    });
    return t.result("no morphism with relations on both ends");
  }

  CheckStatus prod_interchange() {
    Tally t;
    std::vector<SpanDiagram> decs;
    std::vector<std::size_t> sizes;
    for (ObjectId x : cat().objects())
      for (const SpanDiagram& d : b_.analysis().product_decompositions(x, 2)) {
        const ObjectId x1 = cat().cod(d.legs[0]);
        const ObjectId x2 = cat().cod(d.legs[1]);
        const auto* r1 = b_.relations(x1, x1);
        const auto* r2 = b_.relations(x2, x2);
        if (!r1 || !r2 || !b_.square_exists(x)) {
          t.skip({{"object", oname(x)}, {"legs", {mname(d.legs[0]), mname(d.legs[1])}}});
          continue;
        }
        decs.push_back(d);
        sizes.push_back(r1->size() * r1->size() * r2->size() * r2->size());
      }
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const SpanDiagram& d = decs[blk];
      const auto& r1 = *b_.relations(cat().cod(d.legs[0]), cat().cod(d.legs[0]));
      const auto& r2 = *b_.relations(cat().cod(d.legs[1]), cat().cod(d.legs[1]));
      const Rel& s2 = r2[off % r2.size()];
      off /= r2.size();
      const Rel& s1 = r2[off % r2.size()];
      off /= r2.size();
      const Rel& q2 = r1[off % r1.size()];
      const Rel& q1 = r1[off / r1.size()];
      auto skip = [&] { t.skip({{"legs", {mname(d.legs[0]), mname(d.legs[1])}}, {"reason", "construction missing"}}); };
      auto qq = b_.compose(q1, q2);
      auto ss = b_.compose(s1, s2);
      auto p1 = b_.product(q1, s1, d);
      auto p2 = b_.product(q2, s2, d);
      if (!qq || !ss || !p1 || !p2) return skip();
      auto lhs = b_.product(*qq, *ss, d);
      auto rhs = b_.compose(*p1, *p2);
      if (!lhs || !rhs) return skip();
      t.check(same(*lhs, *rhs), [&] {
        return json{{"legs", {mname(d.legs[0]), mname(d.legs[1])}},
                    {"R", b_.describe(q1)},
                    {"R'", b_.describe(q2)},
                    {"S", b_.describe(s1)},
                    {"S'", b_.describe(s2)},
                    {"product_of_composites", b_.describe(*lhs)},
                    {"composite_of_products", b_.describe(*rhs)}};
      });
    });
    return t.result("no product diagram with relations on its factors");
  }

  CheckStatus transitive_idempotent() {
    Tally t;
    std::vector<ObjectId> objs;
    std::vector<std::size_t> sizes;
    for (ObjectId x : cat().objects()) {
      if (!b_.square_exists(x)) {
        t.skip(missing(x));
        continue;
      }
      objs.push_back(x);
      sizes.push_back(reflexive_on(x).size());
    }
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const Rel& r = reflexive_on(objs[blk])[off];
      auto rr = b_.compose(r, r);
      if (!rr) return t.skip({{"relation", b_.describe(r)}, {"reason", "composite missing"}});
      const bool transitive = b_.leq(*rr, r);
      const bool idempotent = same(*rr, r);
      t.check(transitive == idempotent, [&] {
        return json{{"relation", b_.describe(r)}, {"square", b_.describe(*rr)}, {"transitive", transitive}};
      });
    });
    return t.result("no reflexive relations available");
  }

  // Regular epis f: X -> Y with relations on X and Y, and the relation count on `side`.
  std::vector<MorphismId> epis_with_relations(Tally& t, std::vector<std::size_t>& sizes, bool on_domain, int power) {
    std::vector<MorphismId> out;
    for (MorphismId f : regular_epis()) {
      const ObjectId x = cat().dom(f);
      const ObjectId y = cat().cod(f);
      if (!b_.square_exists(x) || !b_.square_exists(y)) {
        t.skip({{"morphism", mname(f)}, {"reason", "relations on its domain or codomain are not available"}});
        continue;
      }
      const ObjectId side = on_domain ? x : y;
      std::size_t n = b_.relations(side, side)->size();
      std::size_t total = 1;
      for (int i = 0; i < power; ++i) total *= n;
      out.push_back(f);
      sizes.push_back(total);
    }
    return out;
  }

  CheckStatus img_preimg() {
    Tally t;
    std::vector<std::size_t> sizes;
    auto epis = epis_with_relations(t, sizes, false, 1);
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const MorphismId f = epis[blk];
      const Rel& r = (*b_.relations(cat().cod(f), cat().cod(f)))[off];
      auto pre = b_.preimage(f, r);
      auto back = pre ? b_.image(f, *pre) : std::nullopt;
      if (!back) return t.skip({{"morphism", mname(f)}, {"reason", "image or preimage missing"}});
      t.check(same(*back, r), [&] {
        return json{{"morphism", mname(f)}, {"R", b_.describe(r)}, {"image_of_preimage", b_.describe(*back)}};
      });
    });
    return t.result("no regular epi with relations on both ends");
  }

  CheckStatus preimg_img() {
    Tally t;
    std::vector<std::size_t> sizes;
    auto epis = epis_with_relations(t, sizes, true, 1);
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const MorphismId f = epis[blk];
      const Rel& r = (*b_.relations(cat().dom(f), cat().dom(f)))[off];
      auto skip = [&] { t.skip({{"morphism", mname(f)}, {"reason", "construction missing"}}); };
      auto img = b_.image(f, r);
      auto back = img ? b_.preimage(f, *img) : std::nullopt;
      auto e = b_.eq(f);
      if (!back || !e) return skip();
      auto er = b_.compose(*e, r);
      auto ere = er ? b_.compose(*er, *e) : std::nullopt;
      if (!ere) return skip();
      t.check(same(*back, *ere), [&] {
        return json{{"morphism", mname(f)}, {"R", b_.describe(r)}, {"preimage_of_image", b_.describe(*back)},
                    {"kernel_sandwich", b_.describe(*ere)}};
      });
    });
    return t.result("no regular epi with relations on both ends");
  }

  CheckStatus img_of_preimg_comp() {
    Tally t;
    std::vector<std::size_t> sizes;
    auto epis = epis_with_relations(t, sizes, false, 2);
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const MorphismId f = epis[blk];
      const auto& rels = *b_.relations(cat().cod(f), cat().cod(f));
      const Rel& r = rels[off / rels.size()];
      const Rel& s = rels[off % rels.size()];
      auto skip = [&] { t.skip({{"morphism", mname(f)}, {"reason", "construction missing"}}); };
      auto pr = b_.preimage(f, r);
      auto ps = b_.preimage(f, s);
      auto rs = b_.compose(r, s);
      if (!pr || !ps || !rs) return skip();
      auto mid = b_.compose(*pr, *ps);
      auto lhs = mid ? b_.image(f, *mid) : std::nullopt;
      if (!lhs) return skip();
      t.check(same(*lhs, *rs), [&] {
        return json{{"morphism", mname(f)}, {"R", b_.describe(r)}, {"S", b_.describe(s)},
                    {"image_of_preimage_composite", b_.describe(*lhs)}, {"composite", b_.describe(*rs)}};
      });
    });
    return t.result("no regular epi with relations on both ends");
  }

  // Product diagrams of x whose factors carry relations.
  std::vector<SpanDiagram> decompositions_with_relations(Tally& t, bool regular_projections) {
    std::vector<SpanDiagram> out;
    for (ObjectId x : cat().objects()) {
      if (!b_.square_exists(x)) continue;
      for (const SpanDiagram& d : b_.analysis().product_decompositions(x, 2)) {
        if (regular_projections && !(b_.regular_epi(d.legs[0]) && b_.regular_epi(d.legs[1]))) {
          t.vacuous();
          continue;
        }
        const ObjectId x1 = cat().cod(d.legs[0]);
        const ObjectId x2 = cat().cod(d.legs[1]);
        if (!b_.square_exists(x1) || !b_.square_exists(x2)) {
          t.skip({{"object", oname(x)}, {"legs", {mname(d.legs[0]), mname(d.legs[1])}}});
          continue;
        }
        out.push_back(d);
      }
    }
    return out;
  }

  CheckStatus lemma_eq_under_regepi() {
    Tally t;
    auto decs = decompositions_with_relations(t, true);
    std::vector<std::size_t> sizes;
    for (const SpanDiagram& d : decs) sizes.push_back(b_.relations(d.apex, d.apex)->size());
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const SpanDiagram& d = decs[blk];
      const Rel& e = (*b_.relations(d.apex, d.apex))[off];
      auto skip = [&] { t.skip({{"legs", {mname(d.legs[0]), mname(d.legs[1])}}, {"reason", "construction missing"}}); };
      auto eqv = equivalence(d.apex, e);
      if (!eqv) return skip();
      if (!*eqv) return t.vacuous();
      auto e1 = b_.image(d.legs[0], e);
      auto e2 = b_.image(d.legs[1], e);
      if (!e1 || !e2) return skip();
      auto split = b_.product(*e1, *e2, d);
      if (!split) return skip();
      if (!same(*split, e)) return t.vacuous();
      auto q1 = equivalence(cat().cod(d.legs[0]), *e1);
      auto q2 = equivalence(cat().cod(d.legs[1]), *e2);
      if (!q1 || !q2) return skip();
      t.check(*q1 && *q2, [&] {
        return json{{"legs", {mname(d.legs[0]), mname(d.legs[1])}}, {"E", b_.describe(e)},
                    {"first_image", b_.describe(*e1)}, {"second_image", b_.describe(*e2)},
                    {"first_is_equivalence", *q1}, {"second_is_equivalence", *q2}};
      });
    });
    return t.result("no equivalence relation splits along a product with regular epi projections");
  }

  CheckStatus lemma_reflexive_splits() {
    Tally t;
    auto decs = decompositions_with_relations(t, false);
    std::vector<std::size_t> sizes;
    for (const SpanDiagram& d : decs) sizes.push_back(reflexive_on(d.apex).size());
    visit_blocks(sizes, opt_.sample_bound, rng_, t, [&](std::size_t blk, std::size_t off) {
      const SpanDiagram& d = decs[blk];
      const Rel& r = reflexive_on(d.apex)[off];
      auto r1 = b_.image(d.legs[0], r);
      auto r2 = b_.image(d.legs[1], r);
      auto split = r1 && r2 ? b_.product(*r1, *r2, d) : std::nullopt;
      if (!split)
        return t.skip({{"legs", {mname(d.legs[0]), mname(d.legs[1])}}, {"reason", "construction missing"}});
      t.check(same(*split, r), [&] {
        return json{{"legs", {mname(d.legs[0]), mname(d.legs[1])}}, {"R", b_.describe(r)},
                    {"product_of_images", b_.describe(*split)}};
      });
    });
    CheckStatus conclusion = t.result("no reflexive relation on a product");
    const CheckStatus hyp = category_report(b_.analysis(), ReportMode::coextensive, MorphismClass::split_mono).verdict;
    if (hyp.passed()) return conclusion;
    // The conclusion is still computed, for the record.
    json stats = t.stats();
    stats["conclusion"] = to_json(conclusion);
    return CheckStatus::inapplicable(
        {{"hypothesis", "split monomorphisms coextensive"}, {"hypothesis_witness", hyp.witness}}, stats);
  }

  B& b_;
  const IdentityOptions& opt_;
  std::mt19937_64 rng_;
  std::map<std::uint32_t, std::vector<Rel>> reflexive_;
};

template <class B>
IdentitySuite run_suite(B& backend, Analysis& a, const IdentityOptions& opt, std::span<const std::string> only) {
  IdentitySuite out{regularity_indicators(a), {}};
  Suite<B> suite(backend, opt);
  std::vector<std::string> ids(only.begin(), only.end());
  if (ids.empty()) ids = identity_ids();
  for (const auto& id : ids) out.identities.push_back({id, suite.run(id)});
  return out;
}

}  // namespace

const std::vector<std::string>& identity_ids() {
  static const std::vector<std::string> ids{
      "delta-unit", "nabla-absorb", "img-lax-functorial", "prod-interchange", "transitive-idempotent",
      "img-preimg", "preimg-img",   "img-of-preimg-comp", "lemma-eq-under-regepi", "lemma-reflexive-splits"};
  return ids;
}

IdentitySuite identity_suite(RelationCalculus& rc, const IdentityOptions& opt, std::span<const std::string> only) {
  CatBackend backend(rc, opt);
  return run_suite(backend, rc.analysis(), opt, only);
}

IdentitySuite identity_suite(const BuiltCategory& sets, Analysis& a, const IdentityOptions& opt,
                             std::span<const std::string> only) {
  SetBackend backend(sets, a, opt);
  return run_suite(backend, a, opt, only);
}

// ---------------------------------------------------------------- Barr-exact biconditional

CheckStatus barr_exact_check(RelationCalculus& rc) {
  Analysis& a = rc.analysis();
  const FinCategory& c = a.category();
  const CheckStatus split = category_report(a, ReportMode::coextensive, MorphismClass::split_mono).verdict;
  const CheckStatus full = category_report(a, ReportMode::coextensive).verdict;
  const CheckStatus regular = regularity_indicators(a);

  json stats{{"regularity", to_json(regular)},
             {"split_monos_coextensive", to_json(split)},
             {"coextensive", to_json(full)}};
  if (!regular.passed())
    return CheckStatus::inapplicable({{"hypothesis", "regular"}, {"hypothesis_witness", regular.witness}}, stats);

  int equivalences = 0;
  json without_square = json::array();
  for (ObjectId x : c.objects()) {
    if (!rc.ambient(x, x)) {
      without_square.push_back(c.object_name(x));
      continue;
    }
    for (const Relation& r : rc.relations(x, x)) {
      auto flags = rc.classify_relation(r);
      if (!flags || !flags->equivalence) continue;
      ++equivalences;
      if (!flags->effective)
        return CheckStatus::inapplicable(
            {{"hypothesis", "equivalence relations effective"}, {"relation", rc.describe(r)}}, stats);
    }
  }
  stats["equivalence_relations"] = equivalences;
  stats["objects_without_square"] = without_square;

  if (split.status == Status::inapplicable || full.status == Status::inapplicable)
    return CheckStatus::inapplicable({{"reason", "coextensivity could not be decided"}}, stats);
  if (split.status == full.status) return {Status::pass, json(), stats};
  return CheckStatus::fail({{"split_monos_coextensive", to_string(split.status)},
                            {"coextensive", to_string(full.status)},
                            {"counterexample", split.passed() ? full.witness : split.witness}},
                           stats);
}

}  // namespace extmorph
