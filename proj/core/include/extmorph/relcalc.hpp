#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/algebra.hpp"
#include "extmorph/analysis.hpp"
#include "extmorph/extensivity.hpp"

namespace extmorph {

// One isomorphism class of monos into `ambient`.
struct SubobjectClass {
  ObjectId ambient;
  MorphismId representative;       // smallest member id
  std::vector<MorphismId> members;  // sorted
};

// Sub(x): all classes, ordered by representative, with m <= m' iff m = m' . k for some k.
class SubobjectPoset {
 public:
  SubobjectPoset() = default;
  SubobjectPoset(Analysis& a, ObjectId x);

  [[nodiscard]] ObjectId ambient() const { return ambient_; }
  [[nodiscard]] std::size_t size() const { return classes_.size(); }
  [[nodiscard]] const std::vector<SubobjectClass>& classes() const { return classes_; }
  [[nodiscard]] const SubobjectClass& operator[](std::size_t i) const { return classes_[i]; }
  [[nodiscard]] bool leq(std::size_t a, std::size_t b) const { return order_[a * classes_.size() + b] != 0; }
  // Class of a mono into the ambient object; nullopt for anything else.
  [[nodiscard]] std::optional<std::size_t> class_of(MorphismId m) const;
  [[nodiscard]] std::optional<std::size_t> top() const { return top_; }
  [[nodiscard]] std::optional<std::size_t> bottom() const;

 private:
  ObjectId ambient_;
  std::vector<SubobjectClass> classes_;
  std::vector<std::uint8_t> order_;
  std::map<std::uint32_t, std::size_t> lookup_;
  std::optional<std::size_t> top_;
};

// A relation from `from` to `to`: a subobject of the chosen product from x to.
struct Relation {
  ObjectId from;
  ObjectId to;
  std::size_t sub = 0;  // class in Sub(from x to)
  MorphismId mono;      // representative
  MorphismId first;     // r1 = p1 . mono
  MorphismId second;    // r2 = p2 . mono

  friend bool operator==(const Relation& a, const Relation& b) {
    return a.from == b.from && a.to == b.to && a.sub == b.sub;
  }
};

struct RelationFlags {
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
  bool equivalence = false;
  bool effective = false;
};
nlohmann::json to_json(const RelationFlags& f);

// Relation calculus inside a finite category. Products are the deterministic
// choices of Analysis::product, so all relations on x share one ambient x x x.
// Operations return nullopt when a (co)limit they need is missing.
class RelationCalculus {
 public:
  explicit RelationCalculus(Analysis& a) : a_(a) {}

  [[nodiscard]] Analysis& analysis() { return a_; }
  [[nodiscard]] const FinCategory& category() const { return a_.category(); }

  const SubobjectPoset& sub_poset(ObjectId x);
  // Classes in Sub(dom f) -> Sub(cod f) and back.
  std::optional<std::size_t> direct_image(MorphismId f, std::size_t a);
  std::optional<std::size_t> inverse_image(MorphismId f, std::size_t b);

  std::optional<SpanDiagram> ambient(ObjectId x, ObjectId y);
  // All relations from x to y, in class order; empty when x x y is missing.
  std::vector<Relation> relations(ObjectId x, ObjectId y);
  // The relation generated by a span: image of the pairing <r1, r2>.
  std::optional<Relation> from_span(ObjectId x, ObjectId y, MorphismId r1, MorphismId r2);
  std::optional<Relation> from_class(ObjectId x, ObjectId y, std::size_t sub);

  std::optional<Relation> delta(ObjectId x);
  std::optional<Relation> nabla(ObjectId x);
  std::optional<Relation> opposite(const Relation& r);
  // r from X to Y, then s from Y to Z: pullback over Y, then image in X x Z.
  std::optional<Relation> rel_compose(const Relation& r, const Relation& s);
  // Image of a relation on dom f along f x f, and preimage of one on cod f.
  std::optional<Relation> image(MorphismId f, const Relation& r);
  std::optional<Relation> preimage(MorphismId f, const Relation& r);
  // r on X1, s on X2, d a product diagram X1 <- X -> X2; a relation on X.
  std::optional<Relation> product_relation(const Relation& r, const Relation& s, const SpanDiagram& d);
  std::optional<Relation> eq_of(MorphismId f);

  // Same endpoints required.
  bool leq(const Relation& r, const Relation& s);
  // nullopt when R . R is missing.
  std::optional<RelationFlags> classify_relation(const Relation& r);

  nlohmann::json describe(const Relation& r) const;

 private:
  Analysis& a_;
  std::map<std::uint32_t, SubobjectPoset> subs_;
  std::map<std::uint32_t, std::vector<std::size_t>> effective_;
};

// Concrete relations between finite sets, as membership bitmasks.
struct SetRelation {
  int from = 0;
  int to = 0;
  std::uint64_t bits = 0;  // (x, y) at x * to + y

  [[nodiscard]] bool contains(int x, int y) const { return (bits >> (x * to + y)) & 1U; }
  friend bool operator==(const SetRelation&, const SetRelation&) = default;
};
nlohmann::json to_json(const SetRelation& r);

namespace set_relations {
constexpr int max_cells = 64;
SetRelation delta(int n);
SetRelation nabla(int n);
SetRelation opposite(const SetRelation& r);
SetRelation compose(const SetRelation& r, const SetRelation& s);  // r then s
SetRelation image(std::span<const int> f, int cod, const SetRelation& r);
SetRelation preimage(std::span<const int> f, const SetRelation& r);
SetRelation kernel(std::span<const int> f);
bool leq(const SetRelation& r, const SetRelation& s);
// On X with projection tables p1: X -> X1, p2: X -> X2.
SetRelation product(const SetRelation& r, const SetRelation& s, std::span<const int> p1, std::span<const int> p2);
bool reflexive(const SetRelation& r);
bool symmetric(const SetRelation& r);
bool transitive(const SetRelation& r);
}  // namespace set_relations

// Reads a categorical relation in a concrete set category as a set of pairs.
SetRelation to_set_relation(const BuiltCategory& b, RelationCalculus& rc, const Relation& r);

struct IdentityOptions {
  std::size_t sample_bound = 12'000'000;  // instances per identity before sampling kicks in
  std::uint64_t seed = 7;
  int max_relation_size = 9;              // concrete model: cells of X x Y
  std::size_t max_relations = 1024;       // categorical model: classes in Sub(X x Y)
};

struct IdentityResult {
  std::string id;
  CheckStatus status;
};

struct IdentitySuite {
  CheckStatus regularity;
  std::vector<IdentityResult> identities;
};

const std::vector<std::string>& identity_ids();

// Existence-relative regularity: kernel pairs that exist have coequalisers,
// every morphism has an image factorisation, regular epis are stable under
// the pullbacks that exist.
CheckStatus regularity_indicators(Analysis& a);

// Runs the listed identities (all when empty) in the categorical model.
IdentitySuite identity_suite(RelationCalculus& rc, const IdentityOptions& opt, std::span<const std::string> only = {});
// The same identities on finite sets: objects and maps come from a set builder,
// relations are subsets enumerated up to opt.max_relation_size cells.
IdentitySuite identity_suite(const BuiltCategory& sets, Analysis& a, const IdentityOptions& opt,
                             std::span<const std::string> only = {});

// Split monos coextensive <=> coextensive, under existence-relative regularity
// and effectiveness of every equivalence relation that can be formed.
CheckStatus barr_exact_check(RelationCalculus& rc);

}  // namespace extmorph
