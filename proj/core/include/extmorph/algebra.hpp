#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/fincat.hpp"

namespace extmorph {

enum class AlgebraKind { set, pointed_set, poset, connected_poset, semilattice, lattice, monoid };

std::string_view to_string(AlgebraKind k);
std::optional<AlgebraKind> parse_algebra_kind(std::string_view name);

struct OperationSymbol {
  std::string name;
  int arity = 0;
  friend bool operator==(const OperationSymbol&, const OperationSymbol&) = default;
};
using Signature = std::vector<OperationSymbol>;

// set: {}; pointed-set: {point/0}; posets: {} plus an order; semilattice: {join/2};
// lattice: {join/2, meet/2}; monoid: {unit/0, mul/2}.
Signature signature_of(AlgebraKind k);
bool is_relational(AlgebraKind k);  // posets carry an order instead of operations

// Carrier is 0..size-1. Operation tables are row-major over the arguments.
struct FinAlgebra {
  AlgebraKind kind = AlgebraKind::set;
  int size = 0;
  std::vector<std::vector<int>> ops;  // aligned with signature_of(kind)
  std::vector<std::uint8_t> order;    // size*size, posets only

  [[nodiscard]] int apply(std::size_t op, std::span<const int> args) const;
  [[nodiscard]] int binary(std::size_t op, int x, int y) const { return ops[op][static_cast<std::size_t>(x * size + y)]; }
  [[nodiscard]] int constant(std::size_t op) const { return ops[op][0]; }
  [[nodiscard]] bool leq(int x, int y) const { return order[static_cast<std::size_t>(x * size + y)] != 0; }
  friend bool operator==(const FinAlgebra&, const FinAlgebra&) = default;
};

using Homomorphism = std::vector<int>;

// Axioms of the kind (associativity, absorption, unit, poset laws, connectedness).
bool satisfies_axioms(const FinAlgebra& a);

// Structure-preserving maps in lexicographic order. Throws std::invalid_argument
// when the structure kinds differ.
std::vector<Homomorphism> enumerate_homs(const FinAlgebra& a, const FinAlgebra& b);
bool is_homomorphism(const FinAlgebra& a, const FinAlgebra& b, std::span<const int> h);

// Partition as block id per element, blocks numbered by first occurrence.
struct Congruence {
  std::vector<int> block;
  [[nodiscard]] bool related(int x, int y) const { return block[static_cast<std::size_t>(x)] == block[static_cast<std::size_t>(y)]; }
  [[nodiscard]] int block_count() const;
  friend bool operator==(const Congruence&, const Congruence&) = default;
  friend auto operator<=>(const Congruence&, const Congruence&) = default;
};

Congruence normalized(std::vector<int> labels);
Congruence diagonal_congruence(int n);
Congruence full_congruence(int n);
Congruence kernel_of(std::span<const int> h);
bool is_congruence(const FinAlgebra& a, const Congruence& t);
// Least congruence containing the pairs. Throws for relational kinds.
Congruence congruence_generate(const FinAlgebra& a, std::span<const std::pair<int, int>> pairs);
Congruence congruence_meet(const Congruence& s, const Congruence& t);
Congruence congruence_join(const FinAlgebra& a, const Congruence& s, const Congruence& t);
bool congruence_leq(const Congruence& s, const Congruence& t);
// All congruences; throws std::invalid_argument above max_carrier or for relational kinds.
std::vector<Congruence> congruence_lattice(const FinAlgebra& a, int max_carrier = 10);

struct Quotient {
  FinAlgebra algebra;
  std::vector<int> map;  // surjection a -> a/t
};
Quotient quotient(const FinAlgebra& a, const Congruence& t);

struct SurjectionPushout {
  Quotient by_q;              // A -> A/q
  Quotient by_p;              // A -> A/p
  FinAlgebra algebra;         // A/(q v p)
  std::vector<int> from_q;    // A/q -> A/(q v p)
  std::vector<int> from_p;    // A/p -> A/(q v p)
};
SurjectionPushout pushout_surjections(const Congruence& q_kernel, const Congruence& p_kernel, const FinAlgebra& a);

struct ProductAlgebra {
  FinAlgebra algebra;  // element (x, y) is x * b.size + y
  std::vector<int> first;
  std::vector<int> second;
};
ProductAlgebra product(const FinAlgebra& a, const FinAlgebra& b);

// Subsets closed under the operations (and connected for connected posets).
std::vector<std::vector<int>> subuniverses(const FinAlgebra& a);
FinAlgebra subalgebra(const FinAlgebra& a, std::span<const int> elements);

struct CanonicalForm {
  std::vector<int> code;
  std::vector<int> relabel;  // element -> canonical label
};
// Lexicographically least encoding over all carrier permutations.
CanonicalForm canonical_form(const FinAlgebra& a);
FinAlgebra relabelled(const FinAlgebra& a, std::span<const int> relabel);
FinAlgebra canonical(const FinAlgebra& a);

// Iso-class representatives (canonical) of the given size.
std::vector<FinAlgebra> enumerate_algebras(AlgebraKind k, int size);

FinAlgebra chain(AlgebraKind k, int n);  // lattice, semilattice or poset chain
FinAlgebra cyclic_group(int n);          // as a monoid
FinAlgebra transformation_monoid(int n); // all self-maps of n points under composition
std::vector<int> center_of_monoid(const FinAlgebra& m);

struct BuilderConfig {
  AlgebraKind kind = AlgebraKind::set;
  int max_carrier = 3;
  bool products = true;
  bool subalgebras = true;
  bool quotients = true;
  // Seed objects are all algebras up to this size (default: max_carrier); the
  // flags then close the seed set within max_carrier.
  std::optional<int> generators_max;
};

struct BuiltCategory {
  FinCategory category;
  std::vector<FinAlgebra> algebras;      // per object; empty for thin and one-object categories
  std::vector<std::vector<int>> tables;  // per morphism; empty for thin and one-object categories
  std::vector<std::string> overflow;     // constructions dropped by the budget

  [[nodiscard]] std::optional<ObjectId> find_object(const FinAlgebra& a) const;  // up to iso
  [[nodiscard]] std::optional<MorphismId> find_morphism(ObjectId dom, ObjectId cod, std::span<const int> table) const;
};

BuiltCategory build_category(const BuilderConfig& cfg);
// A poset as a thin category: objects are elements, one arrow x -> y iff x <= y.
BuiltCategory thin_category(const FinAlgebra& poset);
// A monoid as a one-object category.
BuiltCategory monoid_category(const FinAlgebra& monoid);

nlohmann::json to_json(const FinAlgebra& a, std::string_view name);
nlohmann::json algebras_to_json(AlgebraKind kind, std::span<const FinAlgebra> algebras,
                                std::span<const std::string> names);
// Throws std::invalid_argument on malformed documents or tables.
std::vector<std::pair<std::string, FinAlgebra>> algebras_from_json(const nlohmann::json& j, AlgebraKind kind);

}  // namespace extmorph
