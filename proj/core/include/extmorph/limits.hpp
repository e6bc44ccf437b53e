#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/fincat.hpp"

namespace extmorph {

// Shapes of colimit problems. Limits are colimit problems in the opposite
// category, so the same base data describes both.
enum class Shape : std::uint8_t {
  discrete,  // objects = the family (empty: initial object)
  parallel,  // objects = {S, A}, arrows = {u, v}: S -> A
  corner,    // objects = {S, A, B}, arrows = {f: S -> A, g: S -> B}
};

struct DiagramBase {
  Shape shape = Shape::discrete;
  std::vector<ObjectId> objects;
  std::vector<MorphismId> arrows;

  // Vertices that receive a leg: all objects of a discrete family, A for a
  // parallel pair, A and B for a corner.
  [[nodiscard]] std::vector<ObjectId> vertices() const;
  friend bool operator==(const DiagramBase&, const DiagramBase&) = default;
};

// Constructors validate the base against the category in which the colimit is
// taken; they throw std::invalid_argument on malformed input.
DiagramBase discrete_base(std::vector<ObjectId> family);
DiagramBase parallel_base(const FinCategory& c, MorphismId u, MorphismId v);
DiagramBase corner_base(const FinCategory& c, MorphismId f, MorphismId g);

struct CospanDiagram {
  DiagramBase base;
  ObjectId nadir;
  std::vector<MorphismId> legs;  // one per vertex
  friend bool operator==(const CospanDiagram&, const CospanDiagram&) = default;
};

struct SpanDiagram {
  DiagramBase base;  // read in the opposite category
  ObjectId apex;
  std::vector<MorphismId> legs;
  friend bool operator==(const SpanDiagram&, const SpanDiagram&) = default;
};

inline SpanDiagram as_span(CospanDiagram d) { return {std::move(d.base), d.nadir, std::move(d.legs)}; }
inline CospanDiagram as_cospan(SpanDiagram d) { return {std::move(d.base), d.apex, std::move(d.legs)}; }

struct UniversalCounterexample {
  ObjectId target;
  std::vector<MorphismId> cocone;
  std::vector<MorphismId> mediators;  // empty or at least two
};

struct UniversalityResult {
  bool universal = false;
  std::optional<UniversalCounterexample> counterexample;
};

struct UniversalWitness {
  // competing (co)cone legs -> unique mediator
  std::vector<std::pair<std::vector<MorphismId>, MorphismId>> mediators;
};

// Throws std::invalid_argument when the cocone does not commute with its base.
UniversalityResult is_universal_cocone(const FinCategory& c, const CospanDiagram& d);
UniversalityResult is_universal_cone(const FinCategory& c, const SpanDiagram& d);
// Complete mediator table; requires a universal (co)cone.
UniversalWitness universal_witness(const FinCategory& c, const CospanDiagram& d);
UniversalWitness universal_witness(const FinCategory& c, const SpanDiagram& d);

// Deterministic search: nadir by object order, then legs in lexicographic order
// of their positions inside the hom-sets.
std::optional<CospanDiagram> colimit(const FinCategory& c, const DiagramBase& base);
std::optional<SpanDiagram> limit(const FinCategory& c, const DiagramBase& base_in_opposite);
// Every certified colimit of the base (all candidates, not just the first).
std::vector<CospanDiagram> all_colimits(const FinCategory& c, const DiagramBase& base);

std::optional<CospanDiagram> initial_object(const FinCategory& c);
std::optional<CospanDiagram> coproduct(const FinCategory& c, ObjectId a, ObjectId b);
std::optional<CospanDiagram> coequaliser(const FinCategory& c, MorphismId u, MorphismId v);
std::optional<CospanDiagram> pushout(const FinCategory& c, MorphismId f, MorphismId g);  // f, g share a domain

std::optional<SpanDiagram> terminal_object(const FinCategory& c);
std::optional<SpanDiagram> product(const FinCategory& c, ObjectId a, ObjectId b);
std::optional<SpanDiagram> equaliser(const FinCategory& c, MorphismId u, MorphismId v);
std::optional<SpanDiagram> pullback(const FinCategory& c, MorphismId f, MorphismId g);  // f, g share a codomain
std::optional<SpanDiagram> kernel_pair(const FinCategory& c, MorphismId f);

// The unique k with legs_i(k) matching the given cone, if any.
std::optional<MorphismId> mediator_into(const FinCategory& c, const SpanDiagram& limit_cone,
                                        ObjectId source, std::span<const MorphismId> cone);
std::optional<MorphismId> mediator_out_of(const FinCategory& c, const CospanDiagram& colimit_cocone,
                                          ObjectId target, std::span<const MorphismId> cocone);

// f1 x f2 between two certified binary products. Throws std::invalid_argument on
// uncertified input.
MorphismId product_of_morphisms(const FinCategory& c, MorphismId f1, MorphismId f2, const SpanDiagram& dom_product,
                                const SpanDiagram& cod_product);
MorphismId coproduct_of_morphisms(const FinCategory& c, MorphismId f1, MorphismId f2,
                                  const CospanDiagram& dom_coproduct, const CospanDiagram& cod_coproduct);

struct ImageFactorisation {
  MorphismId epi;   // regular epi part
  MorphismId mono;  // mono part
};
std::optional<ImageFactorisation> image_factorisation(const FinCategory& c, MorphismId f);

// Any two certified colimits of one base: the unique comparison iso commuting with legs.
std::optional<MorphismId> comparison_iso(const FinCategory& c, const CospanDiagram& a, const CospanDiagram& b);

nlohmann::json to_json(const FinCategory& c, const DiagramBase& base);
nlohmann::json to_json(const FinCategory& c, const CospanDiagram& d);
nlohmann::json to_json(const FinCategory& c, const SpanDiagram& d);

}  // namespace extmorph
