#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "extmorph/classify.hpp"
#include "extmorph/fincat.hpp"
#include "extmorph/limits.hpp"

namespace extmorph {

// Memoising context for one category. Not thread-safe; use one per thread.
// Every answer is a pure function of the category, so the memo never changes
// results, only their cost.
class Analysis {
 public:
  explicit Analysis(FinCategory c);
  ~Analysis();
  Analysis(const Analysis&) = delete;
  Analysis& operator=(const Analysis&) = delete;

  [[nodiscard]] const FinCategory& category() const;
  // Context for the opposite category, created on first use and owned by this one.
  Analysis& opposite();

  bool is_mono(MorphismId f);
  bool is_epi(MorphismId f);
  bool is_iso(MorphismId f);
  std::optional<MorphismId> inverse(MorphismId f);
  const MorphismProfile& profile(MorphismId f);
  bool in_class(MorphismId f, MorphismClass k);

  // Automorphism group of an object (identity first).
  std::span<const MorphismId> automorphisms(ObjectId a);
  // Smallest member of { f . s : s automorphism of dom f } by hom-set position.
  MorphismId orbit_rep(MorphismId f);

  bool is_universal(const CospanDiagram& d);
  bool is_universal(const SpanDiagram& d);
  bool is_coproduct(std::span<const MorphismId> injections);
  bool is_product(std::span<const MorphismId> projections);
  bool is_coproduct(MorphismId i1, MorphismId i2);
  bool is_product(MorphismId p1, MorphismId p2);
  // f . p1 = g . p2 is a pullback square.
  bool is_pullback_square(MorphismId p1, MorphismId p2, MorphismId f, MorphismId g);
  // p1 . f = p2 . g is a pushout square.
  bool is_pushout_square(MorphismId p1, MorphismId p2, MorphismId f, MorphismId g);
  bool is_coequaliser(MorphismId q, MorphismId u, MorphismId v);
  bool is_equaliser(MorphismId e, MorphismId u, MorphismId v);

  std::optional<CospanDiagram> colimit(const DiagramBase& base);
  std::optional<SpanDiagram> limit(const DiagramBase& base_in_opposite);
  std::optional<CospanDiagram> initial();
  std::optional<SpanDiagram> terminal();
  std::optional<CospanDiagram> coproduct(ObjectId a, ObjectId b);
  std::optional<SpanDiagram> product(ObjectId a, ObjectId b);
  std::optional<CospanDiagram> pushout(MorphismId f, MorphismId g);
  std::optional<SpanDiagram> pullback(MorphismId f, MorphismId g);
  std::optional<CospanDiagram> coequaliser(MorphismId u, MorphismId v);
  std::optional<SpanDiagram> equaliser(MorphismId u, MorphismId v);
  std::optional<SpanDiagram> kernel_pair(MorphismId f);

  // All coproduct diagrams on x of the given arity, one per orbit of the
  // automorphism groups of the summands acting on the injections.
  const std::vector<CospanDiagram>& coproduct_decompositions(ObjectId x, std::size_t arity = 2);
  const std::vector<SpanDiagram>& product_decompositions(ObjectId x, std::size_t arity = 2);
  bool is_coproduct_inclusion(MorphismId f);
  bool is_product_projection(MorphismId f);

  bool has_initial();
  bool has_terminal();
  bool has_binary_coproducts();
  bool has_binary_products();
  bool has_pullbacks();
  bool has_equalisers();
  bool has_kernel_pairs();

  std::optional<ImageFactorisation> image_factorisation(MorphismId f);

  std::optional<MorphismId> mediator_into(const SpanDiagram& cone, ObjectId source, std::span<const MorphismId> legs);
  std::optional<MorphismId> mediator_out_of(const CospanDiagram& cocone, ObjectId target,
                                            std::span<const MorphismId> legs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  Analysis* opposite_ = nullptr;
  std::unique_ptr<Analysis> owned_opposite_;
};

}  // namespace extmorph
