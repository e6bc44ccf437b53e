#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/analysis.hpp"
#include "extmorph/classify.hpp"
#include "extmorph/fincat.hpp"

namespace extmorph {

enum class Status { pass, fail, inapplicable };
std::string_view to_string(Status s);

struct CheckStatus {
  Status status = Status::pass;
  nlohmann::json witness;  // always set for fail and inapplicable
  nlohmann::json stats = nlohmann::json::object();

  [[nodiscard]] bool passed() const { return status == Status::pass; }
  [[nodiscard]] bool failed() const { return status == Status::fail; }
  static CheckStatus fail(nlohmann::json witness, nlohmann::json stats = nlohmann::json::object());
  static CheckStatus inapplicable(nlohmann::json witness, nlohmann::json stats = nlohmann::json::object());
};
nlohmann::json to_json(const CheckStatus& s);

// Pullbacks along every coproduct injection of cod f exist and the pulled-back
// injections form a coproduct of dom f.
CheckStatus check_e1(Analysis& a, MorphismId f);
// Over every coproduct bottom row and commuting coproduct top row, both squares are pullbacks.
CheckStatus check_e2(Analysis& a, MorphismId f);
CheckStatus is_extensive_morphism(Analysis& a, MorphismId f);
// The same conditions in the opposite category (pushouts along product projections).
CheckStatus check_c1(Analysis& a, MorphismId f);
CheckStatus check_c2(Analysis& a, MorphismId f);
CheckStatus is_coextensive_morphism(Analysis& a, MorphismId f);

CheckStatus is_extensive_morphism(const FinCategory& c, MorphismId f);
CheckStatus is_coextensive_morphism(const FinCategory& c, MorphismId f);

// Needs an initial object; checks both defining squares on every coproduct diagram.
CheckStatus coproduct_disjointness(Analysis& a);
// Disjointness of coproducts in the opposite category.
CheckStatus product_codisjointness(Analysis& a);
// Gated on an initial object and disjointness. For diagrams (i1, i2), (i1, i2')
// finds an iso s with i2 = i2' . s.
CheckStatus complement_uniqueness(Analysis& a);
// Gated on an initial object. Coproduct diagrams are those certified in the
// category; binary coproducts missing from a truncated category are reported in
// the statistics rather than gating the check.
CheckStatus is_boolean_category(Analysis& a);

enum class ReportMode { extensive, coextensive };
std::string_view to_string(ReportMode m);

struct CategoryReport {
  ReportMode mode = ReportMode::extensive;
  std::vector<std::pair<MorphismId, CheckStatus>> morphisms;  // the checked morphisms, in id order
  CheckStatus verdict;   // every checked morphism passes
  CheckStatus reduced;   // split epis and coproduct inclusions only (dual in coextensive mode)
  CheckStatus agreement; // verdict == reduced whenever binary coproducts (products) exist
};
// restrict_to limits the per-morphism list and the verdict to one class.
CategoryReport category_report(Analysis& a, ReportMode mode, std::optional<MorphismClass> restrict_to = std::nullopt);
nlohmann::json to_json(const FinCategory& c, const CategoryReport& r);

// Two binary product decompositions of x always admit a refining grid of products.
CheckStatus has_binary_srp(Analysis& a, ObjectId x);
// The same for product decompositions of arity 2..k; throws std::invalid_argument for k < 2.
CheckStatus has_finite_srp(Analysis& a, ObjectId x, int k);

// Which legs of a pullback square must lie in the class. The definition asks for
// both; the looser reading only constrains the leg parallel to the class member.
enum class ClassPullback { both_legs, parallel_leg };

struct MorphismClassSpec {
  std::string name;
  MorphismClass predicate = MorphismClass::all;
};
MorphismClassSpec class_spec(MorphismClass k);

CheckStatus is_m_extensive(Analysis& a, ObjectId x, const MorphismClassSpec& m,
                           ClassPullback reading = ClassPullback::both_legs);

enum class Commutation { products_coequalisers, coproducts_equalisers };
std::string_view to_string(Commutation w);
// Samples up to sample_bound pairs of (co)equaliser diagrams with a seeded generator;
// every pair is checked when there are at most sample_bound of them.
CheckStatus commutation_check(Analysis& a, Commutation which, std::size_t sample_bound, std::uint64_t seed);

}  // namespace extmorph
