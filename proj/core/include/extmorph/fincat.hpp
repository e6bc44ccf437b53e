#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "extmorph/ids.hpp"

namespace extmorph {

struct MorphismDecl {
  std::string id;
  std::string dom;
  std::string cod;
};

struct CompositionEntry {
  std::string g;
  std::string f;
  std::string gf;
};

// Raw, unvalidated presentation of a finite category.
struct CategoryDescription {
  std::vector<std::string> objects;
  std::vector<MorphismDecl> morphisms;
  std::vector<std::pair<std::string, std::string>> identities;  // object -> morphism
  std::vector<CompositionEntry> composition;
  nlohmann::json metadata;  // provenance only, never consulted by checks
};

struct ValidationError {
  enum class Kind {
    duplicate_object,
    duplicate_morphism,
    unknown_object,
    unknown_morphism,
    missing_identity,
    duplicate_identity,
    identity_not_endomorphism,
    not_composable,
    composite_wrong_type,
    duplicate_composite,
    missing_composite,
    identity_law,
    associativity,
  };
  Kind kind;
  std::vector<std::string> ids;
  std::string message;
};

std::string_view to_string(ValidationError::Kind kind);

// A validated finite category. Copies share the immutable tables; the opposite
// category is a view over the same tables.
class FinCategory {
 public:
  struct Data;

  [[nodiscard]] std::size_t object_count() const;
  [[nodiscard]] std::size_t morphism_count() const;

  [[nodiscard]] auto objects() const {
    return std::views::iota(std::uint32_t{0}, static_cast<std::uint32_t>(object_count())) |
           std::views::transform([](std::uint32_t i) { return ObjectId{i}; });
  }
  [[nodiscard]] auto morphisms() const {
    return std::views::iota(std::uint32_t{0}, static_cast<std::uint32_t>(morphism_count())) |
           std::views::transform([](std::uint32_t i) { return MorphismId{i}; });
  }

  [[nodiscard]] ObjectId dom(MorphismId f) const;
  [[nodiscard]] ObjectId cod(MorphismId f) const;
  [[nodiscard]] MorphismId identity(ObjectId a) const;
  [[nodiscard]] bool is_identity(MorphismId f) const;
  [[nodiscard]] std::span<const MorphismId> hom(ObjectId a, ObjectId b) const;
  // Position of f inside hom(dom f, cod f).
  [[nodiscard]] std::size_t local_index(MorphismId f) const;
  // g after f; requires cod f == dom g.
  [[nodiscard]] MorphismId compose(MorphismId g, MorphismId f) const;
  [[nodiscard]] bool composable(MorphismId g, MorphismId f) const { return cod(f) == dom(g); }

  [[nodiscard]] const std::string& object_name(ObjectId a) const;
  [[nodiscard]] const std::string& morphism_name(MorphismId f) const;
  [[nodiscard]] std::optional<ObjectId> find_object(std::string_view name) const;
  [[nodiscard]] std::optional<MorphismId> find_morphism(std::string_view name) const;
  [[nodiscard]] const nlohmann::json& metadata() const;

  [[nodiscard]] bool is_opposite() const { return opposite_; }
  [[nodiscard]] FinCategory opposite() const;
  // Deep copy of the current orientation with freshly built tables.
  [[nodiscard]] FinCategory materialized() const;
  [[nodiscard]] CategoryDescription describe() const;

  // Same ids, same dom/cod, same composition table.
  friend bool operator==(const FinCategory& a, const FinCategory& b);

 private:
  friend std::variant<FinCategory, std::vector<ValidationError>> validate_category(const CategoryDescription&);
  FinCategory(std::shared_ptr<const Data> data, bool opposite) : data_(std::move(data)), opposite_(opposite) {}

  std::shared_ptr<const Data> data_;
  bool opposite_ = false;
};

using ValidationResult = std::variant<FinCategory, std::vector<ValidationError>>;

ValidationResult validate_category(const CategoryDescription& raw);

// Throws std::invalid_argument listing the errors.
FinCategory validated_or_throw(const CategoryDescription& raw);

inline FinCategory dual(const FinCategory& c) { return c.opposite(); }

}  // namespace extmorph
