#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace extmorph {

template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

  [[nodiscard]] constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using ObjectId = Id<struct ObjectTag>;
using MorphismId = Id<struct MorphismTag>;

}  // namespace extmorph

template <class Tag>
struct std::hash<extmorph::Id<Tag>> {
  std::size_t operator()(extmorph::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
