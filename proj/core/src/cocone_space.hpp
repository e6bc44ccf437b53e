#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "extmorph/fincat.hpp"
#include "extmorph/limits.hpp"

namespace extmorph::detail {

// Compatible cocones over a fixed base. A cocone with nadir N is universal iff
// for every T the map hom(N, T) -> cocones(T), k |-> (k . leg_i), is a bijection;
// it is checked by counting first and then by distinctness of encoded images.
class CoconeSpace {
 public:
  CoconeSpace(const FinCategory& c, DiagramBase base);

  [[nodiscard]] const DiagramBase& base() const { return base_; }
  [[nodiscard]] std::span<const ObjectId> vertices() const { return vertices_; }
  [[nodiscard]] std::size_t count(ObjectId t) const;
  [[nodiscard]] bool compatible(std::span<const MorphismId> legs) const;
  // Hom-size signature of a candidate nadir matches every count.
  [[nodiscard]] bool signature_matches(ObjectId nadir) const;
  [[nodiscard]] bool universal(ObjectId nadir, std::span<const MorphismId> legs) const;
  [[nodiscard]] std::optional<UniversalCounterexample> counterexample(ObjectId nadir,
                                                                      std::span<const MorphismId> legs) const;

  // Calls visit(span of legs) for each compatible cocone at t in lexicographic
  // order; stops when visit returns false.
  template <class Visit>
  void for_each_cocone(ObjectId t, Visit&& visit) const;

 private:
  [[nodiscard]] std::uint64_t key(MorphismId k, std::span<const MorphismId> legs, ObjectId t) const;

  const FinCategory* c_;
  DiagramBase base_;
  std::vector<ObjectId> vertices_;
  mutable std::vector<std::int64_t> counts_;
};

template <class Visit>
void CoconeSpace::for_each_cocone(ObjectId t, Visit&& visit) const {
  const FinCategory& c = *c_;
  switch (base_.shape) {
    case Shape::discrete: {
      const std::size_t n = vertices_.size();
      std::vector<std::span<const MorphismId>> homs(n);
      for (std::size_t i = 0; i < n; ++i) {
        homs[i] = c.hom(vertices_[i], t);
        if (homs[i].empty()) return;
      }
      std::vector<std::size_t> pos(n, 0);
      std::vector<MorphismId> legs(n);
      while (true) {
        for (std::size_t i = 0; i < n; ++i) legs[i] = homs[i][pos[i]];
        if (!visit(std::span<const MorphismId>(legs))) return;
        std::size_t i = n;
        while (i > 0) {
          --i;
          if (++pos[i] < homs[i].size()) break;
          pos[i] = 0;
          if (i == 0) return;
        }
        if (n == 0) return;
      }
    }
    case Shape::parallel: {
      const MorphismId u = base_.arrows[0], v = base_.arrows[1];
      MorphismId leg[1];
      for (MorphismId h : c.hom(base_.objects[1], t)) {
        if (c.compose(h, u) != c.compose(h, v)) continue;
        leg[0] = h;
        if (!visit(std::span<const MorphismId>(leg))) return;
      }
      return;
    }
    case Shape::corner: {
      const MorphismId f = base_.arrows[0], g = base_.arrows[1];
      const auto hs = c.hom(base_.objects[0], t);
      std::vector<std::vector<MorphismId>> bucket(hs.size());
      for (MorphismId b : c.hom(base_.objects[2], t)) bucket[c.local_index(c.compose(b, g))].push_back(b);
      MorphismId legs[2];
      for (MorphismId a : c.hom(base_.objects[1], t)) {
        legs[0] = a;
        for (MorphismId b : bucket[c.local_index(c.compose(a, f))]) {
          legs[1] = b;
          if (!visit(std::span<const MorphismId>(legs))) return;
        }
      }
      return;
    }
  }
}

}  // namespace extmorph::detail
