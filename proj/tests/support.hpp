#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "extmorph/algebra.hpp"
#include "extmorph/analysis.hpp"
#include "extmorph/fincat.hpp"

namespace testing_support {

using namespace extmorph;

inline const BuiltCategory& finset(int n) {
  static std::map<int, BuiltCategory> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_category({AlgebraKind::set, n, true, true, true, {}})).first;
  return it->second;
}

inline const BuiltCategory& built(AlgebraKind k, int n) {
  static std::map<std::pair<int, int>, BuiltCategory> cache;
  auto key = std::pair{static_cast<int>(k), n};
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_category({k, n, true, true, true, {}})).first;
  return it->second;
}

inline const BuiltCategory& chain2() {
  static BuiltCategory c = thin_category(chain(AlgebraKind::poset, 2));
  return c;
}

inline MorphismId morphism(const FinCategory& c, const std::string& name) {
  auto m = c.find_morphism(name);
  if (!m) throw std::runtime_error("no morphism " + name);
  return *m;
}

inline ObjectId object(const FinCategory& c, const std::string& name) {
  auto o = c.find_object(name);
  if (!o) throw std::runtime_error("no object " + name);
  return *o;
}

// Function-table helpers for concrete categories.
inline bool injective(const std::vector<int>& t) {
  std::vector<int> s = t;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

inline bool surjective(const std::vector<int>& t, int cod) {
  std::vector<bool> hit(static_cast<std::size_t>(cod), false);
  for (int v : t) hit[static_cast<std::size_t>(v)] = true;
  for (bool h : hit)
    if (!h) return false;
  return true;
}

inline MorphismId table_morphism(const BuiltCategory& b, const std::string& dom, const std::string& cod,
                                 const std::vector<int>& table) {
  auto f = b.find_morphism(object(b.category, dom), object(b.category, cod), table);
  if (!f) throw std::runtime_error("no morphism " + dom + " -> " + cod + " with that table");
  return *f;
}

// Objects with identities only.
inline FinCategory discrete_category(int n) {
  CategoryDescription d;
  for (int i = 0; i < n; ++i) {
    const std::string o = "o" + std::to_string(i), id = "id" + std::to_string(i);
    d.objects.push_back(o);
    d.morphisms.push_back({id, o, o});
    d.identities.push_back({o, id});
    d.composition.push_back({id, id, id});
  }
  return validated_or_throw(d);
}

inline int carrier(const BuiltCategory& b, ObjectId o) { return b.algebras[o.index()].size; }

}  // namespace testing_support
