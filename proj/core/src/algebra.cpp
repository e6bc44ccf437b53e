#include "extmorph/algebra.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace extmorph {

namespace {

constexpr std::array<std::pair<AlgebraKind, std::string_view>, 7> kind_names{{
    {AlgebraKind::set, "set"},
    {AlgebraKind::pointed_set, "pointed-set"},
    {AlgebraKind::poset, "poset"},
    {AlgebraKind::connected_poset, "connected-poset"},
    {AlgebraKind::semilattice, "semilattice"},
    {AlgebraKind::lattice, "lattice"},
    {AlgebraKind::monoid, "monoid"},
}};

std::size_t idx(int x) { return static_cast<std::size_t>(x); }

bool same_structure(AlgebraKind a, AlgebraKind b) {
  if (is_relational(a) && is_relational(b)) return true;
  return a == b;
}

bool order_connected(const FinAlgebra& a) {
  if (a.size == 0) return true;
  std::vector<bool> seen(idx(a.size), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < a.size; ++y)
      if (!seen[idx(y)] && (a.leq(x, y) || a.leq(y, x))) {
        seen[idx(y)] = true;
        stack.push_back(y);
      }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Least upper bound (or greatest lower bound when upper is false) in an order.
std::optional<int> bound(const FinAlgebra& a, int x, int y, bool upper) {
  auto above = [&](int p, int q) { return upper ? a.leq(p, q) : a.leq(q, p); };
  std::optional<int> best;
  for (int z = 0; z < a.size; ++z) {
    if (!above(x, z) || !above(y, z)) continue;
    bool least = true;
    for (int w = 0; w < a.size && least; ++w)
      if (above(x, w) && above(y, w) && !above(z, w)) least = false;
    if (least) best = z;
  }
  return best;
}

std::vector<std::uint8_t> order_from_join(const FinAlgebra& a) {
  std::vector<std::uint8_t> order(idx(a.size * a.size), 0);
  for (int x = 0; x < a.size; ++x)
    for (int y = 0; y < a.size; ++y) order[idx(x * a.size + y)] = a.binary(0, x, y) == y;
  return order;
}

}  // namespace

std::string_view to_string(AlgebraKind k) {
  for (auto [kind, name] : kind_names)
    if (kind == k) return name;
  return "?";
}

std::optional<AlgebraKind> parse_algebra_kind(std::string_view name) {
  for (auto [kind, n] : kind_names)
    if (n == name) return kind;
  return std::nullopt;
}

Signature signature_of(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::set:
    case AlgebraKind::poset:
    case AlgebraKind::connected_poset: return {};
    case AlgebraKind::pointed_set: return {{"point", 0}};
    case AlgebraKind::semilattice: return {{"join", 2}};
    case AlgebraKind::lattice: return {{"join", 2}, {"meet", 2}};
    case AlgebraKind::monoid: return {{"unit", 0}, {"mul", 2}};
  }
  return {};
}

bool is_relational(AlgebraKind k) { return k == AlgebraKind::poset || k == AlgebraKind::connected_poset; }

int FinAlgebra::apply(std::size_t op, std::span<const int> args) const {
  std::size_t i = 0;
  for (int x : args) i = i * idx(size) + idx(x);
  return ops[op][i];
}

bool satisfies_axioms(const FinAlgebra& a) {
  const auto sig = signature_of(a.kind);
  if (a.size < 0 || a.ops.size() != sig.size()) return false;
  for (std::size_t k = 0; k < sig.size(); ++k) {
    std::size_t expect = 1;
    for (int i = 0; i < sig[k].arity; ++i) expect *= idx(a.size);
    if (a.ops[k].size() != expect) return false;
    for (int v : a.ops[k])
      if (v < 0 || v >= a.size) return false;
  }
  const int n = a.size;
  auto associative = [&](std::size_t op) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          if (a.binary(op, a.binary(op, x, y), z) != a.binary(op, x, a.binary(op, y, z))) return false;
    return true;
  };
  auto semilattice = [&](std::size_t op) {
    for (int x = 0; x < n; ++x) {
      if (a.binary(op, x, x) != x) return false;
      for (int y = 0; y < n; ++y)
        if (a.binary(op, x, y) != a.binary(op, y, x)) return false;
    }
    return associative(op);
  };
  switch (a.kind) {
    case AlgebraKind::set: return a.order.empty();
    case AlgebraKind::pointed_set: return n >= 1 && a.order.empty();
    case AlgebraKind::poset:
    case AlgebraKind::connected_poset: {
      if (n < 1 || a.order.size() != idx(n * n)) return false;
      for (int x = 0; x < n; ++x) {
        if (!a.leq(x, x)) return false;
        for (int y = 0; y < n; ++y) {
          if (x != y && a.leq(x, y) && a.leq(y, x)) return false;
          for (int z = 0; z < n; ++z)
            if (a.leq(x, y) && a.leq(y, z) && !a.leq(x, z)) return false;
        }
      }
      return a.kind == AlgebraKind::poset || order_connected(a);
    }
    case AlgebraKind::semilattice: return n >= 1 && a.order.empty() && semilattice(0);
    case AlgebraKind::lattice: {
      if (n < 1 || !a.order.empty() || !semilattice(0) || !semilattice(1)) return false;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (a.binary(0, x, a.binary(1, x, y)) != x || a.binary(1, x, a.binary(0, x, y)) != x) return false;
      return true;
    }
    case AlgebraKind::monoid: {
      if (n < 1 || !a.order.empty() || !associative(1)) return false;
      const int e = a.constant(0);
      for (int x = 0; x < n; ++x)
        if (a.binary(1, e, x) != x || a.binary(1, x, e) != x) return false;
      return true;
    }
  }
  return false;
}

bool is_homomorphism(const FinAlgebra& a, const FinAlgebra& b, std::span<const int> h) {
  if (!same_structure(a.kind, b.kind) || h.size() != idx(a.size)) return false;
  for (int v : h)
    if (v < 0 || v >= b.size) return false;
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      if (h[idx(a.constant(k))] != b.constant(k)) return false;
    } else {
      for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
          if (h[idx(a.binary(k, x, y))] != b.binary(k, h[idx(x)], h[idx(y)])) return false;
    }
  }
  if (is_relational(a.kind))
    for (int x = 0; x < a.size; ++x)
      for (int y = 0; y < a.size; ++y)
        if (a.leq(x, y) && !b.leq(h[idx(x)], h[idx(y)])) return false;
  return true;
}

std::vector<Homomorphism> enumerate_homs(const FinAlgebra& a, const FinAlgebra& b) {
  if (!same_structure(a.kind, b.kind))
    throw std::invalid_argument("enumerate_homs: structures of different kinds (" + std::string(to_string(a.kind)) +
                                ", " + std::string(to_string(b.kind)) + ")");
  struct Constraint {
    enum { constant, binary, order } type;
    std::size_t op;
    int x, y, r;
  };
  const int n = a.size;
  std::vector<std::vector<Constraint>> at(idx(n));
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      at[idx(a.constant(k))].push_back({Constraint::constant, k, 0, 0, a.constant(k)});
    } else {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          const int r = a.binary(k, x, y);
          at[idx(std::max({x, y, r}))].push_back({Constraint::binary, k, x, y, r});
        }
    }
  }
  if (is_relational(a.kind))
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (x != y && a.leq(x, y)) at[idx(std::max(x, y))].push_back({Constraint::order, 0, x, y, 0});

  std::vector<Homomorphism> out;
  Homomorphism h(idx(n), 0);
  auto ok = [&](int x) {
    for (const auto& c : at[idx(x)]) {
      switch (c.type) {
        case Constraint::constant:
          if (h[idx(c.r)] != b.constant(c.op)) return false;
          break;
        case Constraint::binary:
          if (h[idx(c.r)] != b.binary(c.op, h[idx(c.x)], h[idx(c.y)])) return false;
          break;
        case Constraint::order:
          if (!b.leq(h[idx(c.x)], h[idx(c.y)])) return false;
          break;
      }
    }
    return true;
  };
  auto assign = [&](auto&& self, int x) -> void {
    if (x == n) {
      out.push_back(h);
      return;
    }
    for (int v = 0; v < b.size; ++v) {
      h[idx(x)] = v;
      if (ok(x)) self(self, x + 1);
    }
  };
  assign(assign, 0);
  return out;
}

int Congruence::block_count() const {
  return block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
}

Congruence normalized(std::vector<int> labels) {
  std::unordered_map<int, int> fresh;
  for (int& l : labels) {
    auto [it, inserted] = fresh.emplace(l, static_cast<int>(fresh.size()));
    l = it->second;
  }
  return Congruence{std::move(labels)};
}

Congruence diagonal_congruence(int n) {
  std::vector<int> b(idx(n));
  std::iota(b.begin(), b.end(), 0);
  return Congruence{std::move(b)};
}

Congruence full_congruence(int n) { return Congruence{std::vector<int>(idx(n), 0)}; }

Congruence kernel_of(std::span<const int> h) { return normalized({h.begin(), h.end()}); }

bool is_congruence(const FinAlgebra& a, const Congruence& t) {
  if (is_relational(a.kind)) throw std::invalid_argument("congruences are defined for algebraic kinds only");
  if (t.block.size() != idx(a.size)) return false;
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity != 2) continue;
    for (int x = 0; x < a.size; ++x)
      for (int y = x + 1; y < a.size; ++y) {
        if (!t.related(x, y)) continue;
        for (int z = 0; z < a.size; ++z)
          if (!t.related(a.binary(k, x, z), a.binary(k, y, z)) || !t.related(a.binary(k, z, x), a.binary(k, z, y)))
            return false;
      }
  }
  return true;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(idx(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[idx(x)] != x) x = parent[idx(x)] = parent[idx(parent[idx(x)])];
    return x;
  }
  bool unite(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return false;
    parent[idx(std::max(x, y))] = std::min(x, y);
    return true;
  }
};

}  // namespace

Congruence congruence_generate(const FinAlgebra& a, std::span<const std::pair<int, int>> pairs) {
  if (is_relational(a.kind)) throw std::invalid_argument("congruences are defined for algebraic kinds only");
  UnionFind uf(a.size);
  for (auto [x, y] : pairs) {
    if (x < 0 || y < 0 || x >= a.size || y >= a.size) throw std::invalid_argument("congruence_generate: pair out of range");
    uf.unite(x, y);
  }
  const auto sig = signature_of(a.kind);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < sig.size(); ++k) {
      if (sig[k].arity != 2) continue;
      for (int x = 0; x < a.size; ++x)
        for (int y = x + 1; y < a.size; ++y) {
          if (uf.find(x) != uf.find(y)) continue;
          for (int z = 0; z < a.size; ++z) {
            changed |= uf.unite(a.binary(k, x, z), a.binary(k, y, z));
            changed |= uf.unite(a.binary(k, z, x), a.binary(k, z, y));
          }
        }
    }
  }
  std::vector<int> labels(idx(a.size));
  for (int x = 0; x < a.size; ++x) labels[idx(x)] = uf.find(x);
  return normalized(std::move(labels));
}

Congruence congruence_meet(const Congruence& s, const Congruence& t) {
  std::map<std::pair<int, int>, int> label;
  std::vector<int> out(s.block.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = label.emplace(std::pair{s.block[i], t.block[i]}, static_cast<int>(label.size())).first->second;
  return normalized(std::move(out));
}

Congruence congruence_join(const FinAlgebra& a, const Congruence& s, const Congruence& t) {
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < a.size; ++x)
    for (int y = x + 1; y < a.size; ++y)
      if (s.related(x, y) || t.related(x, y)) pairs.emplace_back(x, y);
  return congruence_generate(a, pairs);
}

bool congruence_leq(const Congruence& s, const Congruence& t) {
  for (std::size_t x = 0; x < s.block.size(); ++x)
    for (std::size_t y = x + 1; y < s.block.size(); ++y)
      if (s.block[x] == s.block[y] && t.block[x] != t.block[y]) return false;
  return true;
}

std::vector<Congruence> congruence_lattice(const FinAlgebra& a, int max_carrier) {
  if (is_relational(a.kind)) throw std::invalid_argument("congruences are defined for algebraic kinds only");
  if (a.size > max_carrier)
    throw std::invalid_argument("congruence_lattice: carrier " + std::to_string(a.size) + " exceeds bound " +
                                std::to_string(max_carrier));
  std::vector<Congruence> out;
  const int n = a.size;
  std::vector<int> rgs(idx(n), 0);
  // restricted growth strings enumerate set partitions
  auto rec = [&](auto&& self, int i, int max_label) -> void {
    if (i == n) {
      Congruence t{rgs};
      if (is_congruence(a, t)) out.push_back(std::move(t));
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      rgs[idx(i)] = l;
      self(self, i + 1, std::max(max_label, l));
    }
  };
  if (n == 0) {
    out.push_back(Congruence{});
  } else {
    rgs[0] = 0;
    rec(rec, 1, 0);
  }
  return out;
}

Quotient quotient(const FinAlgebra& a, const Congruence& t) {
  if (is_relational(a.kind)) throw std::invalid_argument("quotients are defined for algebraic kinds only");
  if (!is_congruence(a, t)) throw std::invalid_argument("quotient: not a congruence");
  const Congruence norm = normalized(t.block);
  const int m = norm.block_count();
  std::vector<int> rep(idx(m), -1);
  for (int x = 0; x < a.size; ++x)
    if (rep[idx(norm.block[idx(x)])] < 0) rep[idx(norm.block[idx(x)])] = x;
  FinAlgebra q;
  q.kind = a.kind;
  q.size = m;
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      q.ops.push_back({norm.block[idx(a.constant(k))]});
    } else {
      std::vector<int> table(idx(m * m));
      for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) table[idx(x * m + y)] = norm.block[idx(a.binary(k, rep[idx(x)], rep[idx(y)]))];
      q.ops.push_back(std::move(table));
    }
  }
  return {std::move(q), norm.block};
}

SurjectionPushout pushout_surjections(const Congruence& q_kernel, const Congruence& p_kernel, const FinAlgebra& a) {
  SurjectionPushout out{quotient(a, q_kernel), quotient(a, p_kernel), {}, {}, {}};
  const Congruence join = congruence_join(a, q_kernel, p_kernel);
  Quotient j = quotient(a, join);
  out.algebra = std::move(j.algebra);
  out.from_q.assign(idx(out.by_q.algebra.size), 0);
  out.from_p.assign(idx(out.by_p.algebra.size), 0);
  for (int x = 0; x < a.size; ++x) {
    out.from_q[idx(out.by_q.map[idx(x)])] = j.map[idx(x)];
    out.from_p[idx(out.by_p.map[idx(x)])] = j.map[idx(x)];
  }
  return out;
}

ProductAlgebra product(const FinAlgebra& a, const FinAlgebra& b) {
  if (a.kind != b.kind) throw std::invalid_argument("product: algebras of different kinds");
  const int n = a.size * b.size;
  ProductAlgebra p;
  p.algebra.kind = a.kind;
  p.algebra.size = n;
  auto pair = [&](int x, int y) { return x * b.size + y; };
  for (int x = 0; x < a.size; ++x)
    for (int y = 0; y < b.size; ++y) {
      p.first.push_back(x);
      p.second.push_back(y);
    }
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      p.algebra.ops.push_back({pair(a.constant(k), b.constant(k))});
    } else {
      std::vector<int> table(idx(n * n));
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          table[idx(u * n + v)] = pair(a.binary(k, p.first[idx(u)], p.first[idx(v)]),
                                       b.binary(k, p.second[idx(u)], p.second[idx(v)]));
      p.algebra.ops.push_back(std::move(table));
    }
  }
  if (is_relational(a.kind)) {
    p.algebra.order.assign(idx(n * n), 0);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        p.algebra.order[idx(u * n + v)] =
            a.leq(p.first[idx(u)], p.first[idx(v)]) && b.leq(p.second[idx(u)], p.second[idx(v)]);
  }
  return p;
}

FinAlgebra subalgebra(const FinAlgebra& a, std::span<const int> elements) {
  std::vector<int> pos(idx(a.size), -1);
  for (std::size_t i = 0; i < elements.size(); ++i) pos[idx(elements[i])] = static_cast<int>(i);
  FinAlgebra s;
  s.kind = a.kind;
  s.size = static_cast<int>(elements.size());
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      const int c = pos[idx(a.constant(k))];
      if (c < 0) throw std::invalid_argument("subalgebra: subset misses a constant");
      s.ops.push_back({c});
    } else {
      std::vector<int> table;
      for (int x : elements)
        for (int y : elements) {
          const int r = pos[idx(a.binary(k, x, y))];
          if (r < 0) throw std::invalid_argument("subalgebra: subset not closed");
          table.push_back(r);
        }
      s.ops.push_back(std::move(table));
    }
  }
  if (is_relational(a.kind))
    for (int x : elements)
      for (int y : elements) s.order.push_back(a.leq(x, y));
  return s;
}

std::vector<std::vector<int>> subuniverses(const FinAlgebra& a) {
  if (a.size > 20) throw std::invalid_argument("subuniverses: carrier too large");
  std::vector<std::vector<int>> out;
  const auto sig = signature_of(a.kind);
  const std::uint32_t full = (std::uint32_t{1} << a.size);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    if (mask == 0 && a.kind != AlgebraKind::set) continue;
    auto in = [&](int x) { return ((mask >> x) & 1U) != 0; };
    bool closed = true;
    for (std::size_t k = 0; k < sig.size() && closed; ++k) {
      if (sig[k].arity == 0) {
        closed = in(a.constant(k));
      } else {
        for (int x = 0; x < a.size && closed; ++x)
          for (int y = 0; y < a.size && closed; ++y)
            if (in(x) && in(y) && !in(a.binary(k, x, y))) closed = false;
      }
    }
    if (!closed) continue;
    std::vector<int> elems;
    for (int x = 0; x < a.size; ++x)
      if (in(x)) elems.push_back(x);
    if (a.kind == AlgebraKind::connected_poset && !order_connected(subalgebra(a, elems))) continue;
    out.push_back(std::move(elems));
  }
  return out;
}

FinAlgebra relabelled(const FinAlgebra& a, std::span<const int> relabel) {
  FinAlgebra r;
  r.kind = a.kind;
  r.size = a.size;
  const int n = a.size;
  const auto sig = signature_of(a.kind);
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (sig[k].arity == 0) {
      r.ops.push_back({relabel[idx(a.constant(k))]});
    } else {
      std::vector<int> table(idx(n * n));
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          table[idx(relabel[idx(x)] * n + relabel[idx(y)])] = relabel[idx(a.binary(k, x, y))];
      r.ops.push_back(std::move(table));
    }
  }
  if (!a.order.empty()) {
    r.order.assign(idx(n * n), 0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) r.order[idx(relabel[idx(x)] * n + relabel[idx(y)])] = a.order[idx(x * n + y)];
  }
  return r;
}

CanonicalForm canonical_form(const FinAlgebra& a) {
  const int n = a.size;
  const auto sig = signature_of(a.kind);
  std::vector<int> perm(idx(n));  // new label -> old element
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> inv(idx(n));
  std::vector<int> best, code;
  std::vector<int> best_perm = perm;
  const std::vector<int> header{static_cast<int>(a.kind), n};
  do {
    for (int i = 0; i < n; ++i) inv[idx(perm[idx(i)])] = i;
    code = header;
    bool greater = false, less = best.empty();
    auto emit = [&](int v) {
      if (greater) return;
      const std::size_t at = code.size();
      code.push_back(v);
      if (!less) {
        if (v < best[at]) less = true;
        else if (v > best[at]) greater = true;
      }
    };
    for (std::size_t k = 0; k < sig.size() && !greater; ++k) {
      if (sig[k].arity == 0) {
        emit(inv[idx(a.constant(k))]);
      } else {
        for (int x = 0; x < n && !greater; ++x)
          for (int y = 0; y < n && !greater; ++y) emit(inv[idx(a.binary(k, perm[idx(x)], perm[idx(y)]))]);
      }
    }
    if (!a.order.empty())
      for (int x = 0; x < n && !greater; ++x)
        for (int y = 0; y < n && !greater; ++y) emit(a.leq(perm[idx(x)], perm[idx(y)]) ? 1 : 0);
    if (!greater && (less || best.empty())) {
      best = code;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  CanonicalForm out;
  out.code = std::move(best);
  out.relabel.assign(idx(n), 0);
  for (int i = 0; i < n; ++i) out.relabel[idx(best_perm[idx(i)])] = i;
  return out;
}

FinAlgebra canonical(const FinAlgebra& a) { return relabelled(a, canonical_form(a).relabel); }

namespace {

std::vector<FinAlgebra> enumerate_posets(int n, bool connected) {
  std::vector<FinAlgebra> out;
  if (n < 1) return out;
  std::set<std::vector<int>> seen;
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  if (slots.size() > 24) throw std::invalid_argument("poset enumeration: carrier too large");
  // every poset has a labelling along a linear extension, so strict pairs i < j suffice
  const std::uint32_t total = std::uint32_t{1} << slots.size();
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    FinAlgebra p;
    p.kind = connected ? AlgebraKind::connected_poset : AlgebraKind::poset;
    p.size = n;
    p.order.assign(idx(n * n), 0);
    for (int i = 0; i < n; ++i) p.order[idx(i * n + i)] = 1;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if ((mask >> s) & 1U) p.order[idx(slots[s].first * n + slots[s].second)] = 1;
    bool transitive = true;
    for (int x = 0; x < n && transitive; ++x)
      for (int y = x + 1; y < n && transitive; ++y)
        if (p.leq(x, y))
          for (int z = y + 1; z < n && transitive; ++z)
            if (p.leq(y, z) && !p.leq(x, z)) transitive = false;
    if (!transitive) continue;
    if (connected && !order_connected(p)) continue;
    auto cf = canonical_form(p);
    if (seen.insert(cf.code).second) out.push_back(relabelled(p, cf.relabel));
  }
  return out;
}

std::vector<FinAlgebra> enumerate_lattice_like(int n, bool with_meet) {
  std::vector<FinAlgebra> out;
  std::set<std::vector<int>> seen;
  for (const auto& p : enumerate_posets(n, false)) {
    FinAlgebra s;
    s.kind = with_meet ? AlgebraKind::lattice : AlgebraKind::semilattice;
    s.size = n;
    bool ok = true;
    for (int upper = 1; upper >= (with_meet ? 0 : 1) && ok; --upper) {
      std::vector<int> table(idx(n * n));
      for (int x = 0; x < n && ok; ++x)
        for (int y = 0; y < n && ok; ++y) {
          auto b = bound(p, x, y, upper == 1);
          if (!b) ok = false;
          else table[idx(x * n + y)] = *b;
        }
      s.ops.push_back(std::move(table));
    }
    if (!ok) continue;
    auto cf = canonical_form(s);
    if (seen.insert(cf.code).second) out.push_back(relabelled(s, cf.relabel));
  }
  return out;
}

std::vector<FinAlgebra> enumerate_monoids(int n) {
  std::vector<FinAlgebra> out;
  if (n < 1) return out;
  std::set<std::vector<int>> seen;
  std::vector<int> t(idx(n * n), -1);
  for (int x = 0; x < n; ++x) {
    t[idx(x)] = x;
    t[idx(x * n)] = x;
  }
  auto at = [&](int x, int y) { return t[idx(x * n + y)]; };
  auto consistent = [&]() {
    for (int x = 1; x < n; ++x)
      for (int y = 1; y < n; ++y) {
        const int xy = at(x, y);
        if (xy < 0) continue;
        for (int z = 1; z < n; ++z) {
          const int yz = at(y, z);
          if (yz < 0) continue;
          const int l = at(xy, z), r = at(x, yz);
          if (l >= 0 && r >= 0 && l != r) return false;
        }
      }
    return true;
  };
  std::vector<std::pair<int, int>> cells;
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y) cells.emplace_back(x, y);
  auto fill = [&](auto&& self, std::size_t i) -> void {
    if (i == cells.size()) {
      FinAlgebra m;
      m.kind = AlgebraKind::monoid;
      m.size = n;
      m.ops = {{0}, t};
      auto cf = canonical_form(m);
      if (seen.insert(cf.code).second) out.push_back(relabelled(m, cf.relabel));
      return;
    }
    auto [x, y] = cells[i];
    for (int v = 0; v < n; ++v) {
      t[idx(x * n + y)] = v;
      if (consistent()) self(self, i + 1);
    }
    t[idx(x * n + y)] = -1;
  };
  fill(fill, 0);
  return out;
}

}  // namespace

std::vector<FinAlgebra> enumerate_algebras(AlgebraKind k, int size) {
  std::vector<FinAlgebra> out;
  switch (k) {
    case AlgebraKind::set:
      if (size >= 0) out.push_back(FinAlgebra{AlgebraKind::set, size, {}, {}});
      break;
    case AlgebraKind::pointed_set:
      if (size >= 1) out.push_back(FinAlgebra{AlgebraKind::pointed_set, size, {{0}}, {}});
      break;
    case AlgebraKind::poset: out = enumerate_posets(size, false); break;
    case AlgebraKind::connected_poset: out = enumerate_posets(size, true); break;
    case AlgebraKind::semilattice: out = enumerate_lattice_like(size, false); break;
    case AlgebraKind::lattice: out = enumerate_lattice_like(size, true); break;
    case AlgebraKind::monoid: out = enumerate_monoids(size); break;
  }
  std::sort(out.begin(), out.end(), [](const FinAlgebra& a, const FinAlgebra& b) {
    return canonical_form(a).code < canonical_form(b).code;
  });
  return out;
}

FinAlgebra chain(AlgebraKind k, int n) {
  FinAlgebra a;
  a.kind = k;
  a.size = n;
  if (is_relational(k)) {
    a.order.assign(idx(n * n), 0);
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) a.order[idx(x * n + y)] = 1;
    return a;
  }
  std::vector<int> join(idx(n * n)), meet(idx(n * n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      join[idx(x * n + y)] = std::max(x, y);
      meet[idx(x * n + y)] = std::min(x, y);
    }
  if (k == AlgebraKind::semilattice) a.ops = {join};
  else if (k == AlgebraKind::lattice) a.ops = {join, meet};
  else throw std::invalid_argument("chain: kind has no order");
  return a;
}

FinAlgebra cyclic_group(int n) {
  FinAlgebra a{AlgebraKind::monoid, n, {{0}, std::vector<int>(idx(n * n))}, {}};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) a.ops[1][idx(x * n + y)] = (x + y) % n;
  return a;
}

FinAlgebra transformation_monoid(int n) {
  // elements are maps encoded in base n; element 0 is relabelled to the identity
  int count = 1;
  for (int i = 0; i < n; ++i) count *= n;
  auto decode = [&](int code) {
    std::vector<int> f(idx(n));
    for (int i = n - 1; i >= 0; --i) {
      f[idx(i)] = code % n;
      code /= n;
    }
    return f;
  };
  auto encode = [&](const std::vector<int>& f) {
    int code = 0;
    for (int v : f) code = code * n + v;
    return code;
  };
  std::vector<int> id(idx(n));
  std::iota(id.begin(), id.end(), 0);
  const int id_code = encode(id);
  auto label = [&](int code) { return code == id_code ? 0 : (code == 0 ? id_code : code); };
  FinAlgebra a{AlgebraKind::monoid, count, {{0}, std::vector<int>(idx(count * count))}, {}};
  for (int x = 0; x < count; ++x)
    for (int y = 0; y < count; ++y) {
      auto f = decode(label(x)), g = decode(label(y));
      std::vector<int> fg(idx(n));
      for (int i = 0; i < n; ++i) fg[idx(i)] = f[idx(g[idx(i)])];
      a.ops[1][idx(x * count + y)] = label(encode(fg));
    }
  return a;
}

std::vector<int> center_of_monoid(const FinAlgebra& m) {
  if (m.kind != AlgebraKind::monoid) throw std::invalid_argument("center_of_monoid: not a monoid");
  std::vector<int> out;
  for (int x = 0; x < m.size; ++x) {
    bool central = true;
    for (int y = 0; y < m.size && central; ++y) central = m.binary(1, x, y) == m.binary(1, y, x);
    if (central) out.push_back(x);
  }
  return out;
}

namespace {

std::string object_prefix(AlgebraKind k) {
  switch (k) {
    case AlgebraKind::set: return "S";
    case AlgebraKind::pointed_set: return "P";
    case AlgebraKind::poset: return "O";
    case AlgebraKind::connected_poset: return "C";
    case AlgebraKind::semilattice: return "SL";
    case AlgebraKind::lattice: return "L";
    case AlgebraKind::monoid: return "M";
  }
  return "X";
}

std::string table_string(std::span<const int> table, int cod_size) {
  std::string s;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (cod_size > 10 && i > 0) s += ',';
    s += std::to_string(table[i]);
  }
  return s;
}

std::string alpha_suffix(std::size_t i) {
  std::string s;
  do {
    s.insert(s.begin(), static_cast<char>('a' + i % 26));
    i /= 26;
  } while (i-- > 0);
  return s;
}

}  // namespace

std::optional<ObjectId> BuiltCategory::find_object(const FinAlgebra& a) const {
  const auto code = canonical_form(a).code;
  for (std::size_t i = 0; i < algebras.size(); ++i)
    if (algebras[i].kind == a.kind && algebras[i].size == a.size && canonical_form(algebras[i]).code == code)
      return ObjectId{i};
  return std::nullopt;
}

std::optional<MorphismId> BuiltCategory::find_morphism(ObjectId dom, ObjectId cod, std::span<const int> table) const {
  for (MorphismId f : category.hom(dom, cod))
    if (std::ranges::equal(tables[f.index()], table)) return f;
  return std::nullopt;
}

namespace {

BuiltCategory assemble(AlgebraKind kind, std::vector<FinAlgebra> objects, nlohmann::json builder_info,
                       std::vector<std::string> overflow) {
  std::stable_sort(objects.begin(), objects.end(), [](const FinAlgebra& a, const FinAlgebra& b) {
    if (a.size != b.size) return a.size < b.size;
    return canonical_form(a).code < canonical_form(b).code;
  });
  const std::size_t n = objects.size();
  std::vector<std::string> names(n);
  const std::string prefix = object_prefix(kind);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && objects[j].size == objects[i].size) ++j;
    for (std::size_t k = i; k < j; ++k)
      names[k] = prefix + std::to_string(objects[i].size) + (j - i > 1 ? alpha_suffix(k - i) : "");
    i = j;
  }

  CategoryDescription d;
  d.objects = names;
  std::vector<std::vector<int>> tables;
  std::vector<std::vector<std::vector<MorphismId>>> homs(n, std::vector<std::vector<MorphismId>>(n));
  std::vector<std::size_t> dom_of, cod_of;
  std::vector<std::map<std::vector<int>, std::uint32_t>> index(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (auto& h : enumerate_homs(objects[a], objects[b])) {
        const auto id = static_cast<std::uint32_t>(tables.size());
        d.morphisms.push_back({names[a] + ">" + names[b] + ":" + table_string(h, objects[b].size), names[a], names[b]});
        index[a * n + b].emplace(h, id);
        homs[a][b].push_back(MorphismId{id});
        dom_of.push_back(a);
        cod_of.push_back(b);
        tables.push_back(std::move(h));
      }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<int> id(idx(objects[a].size));
    std::iota(id.begin(), id.end(), 0);
    d.identities.emplace_back(names[a], d.morphisms[index[a * n + a].at(id)].id);
  }
  std::vector<int> composite;
  for (std::size_t f = 0; f < tables.size(); ++f) {
    const std::size_t a = dom_of[f], b = cod_of[f];
    for (std::size_t c = 0; c < n; ++c)
      for (MorphismId g : homs[b][c]) {
        composite.assign(tables[f].size(), 0);
        for (std::size_t x = 0; x < tables[f].size(); ++x) composite[x] = tables[g.index()][idx(tables[f][x])];
        const auto gf = index[a * n + c].at(composite);
        d.composition.push_back({d.morphisms[g.index()].id, d.morphisms[f].id, d.morphisms[gf].id});
      }
  }
  nlohmann::json algebras_json = nlohmann::json::object();
  for (std::size_t i = 0; i < n; ++i) algebras_json[names[i]] = to_json(objects[i], names[i]);
  nlohmann::json tables_json = nlohmann::json::object();
  for (std::size_t f = 0; f < tables.size(); ++f) tables_json[d.morphisms[f].id] = tables[f];
  d.metadata = {{"builder", std::move(builder_info)},
                {"algebras", std::move(algebras_json)},
                {"tables", std::move(tables_json)},
                {"overflow", overflow}};
  return BuiltCategory{validated_or_throw(d), std::move(objects), std::move(tables), std::move(overflow)};
}

}  // namespace

BuiltCategory build_category(const BuilderConfig& cfg) {
  if (cfg.max_carrier < 1) throw std::invalid_argument("builder: budget must be at least 1");
  const int cap = [&] {
    switch (cfg.kind) {
      case AlgebraKind::set: return 4;
      case AlgebraKind::pointed_set:
      case AlgebraKind::monoid: return 5;
      default: return 6;
    }
  }();
  if (cfg.max_carrier > cap)
    throw std::invalid_argument("builder: budget exhausted, " + std::string(to_string(cfg.kind)) + " supports at most " +
                                std::to_string(cap) + " elements");
  const int seed_max = std::min(cfg.generators_max.value_or(cfg.max_carrier), cfg.max_carrier);
  std::map<std::vector<int>, FinAlgebra> objects;
  auto add = [&](const FinAlgebra& a) {
    auto cf = canonical_form(a);
    if (objects.count(cf.code)) return false;
    objects.emplace(cf.code, relabelled(a, cf.relabel));
    return true;
  };
  const int min_size = cfg.kind == AlgebraKind::set ? 0 : 1;
  for (int s = min_size; s <= seed_max; ++s)
    for (const auto& a : enumerate_algebras(cfg.kind, s)) add(a);

  std::set<std::string> overflow;
  bool changed = cfg.products || cfg.subalgebras || cfg.quotients;
  while (changed) {
    changed = false;
    std::vector<FinAlgebra> current;
    for (const auto& [code, a] : objects) current.push_back(a);
    if (cfg.products)
      for (std::size_t i = 0; i < current.size(); ++i)
        for (std::size_t j = i; j < current.size(); ++j) {
          if (current[i].size * current[j].size > cfg.max_carrier) {
            overflow.insert("product of sizes " + std::to_string(current[i].size) + " and " +
                            std::to_string(current[j].size));
            continue;
          }
          changed |= add(product(current[i], current[j]).algebra);
        }
    if (cfg.subalgebras)
      for (const auto& a : current)
        for (const auto& s : subuniverses(a))
          if (static_cast<int>(s.size()) >= min_size) changed |= add(subalgebra(a, s));
    if (cfg.quotients && !is_relational(cfg.kind))
      for (const auto& a : current)
        for (const auto& t : congruence_lattice(a, cfg.max_carrier)) changed |= add(quotient(a, t).algebra);
  }
  std::vector<FinAlgebra> list;
  for (auto& [code, a] : objects) list.push_back(std::move(a));
  nlohmann::json info{{"variety", to_string(cfg.kind)},
                      {"max_carrier", cfg.max_carrier},
                      {"generators_max", seed_max},
                      {"products", cfg.products},
                      {"subalgebras", cfg.subalgebras},
                      {"quotients", cfg.quotients}};
  return assemble(cfg.kind, std::move(list), std::move(info), {overflow.begin(), overflow.end()});
}

BuiltCategory thin_category(const FinAlgebra& poset) {
  FinAlgebra p = poset;
  if (!is_relational(p.kind)) {
    if (p.kind != AlgebraKind::semilattice && p.kind != AlgebraKind::lattice)
      throw std::invalid_argument("thin_category: needs an ordered structure");
    p.order = order_from_join(poset);
    p.kind = AlgebraKind::poset;
    p.ops.clear();
  }
  CategoryDescription d;
  const int n = p.size;
  for (int x = 0; x < n; ++x) d.objects.push_back(std::to_string(x));
  auto arrow = [](int x, int y) {
    return x == y ? "id" + std::to_string(x) : std::to_string(x) + "le" + std::to_string(y);
  };
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (p.leq(x, y)) d.morphisms.push_back({arrow(x, y), std::to_string(x), std::to_string(y)});
    d.identities.emplace_back(std::to_string(x), arrow(x, x));
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (p.leq(x, y) && p.leq(y, z)) d.composition.push_back({arrow(y, z), arrow(x, y), arrow(x, z)});
  d.metadata = {{"builder", {{"variety", "thin"}, {"order", to_json(p, "order")}}}};
  return BuiltCategory{validated_or_throw(d), {}, {}, {}};
}

BuiltCategory monoid_category(const FinAlgebra& m) {
  if (m.kind != AlgebraKind::monoid) throw std::invalid_argument("monoid_category: not a monoid");
  CategoryDescription d;
  d.objects = {"*"};
  auto name = [](int x) { return "m" + std::to_string(x); };
  for (int x = 0; x < m.size; ++x) d.morphisms.push_back({name(x), "*", "*"});
  d.identities.emplace_back("*", name(m.constant(0)));
  for (int g = 0; g < m.size; ++g)
    for (int f = 0; f < m.size; ++f) d.composition.push_back({name(g), name(f), name(m.binary(1, g, f))});
  d.metadata = {{"builder", {{"variety", "one-object"}, {"monoid", to_json(m, "monoid")}}}};
  return BuiltCategory{validated_or_throw(d), {}, {}, {}};
}

nlohmann::json to_json(const FinAlgebra& a, std::string_view name) {
  nlohmann::json j{{"name", name}, {"carrier", a.size}};
  const auto sig = signature_of(a.kind);
  nlohmann::json ops = nlohmann::json::object();
  for (std::size_t k = 0; k < sig.size(); ++k) {
    if (a.kind == AlgebraKind::pointed_set) {
      j["basepoint"] = a.constant(k);
      continue;
    }
    if (sig[k].arity == 0) {
      ops[sig[k].name] = a.constant(k);
    } else {
      nlohmann::json rows = nlohmann::json::array();
      for (int x = 0; x < a.size; ++x) {
        nlohmann::json row = nlohmann::json::array();
        for (int y = 0; y < a.size; ++y) row.push_back(a.binary(k, x, y));
        rows.push_back(std::move(row));
      }
      ops[sig[k].name] = std::move(rows);
    }
  }
  if (!ops.empty()) j["ops"] = std::move(ops);
  if (!a.order.empty()) {
    nlohmann::json pairs = nlohmann::json::array();
    for (int x = 0; x < a.size; ++x)
      for (int y = 0; y < a.size; ++y)
        if (a.leq(x, y)) pairs.push_back({x, y});
    j["order"] = std::move(pairs);
  }
  return j;
}

nlohmann::json algebras_to_json(AlgebraKind kind, std::span<const FinAlgebra> algebras,
                                std::span<const std::string> names) {
  nlohmann::json sig = nlohmann::json::array();
  for (const auto& s : signature_of(kind)) sig.push_back({{"name", s.name}, {"arity", s.arity}});
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < algebras.size(); ++i) list.push_back(to_json(algebras[i], names[i]));
  return {{"kind", to_string(kind)}, {"signature", sig}, {"algebras", list}};
}

std::vector<std::pair<std::string, FinAlgebra>> algebras_from_json(const nlohmann::json& j, AlgebraKind kind) {
  if (!j.is_object() || !j.contains("algebras") || !j["algebras"].is_array())
    throw std::invalid_argument("algebra document: missing 'algebras' array");
  const auto sig = signature_of(kind);
  if (j.contains("signature")) {
    Signature given;
    for (const auto& s : j["signature"]) given.push_back({s.at("name").get<std::string>(), s.at("arity").get<int>()});
    if (given != sig) throw std::invalid_argument("algebra document: signature does not match kind");
  }
  std::vector<std::pair<std::string, FinAlgebra>> out;
  for (const auto& e : j["algebras"]) {
    FinAlgebra a;
    a.kind = kind;
    a.size = e.at("carrier").get<int>();
    for (const auto& s : sig) {
      if (kind == AlgebraKind::pointed_set) {
        a.ops.push_back({e.at("basepoint").get<int>()});
      } else if (s.arity == 0) {
        a.ops.push_back({e.at("ops").at(s.name).get<int>()});
      } else {
        std::vector<int> table;
        for (const auto& row : e.at("ops").at(s.name))
          for (const auto& v : row) table.push_back(v.get<int>());
        a.ops.push_back(std::move(table));
      }
    }
    if (is_relational(kind)) {
      a.order.assign(idx(a.size * a.size), 0);
      for (const auto& p : e.at("order")) {
        const int x = p.at(0).get<int>(), y = p.at(1).get<int>();
        if (x < 0 || y < 0 || x >= a.size || y >= a.size) throw std::invalid_argument("algebra document: order pair out of range");
        a.order[idx(x * a.size + y)] = 1;
      }
    }
    if (!satisfies_axioms(a))
      throw std::invalid_argument("algebra document: '" + e.value("name", std::string("?")) + "' violates the axioms of " +
                                  std::string(to_string(kind)));
    out.emplace_back(e.value("name", std::string()), std::move(a));
  }
  return out;
}

}  // namespace extmorph
