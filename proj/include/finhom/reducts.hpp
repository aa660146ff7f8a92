#pragma once

#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "finhom/fraisse.hpp"
#include "finhom/structures.hpp"

// Reducts of the generic n-order structure, named by triples (V_l, V_c, G):
// which orders survive as linear orders, which as circular orders, and a
// subgroup G of Z_2 wr (S_{m_l} x S_{m_c}) acting on the surviving order
// classes and their reverses. Distinctness of reducts is certified by
// censuses of G-canonicalized 4-tuple patterns on a generic approximation.

namespace finhom {

using Perm = std::vector<int>;

inline Perm perm_identity(int degree) {
  Perm p(degree);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline Perm perm_compose(const Perm& a, const Perm& b) {
  // (a*b)(x) = a(b(x))
  Perm r(a.size());
  for (size_t x = 0; x < a.size(); ++x) r[x] = a[b[x]];
  return r;
}

inline Perm perm_inverse(const Perm& a) {
  Perm r(a.size());
  for (size_t x = 0; x < a.size(); ++x) r[a[x]] = int(x);
  return r;
}

struct PermGroup {
  int degree = 0;
  std::vector<Perm> generators;
  std::vector<Perm> elements;  // sorted; closed under composition/inverse

  size_t order() const { return elements.size(); }
};

inline PermGroup group_closure(int degree, std::vector<Perm> gens, size_t cap = 100000) {
  PermGroup g;
  g.degree = degree;
  g.generators = gens;
  std::set<Perm> seen;
  std::vector<Perm> frontier{perm_identity(degree)};
  seen.insert(frontier[0]);
  for (size_t i = 0; i < frontier.size(); ++i) {
    for (auto& gen : gens) {
      Perm nxt = perm_compose(gen, frontier[i]);
      if (seen.insert(nxt).second) {
        frontier.push_back(nxt);
        if (seen.size() > cap) throw guard_error("group closure exceeds cap");
      }
    }
  }
  g.elements.assign(seen.begin(), seen.end());
  return g;
}

// Z_2 wr (S_ml x S_mc), acting on 2(ml+mc) signed points: point 2c is the
// order of coordinate c, point 2c+1 its reverse. Generators: a flip per
// coordinate and adjacent coordinate swaps within each block.
inline PermGroup wreath_product(int ml, int mc) {
  if (ml < 0 || mc < 0 || ml + mc > 4) throw guard_error("wreath_product capped at 4 coordinates");
  int m = ml + mc;
  int deg = 2 * m;
  std::vector<Perm> gens;
  for (int c = 0; c < m; ++c) {
    Perm f = perm_identity(deg);
    std::swap(f[2 * c], f[2 * c + 1]);
    gens.push_back(f);
  }
  auto swap_coords = [&](int c, int d) {
    Perm p = perm_identity(deg);
    std::swap(p[2 * c], p[2 * d]);
    std::swap(p[2 * c + 1], p[2 * d + 1]);
    return p;
  };
  for (int c = 0; c + 1 < ml; ++c) gens.push_back(swap_coords(c, c + 1));
  for (int c = ml; c + 1 < m; ++c) gens.push_back(swap_coords(c, c + 1));
  return group_closure(deg, gens);
}

// All subgroups (literally all, not up to conjugacy).
inline std::vector<PermGroup> enumerate_subgroups(const PermGroup& g) {
  if (g.order() > 10000) throw guard_error("subgroup enumeration capped at order 10^4");
  int n = int(g.order());
  std::map<Perm, int> index;
  for (int i = 0; i < n; ++i) index[g.elements[i]] = i;
  std::vector<std::vector<int>> comp(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      comp[i][j] = index.at(perm_compose(g.elements[i], g.elements[j]));
  int id = index.at(perm_identity(g.degree));

  auto close = [&](std::vector<int> seed) {
    std::vector<char> in(n, 0);
    std::vector<int> members;
    auto add = [&](int x) {
      if (!in[x]) {
        in[x] = 1;
        members.push_back(x);
      }
    };
    add(id);
    for (int x : seed) add(x);
    for (size_t i = 0; i < members.size(); ++i)
      for (size_t j = 0; j < members.size(); ++j) {
        add(comp[members[i]][members[j]]);
        if (i != j) add(comp[members[j]][members[i]]);
      }
    std::sort(members.begin(), members.end());
    return members;
  };

  std::set<std::vector<int>> found;
  std::vector<std::vector<int>> queue;
  auto trivial = close({});
  found.insert(trivial);
  queue.push_back(trivial);
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    std::vector<int> h = queue[qi];
    std::vector<char> in(n, 0);
    for (int x : h) in[x] = 1;
    for (int gx = 0; gx < n; ++gx) {
      if (in[gx]) continue;
      auto ext = h;
      ext.push_back(gx);
      auto k = close(ext);
      if (found.insert(k).second) queue.push_back(k);
    }
  }
  std::vector<PermGroup> out;
  for (auto& members : found) {
    PermGroup h;
    h.degree = g.degree;
    for (int x : members) h.elements.push_back(g.elements[x]);
    h.generators = h.elements;  // explicit element list doubles as generators
    out.push_back(std::move(h));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reduct descriptors

struct ReductDescriptor {
  int n = 1;
  std::vector<int> v_l, v_c;  // 1-based order indices, disjoint
  PermGroup group;            // subgroup of wreath_product(|v_l|, |v_c|)
};

struct ReductEnumeration {
  std::vector<ReductDescriptor> reducts;
};

inline ReductEnumeration enumerate_reducts(int n) {
  if (n < 1 || n > 3) throw guard_error("enumerate_reducts capped at n <= 3");
  ReductEnumeration out;
  std::map<std::pair<int, int>, std::vector<PermGroup>> subgroup_cache;
  std::vector<int> assign(n, 0);  // 0 = dropped, 1 = linear, 2 = circular
  while (true) {
    std::vector<int> vl, vc;
    for (int i = 0; i < n; ++i) {
      if (assign[i] == 1) vl.push_back(i + 1);
      if (assign[i] == 2) vc.push_back(i + 1);
    }
    auto key = std::make_pair(int(vl.size()), int(vc.size()));
    auto it = subgroup_cache.find(key);
    if (it == subgroup_cache.end())
      it = subgroup_cache.emplace(key, enumerate_subgroups(wreath_product(key.first, key.second)))
               .first;
    for (auto& g : it->second) {
      ReductDescriptor d;
      d.n = n;
      d.v_l = vl;
      d.v_c = vc;
      d.group = g;
      out.reducts.push_back(std::move(d));
    }
    int i = n - 1;
    while (i >= 0 && ++assign[i] == 3) assign[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Realization on a generic approximation: the derived structure keeps the
// chosen linear orders and the circular closures of the chosen circular
// ones; the census canonicalizes each 4-tuple's per-coordinate patterns
// over the action of G (flips reverse a pattern, block permutations shuffle
// coordinates).

namespace detail {

// linear pattern of 4 distinct elements: rank vector packed in base 4
inline int linear_pattern(const std::array<int, 4>& ranks) {
  int code = 0;
  for (int i = 0; i < 4; ++i) {
    int r = 0;
    for (int j = 0; j < 4; ++j)
      if (ranks[j] < ranks[i]) ++r;
    code = code * 4 + r;
  }
  return code;
}

inline int reverse_linear_pattern(int code) {
  int digits[4];
  for (int i = 3; i >= 0; --i) {
    digits[i] = code % 4;
    code /= 4;
  }
  int out = 0;
  for (int i = 0; i < 4; ++i) out = out * 4 + (3 - digits[i]);
  return out;
}

// circular pattern: positions around the circle relative to the first
// element (first digit always 0)
inline int circular_pattern(const std::array<int, 4>& ranks, int modulus) {
  std::array<int, 4> rel;
  for (int i = 0; i < 4; ++i) rel[i] = ((ranks[i] - ranks[0]) % modulus + modulus) % modulus;
  int code = 0;
  for (int i = 0; i < 4; ++i) {
    int r = 0;
    for (int j = 0; j < 4; ++j)
      if (rel[j] < rel[i]) ++r;
    code = code * 4 + r;
  }
  return code;
}

inline int reverse_circular_pattern(int code) {
  // reversing orientation: relative position p (p > 0) becomes modulus - p;
  // on rank digits (0..3 with first 0): nonzero digits map r -> 4 - r
  int digits[4];
  for (int i = 3; i >= 0; --i) {
    digits[i] = code % 4;
    code /= 4;
  }
  int out = 0;
  for (int i = 0; i < 4; ++i) out = out * 4 + (digits[i] == 0 ? 0 : 4 - digits[i]);
  return out;
}

// decode a wreath element into (coordinate map, flips)
inline void decode_wreath(const Perm& g, int m, std::vector<int>& rho, std::vector<char>& flip) {
  rho.resize(m);
  flip.resize(m);
  for (int c = 0; c < m; ++c) {
    int img = g[2 * c];
    rho[c] = img / 2;
    flip[c] = img % 2;
  }
}

}  // namespace detail

struct ReductCensus {
  // canonical multiset of G-canonicalized pattern tuples
  std::vector<std::pair<uint64_t, uint64_t>> entries;  // (pattern code, count)
  uint64_t hash = 0;
  bool operator==(const ReductCensus& o) const { return entries == o.entries; }
};

struct ReductRealization {
  FinStruct derived;
  ReductCensus census;
};

inline void expect_orders_generic(const ReductDescriptor& d, const FinStruct& approx) {
  ClassRule rule = make_orders_class(d.n);
  if (!(approx.sig == rule.sig))
    throw error("realize_reduct: approximation is not an n-orders structure of matching n");
  if (approx.size < 12) throw guard_error("realize_reduct: approximation too small");
}

// Per-tuple pattern codes for every order of the approximation, shared by
// all descriptors: patterns[t][i] for tuple t and order i.
inline std::vector<std::vector<int>> tuple_patterns(const FinStruct& approx, int n,
                                                    std::vector<std::array<int, 4>>* tuples_out =
                                                        nullptr) {
  std::vector<std::vector<int>> ranks(n, std::vector<int>(approx.size, 0));
  for (int i = 0; i < n; ++i)
    for (size_t k = 0; k < approx.rel[i].size(); ++k) {
      Tuple t = approx.rel[i].decode(k);
      ++ranks[i][t[1]];  // in-degree of the strict order = rank
    }
  std::vector<std::vector<int>> out;
  std::array<int, 4> tup;
  std::function<void(int)> rec = [&](int i) {
    if (i == 4) {
      std::vector<int> pat(2 * n);
      for (int o = 0; o < n; ++o) {
        std::array<int, 4> r;
        for (int j = 0; j < 4; ++j) r[j] = ranks[o][tup[j]];
        pat[2 * o] = detail::linear_pattern(r);
        pat[2 * o + 1] = detail::circular_pattern(r, approx.size);
      }
      out.push_back(std::move(pat));
      if (tuples_out) tuples_out->push_back(tup);
      return;
    }
    for (int x = 0; x < approx.size; ++x) {
      bool dup = false;
      for (int j = 0; j < i; ++j)
        if (tup[j] == x) dup = true;
      if (!dup) {
        tup[i] = x;
        rec(i + 1);
      }
    }
  };
  rec(0);
  return out;
}

// canonical (G-minimal) code of one tuple for a descriptor
inline uint64_t reduct_tuple_code(const ReductDescriptor& d, const std::vector<int>& pat) {
  int ml = int(d.v_l.size()), mc = int(d.v_c.size());
  int m = ml + mc;
  // data per kept coordinate: linear patterns for v_l, circular for v_c
  std::vector<int> data(m);
  for (int c = 0; c < ml; ++c) data[c] = pat[2 * (d.v_l[c] - 1)];
  for (int c = 0; c < mc; ++c) data[ml + c] = pat[2 * (d.v_c[c] - 1) + 1];
  uint64_t best = ~uint64_t(0);
  std::vector<int> rho;
  std::vector<char> flip;
  for (auto& g : d.group.elements) {
    detail::decode_wreath(g, m, rho, flip);
    uint64_t code = 1;
    std::vector<int> moved(m);
    for (int c = 0; c < m; ++c) {
      int v = data[c];
      if (flip[c])
        v = c < ml ? detail::reverse_linear_pattern(v) : detail::reverse_circular_pattern(v);
      moved[rho[c]] = v;
    }
    for (int c = 0; c < m; ++c) code = code * 257 + uint64_t(moved[c]);
    best = std::min(best, code);
  }
  if (d.group.elements.empty()) {  // trivial group stored without elements
    uint64_t code = 1;
    for (int c = 0; c < m; ++c) code = code * 257 + uint64_t(data[c]);
    best = code;
  }
  return best;
}

inline ReductCensus reduct_census(const ReductDescriptor& d,
                                  const std::vector<std::vector<int>>& patterns) {
  std::unordered_map<uint64_t, uint64_t> counts;
  for (auto& pat : patterns) ++counts[reduct_tuple_code(d, pat)];
  ReductCensus c;
  c.entries.assign(counts.begin(), counts.end());
  std::sort(c.entries.begin(), c.entries.end());
  uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto& [k, v] : c.entries) {
    h = hash_mix(h, k);
    h = hash_mix(h, v);
  }
  c.hash = h;
  return c;
}

inline ReductRealization realize_reduct(const ReductDescriptor& d, const FinStruct& approx) {
  expect_orders_generic(d, approx);
  ReductRealization r;
  Signature sig;
  for (int i : d.v_l)
    sig.relations.push_back({"le" + std::to_string(i), 2, RelKind::LinearOrder});
  for (int i : d.v_c)
    sig.relations.push_back({"C" + std::to_string(i), 3, RelKind::CircularOrder});
  r.derived = FinStruct::empty(sig, approx.size);
  int at = 0;
  for (int i : d.v_l) r.derived.rel[at++] = approx.rel[i - 1];
  for (int i : d.v_c)
    r.derived.rel[at++] = circular_table_from_order(approx.rel[i - 1], approx.size);
  auto patterns = tuple_patterns(approx, d.n);
  r.census = reduct_census(d, patterns);
  return r;
}

}  // namespace finhom
