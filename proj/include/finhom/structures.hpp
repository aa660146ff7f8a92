#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "finhom/rng.hpp"

// Finite relational structures with order-flavored relation kinds.
//
// Universes are always 0..N-1. Linear orders are stored strictly (the set of
// pairs x<y); the non-strict <= used by the derived-relation formulas is
// x<y or x=y. Equivalence relations are stored with the diagonal included.
// Circular relations are stored on distinct triples.

namespace finhom {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition / size-guard violations. The CLI maps these to exit code 2.
class guard_error : public error {
 public:
  using error::error;
};

enum class RelKind {
  LinearOrder,
  CircularOrder,
  Betweenness,
  Separation,
  Equivalence,
  Generic,
};

inline const char* kind_name(RelKind k) {
  switch (k) {
    case RelKind::LinearOrder: return "linear-order";
    case RelKind::CircularOrder: return "circular-order";
    case RelKind::Betweenness: return "betweenness";
    case RelKind::Separation: return "separation";
    case RelKind::Equivalence: return "equivalence";
    case RelKind::Generic: return "generic";
  }
  return "?";
}

inline RelKind kind_from_name(const std::string& s) {
  if (s == "linear-order") return RelKind::LinearOrder;
  if (s == "circular-order") return RelKind::CircularOrder;
  if (s == "betweenness") return RelKind::Betweenness;
  if (s == "separation") return RelKind::Separation;
  if (s == "equivalence") return RelKind::Equivalence;
  if (s == "generic") return RelKind::Generic;
  throw error("unknown relation kind: " + s);
}

struct RelSpec {
  std::string name;
  int arity = 2;
  RelKind kind = RelKind::Generic;
};

struct Signature {
  std::vector<RelSpec> relations;
  std::vector<std::string> preds;  // unary predicates
  std::vector<std::string> fns;    // unary functions

  int rel_index(const std::string& name) const {
    for (size_t i = 0; i < relations.size(); ++i)
      if (relations[i].name == name) return int(i);
    throw error("unknown relation symbol: " + name);
  }

  void validate() const {
    std::unordered_set<std::string> seen;
    for (auto& r : relations) {
      if (!seen.insert(r.name).second) throw error("duplicate symbol: " + r.name);
      switch (r.kind) {
        case RelKind::LinearOrder:
        case RelKind::Equivalence:
          if (r.arity != 2) throw error(r.name + ": kind requires arity 2");
          break;
        case RelKind::Betweenness:
        case RelKind::CircularOrder:
          if (r.arity != 3) throw error(r.name + ": kind requires arity 3");
          break;
        case RelKind::Separation:
          if (r.arity != 4) throw error(r.name + ": kind requires arity 4");
          break;
        case RelKind::Generic:
          if (r.arity < 1 || r.arity > 4) throw error(r.name + ": arity out of range");
          break;
      }
    }
    for (auto& p : preds)
      if (!seen.insert(p).second) throw error("duplicate symbol: " + p);
    for (auto& f : fns)
      if (!seen.insert(f).second) throw error("duplicate symbol: " + f);
  }

  bool operator==(const Signature& o) const {
    if (relations.size() != o.relations.size() || preds != o.preds || fns != o.fns)
      return false;
    for (size_t i = 0; i < relations.size(); ++i)
      if (relations[i].name != o.relations[i].name ||
          relations[i].arity != o.relations[i].arity ||
          relations[i].kind != o.relations[i].kind)
        return false;
    return true;
  }
};

constexpr int kMaxUniverse = 64;  // tuple keys pack 6 bits per index

using Tuple = std::vector<int>;

inline uint32_t encode_tuple(const int* t, int arity) {
  uint32_t k = 0;
  for (int i = 0; i < arity; ++i) k = (k << 6) | uint32_t(t[i]);
  return k;
}

// A relation table: sorted vector of packed tuples.
struct RelTable {
  int arity = 2;
  std::vector<uint32_t> keys;

  void add(const int* t) {
    keys.push_back(encode_tuple(t, arity));
  }
  void add(std::initializer_list<int> t) {
    keys.push_back(encode_tuple(t.begin(), arity));
  }
  void finish() {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }
  bool contains(const int* t) const {
    uint32_t k = encode_tuple(t, arity);
    return std::binary_search(keys.begin(), keys.end(), k);
  }
  bool contains(std::initializer_list<int> t) const { return contains(t.begin()); }
  size_t size() const { return keys.size(); }

  Tuple decode(size_t i) const {
    Tuple t(arity);
    uint32_t k = keys[i];
    for (int j = arity - 1; j >= 0; --j) {
      t[j] = int(k & 63u);
      k >>= 6;
    }
    return t;
  }
  bool operator==(const RelTable& o) const = default;
};

struct FinStruct {
  Signature sig;
  int size = 0;
  std::vector<RelTable> rel;             // parallel to sig.relations
  std::vector<std::vector<char>> pred;   // parallel to sig.preds, bit per element
  std::vector<std::vector<int>> fn;      // parallel to sig.fns, total maps

  static FinStruct empty(Signature s, int n) {
    if (n < 0 || n > kMaxUniverse) throw guard_error("universe size out of range");
    FinStruct r;
    r.sig = std::move(s);
    r.size = n;
    r.rel.resize(r.sig.relations.size());
    for (size_t i = 0; i < r.rel.size(); ++i) r.rel[i].arity = r.sig.relations[i].arity;
    r.pred.assign(r.sig.preds.size(), std::vector<char>(n, 0));
    r.fn.assign(r.sig.fns.size(), std::vector<int>(n, 0));
    for (auto& f : r.fn) std::iota(f.begin(), f.end(), 0);
    return r;
  }

  bool holds(int ri, const int* t) const { return rel[ri].contains(t); }
  bool holds(int ri, std::initializer_list<int> t) const { return rel[ri].contains(t); }

  void check_range(int x) const {
    if (x < 0 || x >= size) throw error("element out of range");
  }
};

// ---------------------------------------------------------------------------
// Order axioms

inline bool is_linear_order_table(const RelTable& t, int n) {
  if (t.arity != 2) return false;
  for (int x = 0; x < n; ++x) {
    int xx[2] = {x, x};
    if (t.contains(xx)) return false;
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      int xy[2] = {x, y}, yx[2] = {y, x};
      if (t.contains(xy) == t.contains(yx)) return false;
      for (int z = 0; z < n; ++z) {
        int yz[2] = {y, z}, xz[2] = {x, z};
        if (t.contains(xy) && t.contains(yz) && !t.contains(xz)) return false;
      }
    }
  }
  return true;
}

// Circular-order axioms on distinct triples; vacuous below size 3.
inline bool is_circular_order_table(const RelTable& t, int n) {
  if (t.arity != 3) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        int xyz[3] = {x, y, z}, xzy[3] = {x, z, y}, yzx[3] = {y, z, x};
        if (t.contains(xyz) == t.contains(xzy)) return false;
        if (t.contains(xyz) && !t.contains(yzx)) return false;
        for (int w = 0; w < n; ++w) {
          if (w == x || w == y || w == z) continue;
          int xzw[3] = {x, z, w}, xyw[3] = {x, y, w};
          if (t.contains(xyz) && t.contains(xzw) && !t.contains(xyw)) return false;
        }
      }
  return true;
}

inline bool is_equivalence_table(const RelTable& t, int n) {
  if (t.arity != 2) return false;
  for (int x = 0; x < n; ++x) {
    int xx[2] = {x, x};
    if (!t.contains(xx)) return false;
    for (int y = 0; y < n; ++y) {
      int xy[2] = {x, y}, yx[2] = {y, x};
      if (t.contains(xy) != t.contains(yx)) return false;
      for (int z = 0; z < n; ++z) {
        int yz[2] = {y, z}, xz[2] = {x, z};
        if (t.contains(xy) && t.contains(yz) && !t.contains(xz)) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Derived relations. The stored orders are strict; the formulas below use
// the reflexive closure. Derived tables include tuples with repeated
// entries whenever the defining formula holds of them.

namespace detail {
inline bool le(const RelTable& ord, int x, int y) {
  if (x == y) return true;
  int t[2] = {x, y};
  return ord.contains(t);
}
}  // namespace detail

inline RelTable derive_betweenness(const FinStruct& s, const std::string& order_symbol) {
  int ri = s.sig.rel_index(order_symbol);
  if (s.sig.relations[ri].kind != RelKind::LinearOrder)
    throw error(order_symbol + ": expected a linear-order symbol");
  const RelTable& ord = s.rel[ri];
  RelTable b;
  b.arity = 3;
  for (int x = 0; x < s.size; ++x)
    for (int y = 0; y < s.size; ++y)
      for (int z = 0; z < s.size; ++z) {
        using detail::le;
        if ((le(ord, x, y) && le(ord, y, z)) || (le(ord, z, y) && le(ord, y, x))) {
          int t[3] = {x, y, z};
          b.add(t);
        }
      }
  b.finish();
  return b;
}

inline RelTable derive_circular(const FinStruct& s, const std::string& order_symbol) {
  int ri = s.sig.rel_index(order_symbol);
  if (s.sig.relations[ri].kind != RelKind::LinearOrder)
    throw error(order_symbol + ": expected a linear-order symbol");
  const RelTable& ord = s.rel[ri];
  RelTable c;
  c.arity = 3;
  for (int x = 0; x < s.size; ++x)
    for (int y = 0; y < s.size; ++y)
      for (int z = 0; z < s.size; ++z) {
        using detail::le;
        if ((le(ord, x, y) && le(ord, y, z)) || (le(ord, z, x) && le(ord, x, y)) ||
            (le(ord, y, z) && le(ord, z, x))) {
          int t[3] = {x, y, z};
          c.add(t);
        }
      }
  c.finish();
  return c;
}

inline RelTable derive_separation(const FinStruct& s, const std::string& circ_symbol) {
  int ri = s.sig.rel_index(circ_symbol);
  if (s.sig.relations[ri].kind != RelKind::CircularOrder)
    throw error(circ_symbol + ": expected a circular-order symbol");
  const RelTable& c = s.rel[ri];
  auto C = [&](int a, int b, int d) {
    int t[3] = {a, b, d};
    return c.contains(t);
  };
  RelTable sep;
  sep.arity = 4;
  for (int x = 0; x < s.size; ++x)
    for (int y = 0; y < s.size; ++y)
      for (int z = 0; z < s.size; ++z)
        for (int t = 0; t < s.size; ++t) {
          bool d1 = C(x, y, z) && C(y, z, t) && C(z, t, x) && C(t, x, y);
          bool d2 = C(t, z, y) && C(z, y, x) && C(y, x, t) && C(x, t, z);
          if (d1 || d2) {
            int q[4] = {x, y, z, t};
            sep.add(q);
          }
        }
  sep.finish();
  return sep;
}

// Builds a circular-order table (strict triples) from a strict linear table.
inline RelTable circular_table_from_order(const RelTable& ord, int n) {
  RelTable c;
  c.arity = 3;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        using detail::le;
        if ((le(ord, x, y) && le(ord, y, z)) || (le(ord, z, x) && le(ord, x, y)) ||
            (le(ord, y, z) && le(ord, z, x))) {
          int t[3] = {x, y, z};
          c.add(t);
        }
      }
  c.finish();
  return c;
}

// ---------------------------------------------------------------------------
// Substructures. With unary functions in the signature, a substructure
// domain must be closed under the functions; `fn_closure` grows a set to
// the least closed superset (deterministic discovery order).

inline std::vector<int> fn_closure(const FinStruct& s, std::vector<int> seq) {
  std::vector<char> in(s.size, 0);
  std::vector<int> out;
  for (int x : seq) {
    s.check_range(x);
    if (!in[x]) {
      in[x] = 1;
      out.push_back(x);
    }
  }
  for (size_t i = 0; i < out.size(); ++i)
    for (const auto& f : s.fn) {
      int y = f[out[i]];
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  return out;
}

inline bool is_fn_closed(const FinStruct& s, const std::vector<int>& dom) {
  std::vector<char> in(s.size, 0);
  for (int x : dom) in[x] = 1;
  for (int x : dom)
    for (const auto& f : s.fn)
      if (!in[f[x]]) return false;
  return true;
}

// Induced substructure on `dom` (which must be fn-closed); element i of the
// result corresponds to dom[i].
inline FinStruct induced(const FinStruct& s, const std::vector<int>& dom) {
  FinStruct r = FinStruct::empty(s.sig, int(dom.size()));
  std::vector<int> pos(s.size, -1);
  for (size_t i = 0; i < dom.size(); ++i) {
    s.check_range(dom[i]);
    pos[dom[i]] = int(i);
  }
  for (size_t ri = 0; ri < s.rel.size(); ++ri) {
    const RelTable& t = s.rel[ri];
    RelTable& o = r.rel[ri];
    int a = t.arity;
    for (size_t k = 0; k < t.size(); ++k) {
      Tuple tup = t.decode(k);
      bool ok = true;
      int mapped[4];
      for (int j = 0; j < a; ++j) {
        if (pos[tup[j]] < 0) {
          ok = false;
          break;
        }
        mapped[j] = pos[tup[j]];
      }
      if (ok) o.add(mapped);
    }
    o.finish();
  }
  for (size_t pi = 0; pi < s.pred.size(); ++pi)
    for (size_t i = 0; i < dom.size(); ++i) r.pred[pi][i] = s.pred[pi][dom[i]];
  for (size_t fi = 0; fi < s.fn.size(); ++fi)
    for (size_t i = 0; i < dom.size(); ++i) {
      int y = s.fn[fi][dom[i]];
      if (pos[y] < 0) throw error("induced: domain not closed under functions");
      r.fn[fi][i] = pos[y];
    }
  return r;
}

// ---------------------------------------------------------------------------
// Partial isomorphisms. `map` sends elements of `a` to elements of `b`;
// entries of -1 are outside the domain. Preservation and reflection of
// every relation, predicate and function on the domain is required, and the
// domain / image must be fn-closed.

inline bool is_partial_iso(const FinStruct& a, const FinStruct& b,
                           const std::vector<int>& map) {
  if (!(a.sig == b.sig)) return false;
  std::vector<int> dom;
  std::vector<char> hit(b.size, 0);
  for (int x = 0; x < a.size; ++x)
    if (map[x] >= 0) {
      if (map[x] >= b.size || hit[map[x]]) return false;
      hit[map[x]] = 1;
      dom.push_back(x);
    }
  for (size_t pi = 0; pi < a.pred.size(); ++pi)
    for (int x : dom)
      if (a.pred[pi][x] != b.pred[pi][map[x]]) return false;
  for (size_t fi = 0; fi < a.fn.size(); ++fi)
    for (int x : dom) {
      int y = a.fn[fi][x];
      if (map[y] < 0 || b.fn[fi][map[x]] != map[y]) return false;
    }
  for (size_t ri = 0; ri < a.rel.size(); ++ri) {
    int ar = a.rel[ri].arity;
    std::vector<int> idx(ar, 0);
    int n = int(dom.size());
    if (n == 0) continue;
    while (true) {
      int t1[4], t2[4];
      for (int j = 0; j < ar; ++j) {
        t1[j] = dom[idx[j]];
        t2[j] = map[t1[j]];
      }
      if (a.rel[ri].contains(t1) != b.rel[ri].contains(t2)) return false;
      int j = ar - 1;
      while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
      if (j < 0) break;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Quantifier-free types. The fingerprint of (tuple / params) encodes the
// full atomic diagram of the function closure of tuple+params, listed in a
// deterministic discovery order, with tuple positions distinguished. Two
// tuples over the same parameter list get equal fingerprints exactly when
// the map sending one to the other and fixing the parameters pointwise
// extends to a partial isomorphism on the closures.

struct TypeFingerprint {
  std::vector<uint32_t> data;
  bool operator==(const TypeFingerprint& o) const = default;
  bool operator<(const TypeFingerprint& o) const { return data < o.data; }
  uint64_t hash() const {
    uint64_t h = 0x243f6a8885a308d3ULL;
    for (uint32_t v : data) h = hash_mix(h, v);
    return h;
  }
};

inline TypeFingerprint qf_type(const FinStruct& s, const std::vector<int>& tuple,
                               const std::vector<int>& params) {
  std::vector<int> seq;
  seq.reserve(tuple.size() + params.size());
  std::vector<int> first(s.size, -1);
  TypeFingerprint fp;
  fp.data.push_back(uint32_t(tuple.size()));
  fp.data.push_back(uint32_t(params.size()));
  auto push_elem = [&](int x) {
    s.check_range(x);
    if (first[x] < 0) {
      first[x] = int(seq.size());
      seq.push_back(x);
      fp.data.push_back(uint32_t(seq.size() - 1));  // fresh
    } else {
      fp.data.push_back(uint32_t(first[x]));  // repeats an earlier position
    }
  };
  for (int x : tuple) push_elem(x);
  for (int x : params) push_elem(x);
  // function closure, discovery order
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t fi = 0; fi < s.fn.size(); ++fi) {
      int y = s.fn[fi][seq[i]];
      if (first[y] < 0) {
        first[y] = int(seq.size());
        seq.push_back(y);
      }
    }
  int n = int(seq.size());
  fp.data.push_back(uint32_t(n));
  for (size_t pi = 0; pi < s.pred.size(); ++pi) {
    uint32_t bits = 0;
    for (int i = 0; i < n; ++i) bits |= uint32_t(s.pred[pi][seq[i]]) << (i & 31);
    // elements beyond 32 would overflow the mask; closures stay small
    if (n > 32) throw guard_error("qf_type: closure too large");
    fp.data.push_back(bits);
  }
  for (size_t fi = 0; fi < s.fn.size(); ++fi)
    for (int i = 0; i < n; ++i) fp.data.push_back(uint32_t(first[s.fn[fi][seq[i]]]));
  for (size_t ri = 0; ri < s.rel.size(); ++ri) {
    int ar = s.rel[ri].arity;
    std::vector<int> idx(ar, 0);
    uint32_t word = 0;
    int bit = 0;
    while (true) {
      int t[4];
      for (int j = 0; j < ar; ++j) t[j] = seq[idx[j]];
      word |= uint32_t(s.rel[ri].contains(t) ? 1 : 0) << bit;
      if (++bit == 32) {
        fp.data.push_back(word);
        word = 0;
        bit = 0;
      }
      int j = ar - 1;
      while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
      if (j < 0) break;
    }
    if (bit) fp.data.push_back(word);
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Canonical form: an isomorph-invariant relabeled copy. Colors are refined
// WL-style from invariant data, then a backtracking search picks the
// lexicographically least relabeled encoding. Structures containing a
// linear order refine to discrete colors immediately, so the common case is
// a single candidate labeling.

inline std::vector<uint64_t> encode_struct(const FinStruct& s) {
  std::vector<uint64_t> out;
  out.push_back(uint64_t(s.size));
  for (auto& t : s.rel) {
    out.push_back(uint64_t(t.size()));
    for (uint32_t k : t.keys) out.push_back(k);
  }
  for (auto& p : s.pred) {
    uint64_t bits = 0;
    for (int i = 0; i < s.size; ++i) bits |= uint64_t(p[i]) << i;
    out.push_back(bits);
  }
  for (auto& f : s.fn)
    for (int i = 0; i < s.size; ++i) out.push_back(uint64_t(f[i]));
  return out;
}

inline FinStruct relabel(const FinStruct& s, const std::vector<int>& lab) {
  // lab[old] = new
  FinStruct r = FinStruct::empty(s.sig, s.size);
  for (size_t ri = 0; ri < s.rel.size(); ++ri) {
    int a = s.rel[ri].arity;
    for (size_t k = 0; k < s.rel[ri].size(); ++k) {
      Tuple t = s.rel[ri].decode(k);
      int m[4];
      for (int j = 0; j < a; ++j) m[j] = lab[t[j]];
      r.rel[ri].add(m);
    }
    r.rel[ri].finish();
  }
  for (size_t pi = 0; pi < s.pred.size(); ++pi)
    for (int x = 0; x < s.size; ++x) r.pred[pi][lab[x]] = s.pred[pi][x];
  for (size_t fi = 0; fi < s.fn.size(); ++fi)
    for (int x = 0; x < s.size; ++x) r.fn[fi][lab[x]] = lab[s.fn[fi][x]];
  return r;
}

namespace detail {

inline std::vector<uint64_t> refine_colors(const FinStruct& s) {
  int n = s.size;
  std::vector<uint64_t> col(n, 1);
  for (int x = 0; x < n; ++x) {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto& p : s.pred) h = hash_mix(h, uint64_t(p[x]) + 2);
    col[x] = h;
  }
  for (int round = 0; round < n; ++round) {
    std::vector<uint64_t> nxt(n);
    for (int x = 0; x < n; ++x) {
      uint64_t h = hash_mix(0x2545f4914f6cdd1dULL, col[x]);
      for (size_t ri = 0; ri < s.rel.size(); ++ri) {
        int a = s.rel[ri].arity;
        std::vector<uint64_t> sig;
        for (size_t k = 0; k < s.rel[ri].size(); ++k) {
          Tuple t = s.rel[ri].decode(k);
          uint64_t th = ri + 1;
          bool involves = false;
          for (int j = 0; j < a; ++j) {
            if (t[j] == x) {
              th = hash_mix(th, 0xabcddcba0f0f0f0fULL + j);
              involves = true;
            } else {
              th = hash_mix(th, col[t[j]]);
            }
          }
          if (involves) sig.push_back(th);
        }
        std::sort(sig.begin(), sig.end());
        for (uint64_t v : sig) h = hash_mix(h, v);
        h = hash_mix(h, 0x5bd1e995);
      }
      for (size_t fi = 0; fi < s.fn.size(); ++fi) {
        h = hash_mix(h, col[s.fn[fi][x]]);
        uint64_t pre = 0;
        std::vector<uint64_t> ps;
        for (int y = 0; y < n; ++y)
          if (s.fn[fi][y] == x) ps.push_back(col[y]);
        std::sort(ps.begin(), ps.end());
        for (uint64_t v : ps) pre = hash_mix(pre, v);
        h = hash_mix(h, pre);
      }
      nxt[x] = h;
    }
    std::unordered_set<uint64_t> before(col.begin(), col.end());
    std::unordered_set<uint64_t> after(nxt.begin(), nxt.end());
    bool grew = after.size() > before.size();
    col.swap(nxt);
    if (!grew && round > 0) break;
  }
  return col;
}

struct CanonSearch {
  const FinStruct& s;
  std::vector<std::vector<int>> classes;  // candidate order, grouped by color
  std::vector<int> best_lab;
  std::vector<uint64_t> best_enc;

  explicit CanonSearch(const FinStruct& st) : s(st) {}

  void run() {
    auto col = refine_colors(s);
    std::map<uint64_t, std::vector<int>> by;
    for (int x = 0; x < s.size; ++x) by[col[x]].push_back(x);
    for (auto& [c, v] : by) classes.push_back(v);
    std::vector<int> lab(s.size, -1);
    dfs(0, 0, lab);
  }

  void dfs(size_t ci, int next, std::vector<int>& lab) {
    if (ci == classes.size()) {
      FinStruct cand = relabel(s, lab);
      auto enc = encode_struct(cand);
      if (best_enc.empty() || enc < best_enc) {
        best_enc = std::move(enc);
        best_lab = lab;
      }
      return;
    }
    auto& cls = classes[ci];
    // permute within the class
    std::vector<int> order(cls);
    std::sort(order.begin(), order.end());
    do {
      for (size_t i = 0; i < order.size(); ++i) lab[order[i]] = next + int(i);
      dfs(ci + 1, next + int(order.size()), lab);
      for (int x : order) lab[x] = -1;
    } while (std::next_permutation(order.begin(), order.end()));
  }
};

}  // namespace detail

struct Canonical {
  FinStruct structure;
  std::vector<int> relabel;  // relabel[old] = new, the certificate
};

inline Canonical canonical_form(const FinStruct& s) {
  detail::CanonSearch cs(s);
  cs.run();
  Canonical c;
  c.relabel = cs.best_lab;
  c.structure = relabel(s, cs.best_lab);
  return c;
}

inline std::vector<uint64_t> canonical_key(const FinStruct& s) {
  detail::CanonSearch cs(s);
  cs.run();
  return cs.best_enc;
}

struct VecHash {
  size_t operator()(const std::vector<uint64_t>& v) const {
    uint64_t h = 14695981039346656037ULL;
    for (uint64_t x : v) h = hash_mix(h, x);
    return size_t(h);
  }
};

}  // namespace finhom
