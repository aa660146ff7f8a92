#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finhom/structures.hpp"

// Gluing of overlapping order fragments. An overlap identifies the last
// `len` elements of fragment a with the first `len` of fragment b, in
// order. Connected groups of fragments assemble into a single linear or
// circular order: linear when the identifications admit a global integer
// position, circular when they only close up modulo a circumference.

namespace finhom {

struct Fragment {
  int id = 0;
  int size = 0;
};

struct Overlap {
  int a = 0, b = 0;
  int a_from = 0;  // start index of the end segment of a (= size_a - len)
  int b_to = 0;    // start index of the initial segment of b (= 0)
  int len = 0;
};

struct IntertwiningSpec {
  std::vector<Fragment> fragments;
  std::vector<Overlap> overlaps;

  int frag_index(int id) const {
    for (size_t i = 0; i < fragments.size(); ++i)
      if (fragments[i].id == id) return int(i);
    throw error("unknown fragment id " + std::to_string(id));
  }
};

struct Violation {
  std::string kind;
  std::string detail;
};

class glue_error : public error {
 public:
  using error::error;
};

namespace detail {

struct DSU {
  std::vector<int> p;
  explicit DSU(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Element classes, fragment components, and integer positions (a BFS
// potential: +1 along a fragment, 0 across an identification). Cycles with
// nonzero net displacement wrap; their gcd is the component circumference.
struct Placement {
  std::vector<int> base;  // element range start per fragment index
  int total = 0;
  DSU classes{0};
  DSU fcomp{0};
  std::vector<long long> pos;
  std::vector<long long> wrap;  // per fragment index, keyed at component root

  int elem(const IntertwiningSpec& sp, int frag_idx, int idx) const {
    return base[frag_idx] + idx;
  }
  long long circumference(int frag_root) const {
    long long w = wrap[frag_root];
    return w < 0 ? -w : w;
  }
};

inline Placement place(const IntertwiningSpec& sp) {
  Placement pl;
  int nf = int(sp.fragments.size());
  for (auto& f : sp.fragments) {
    pl.base.push_back(pl.total);
    pl.total += f.size;
  }
  pl.classes = DSU(pl.total);
  pl.fcomp = DSU(nf);
  for (auto& o : sp.overlaps) {
    int fa = sp.frag_index(o.a), fb = sp.frag_index(o.b);
    pl.fcomp.unite(fa, fb);
    for (int t = 0; t < o.len; ++t)
      pl.classes.unite(pl.base[fa] + o.a_from + t, pl.base[fb] + o.b_to + t);
  }
  std::vector<std::vector<std::pair<int, int>>> adj(pl.total);
  for (int fi = 0; fi < nf; ++fi)
    for (int t = 0; t + 1 < sp.fragments[fi].size; ++t) {
      int u = pl.base[fi] + t;
      adj[u].push_back({u + 1, 1});
      adj[u + 1].push_back({u, -1});
    }
  for (auto& o : sp.overlaps) {
    int fa = sp.frag_index(o.a), fb = sp.frag_index(o.b);
    for (int t = 0; t < o.len; ++t) {
      int u = pl.base[fa] + o.a_from + t, v = pl.base[fb] + o.b_to + t;
      adj[u].push_back({v, 0});
      adj[v].push_back({u, 0});
    }
  }
  pl.pos.assign(pl.total, 0);
  pl.wrap.assign(nf, 0);
  std::vector<char> seen(pl.total, 0);
  auto gcd = [](long long a, long long b) {
    while (b) {
      long long t = a % b;
      a = b;
      b = t;
    }
    return a < 0 ? -a : a;
  };
  std::vector<int> frag_of(pl.total);
  for (int fi = 0; fi < nf; ++fi)
    for (int t = 0; t < sp.fragments[fi].size; ++t) frag_of[pl.base[fi] + t] = fi;
  for (int start = 0; start < pl.total; ++start) {
    if (seen[start]) continue;
    std::deque<int> q{start};
    seen[start] = 1;
    pl.pos[start] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (auto [v, d] : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          pl.pos[v] = pl.pos[u] + d;
          q.push_back(v);
        } else {
          long long defect = pl.pos[u] + d - pl.pos[v];
          if (defect != 0) {
            int root = pl.fcomp.find(frag_of[u]);
            pl.wrap[root] = gcd(pl.wrap[root], defect);
          }
        }
      }
    }
  }
  return pl;
}

inline std::optional<int> overlap_len(const IntertwiningSpec& sp, int a, int b) {
  for (auto& o : sp.overlaps)
    if (o.a == a && o.b == b) return o.len;
  return std::nullopt;
}

}  // namespace detail

inline std::vector<Violation> validate_spec(const IntertwiningSpec& sp) {
  std::vector<Violation> out;
  std::map<int, int> sizes;
  for (auto& f : sp.fragments) {
    if (f.size < 1)
      out.push_back({"fragment", "fragment " + std::to_string(f.id) + " is empty"});
    if (sizes.count(f.id))
      out.push_back({"fragment", "duplicate fragment id " + std::to_string(f.id)});
    sizes[f.id] = f.size;
  }
  for (auto& o : sp.overlaps) {
    std::string tag = std::to_string(o.a) + "->" + std::to_string(o.b);
    if (!sizes.count(o.a) || !sizes.count(o.b)) {
      out.push_back({"overlap", tag + ": unknown fragment"});
      continue;
    }
    if (o.a == o.b) {
      out.push_back(
          {"self-overlap", "fragment " + std::to_string(o.a) + " identified with itself"});
      continue;
    }
    if (o.len < 1) out.push_back({"overlap", tag + ": empty overlap"});
    // containment (an overlap swallowing a whole fragment) requires
    // pre-merging and is rejected here
    if (o.len >= sizes[o.a] || o.len >= sizes[o.b])
      out.push_back({"containment", tag + ": overlap covers a whole fragment"});
    if (o.a_from != sizes[o.a] - o.len)
      out.push_back({"overlap", tag + ": aFrom is not the end segment start"});
    if (o.b_to != 0) out.push_back({"overlap", tag + ": bTo must be 0"});
  }
  if (!out.empty()) return out;

  detail::Placement pl = detail::place(sp);
  int nf = int(sp.fragments.size());

  // Composition consistency: identifications must never merge two distinct
  // elements of one fragment.
  for (int fi = 0; fi < nf; ++fi) {
    std::map<int, int> seen;
    for (int t = 0; t < sp.fragments[fi].size; ++t) {
      int c = pl.classes.find(pl.base[fi] + t);
      auto [it, fresh] = seen.emplace(c, t);
      if (!fresh)
        out.push_back({"composition", "fragment " + std::to_string(sp.fragments[fi].id) +
                                          ": elements " + std::to_string(it->second) +
                                          " and " + std::to_string(t) + " collapse"});
    }
  }

  // End-point uniqueness: every in-overlap of a fragment induces the cut
  // just below its first element, every out-overlap the cut just above its
  // last; all witnesses of the same side must land on the same glued
  // position (modulo the circumference on wrapped components).
  auto same_position = [&](int root, long long p, long long q) {
    long long c = pl.circumference(root);
    return c == 0 ? p == q : ((p - q) % c + c) % c == 0;
  };
  for (int fi = 0; fi < nf; ++fi) {
    int id = sp.fragments[fi].id;
    int root = pl.fcomp.find(fi);
    std::vector<long long> lefts, rights;
    for (auto& o : sp.overlaps) {
      if (o.b == id && o.a_from >= 1)
        lefts.push_back(pl.pos[pl.base[sp.frag_index(o.a)] + o.a_from - 1]);
      if (o.a == id) {
        int fb = sp.frag_index(o.b);
        if (o.len < sp.fragments[fb].size)
          rights.push_back(pl.pos[pl.base[fb] + o.len]);
      }
    }
    for (size_t i = 1; i < lefts.size(); ++i)
      if (!same_position(root, lefts[0], lefts[i])) {
        out.push_back({"left-endpoint",
                       "fragment " + std::to_string(id) + " has two left end-points"});
        break;
      }
    for (size_t i = 1; i < rights.size(); ++i)
      if (!same_position(root, rights[0], rights[i])) {
        out.push_back({"right-endpoint",
                       "fragment " + std::to_string(id) + " has two right end-points"});
        break;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paths: sequences of fragments chained by overlaps, with the two
// simplicity constraints (no containments -- ruled out at validation --
// and no backwards overlap from a later member onto an earlier one).

struct GluePath {
  std::vector<int> fragments;  // fragment ids
  bool closes = false;         // a closing overlap last -> first exists
  // displacement of the last fragment's origin against the first's (for
  // closed chains: the circumference)
  int net_shift = 0;
};

// All simple overlap-chains from fragment `from` to fragment `to`. With
// from == to the result is the set of simple closed chains: chains whose
// final member carries the closing overlap back onto the first member (the
// circular witnesses); the closing edge is exempt from the backwards-
// overlap bullet, every other pair is checked.
inline std::vector<GluePath> find_simple_paths(const IntertwiningSpec& sp, int from, int to) {
  std::vector<GluePath> out;
  bool cyclic = from == to;
  std::vector<int> cur{from};
  std::function<void(int, int)> dfs = [&](int at, int shift) {
    if (!cyclic && at == to) {
      GluePath p;
      p.fragments = cur;
      p.net_shift = shift;
      out.push_back(p);
      return;  // extending past `to` can never end at `to` again
    }
    for (auto& o : sp.overlaps) {
      if (o.a != at) continue;
      bool seen = false;
      for (int f : cur)
        if (f == o.b) seen = true;
      if (seen) continue;
      bool backward = false;
      size_t lo = cyclic ? 1 : 0;
      for (size_t i = lo; i < cur.size(); ++i)
        if (detail::overlap_len(sp, o.b, cur[i]).has_value()) backward = true;
      if (backward) continue;
      int step = sp.fragments[sp.frag_index(o.a)].size - o.len;
      auto closing = detail::overlap_len(sp, o.b, from);
      cur.push_back(o.b);
      if (cyclic && closing.has_value()) {
        GluePath p;
        p.fragments = cur;
        int fb = sp.frag_index(o.b);
        p.net_shift = shift + step + sp.fragments[fb].size - *closing;
        p.closes = true;
        out.push_back(p);
      } else {
        dfs(o.b, shift + step);
      }
      cur.pop_back();
    }
  };
  dfs(from, 0);
  return out;
}

inline bool has_simple_cycle(const IntertwiningSpec& sp, int from) {
  return !find_simple_paths(sp, from, from).empty();
}

// ---------------------------------------------------------------------------
// Gluing

struct GluedComponent {
  enum Kind { Linear, Circular } kind = Linear;
  std::vector<int> members;  // fragment ids, ordered by where they start
  // element classes in induced order (positions 0..k-1, cyclic if circular)
  std::vector<std::vector<std::pair<int, int>>> classes;  // (fragment id, index)
};

inline std::vector<GluedComponent> glue(const IntertwiningSpec& sp) {
  {
    auto v = validate_spec(sp);
    if (!v.empty()) throw glue_error("glue: invalid spec: " + v.front().kind);
  }
  detail::Placement pl = detail::place(sp);
  int nf = int(sp.fragments.size());
  std::vector<GluedComponent> out;
  for (int root = 0; root < nf; ++root) {
    if (pl.fcomp.find(root) != root) continue;
    GluedComponent comp;
    long long g = pl.circumference(root);
    comp.kind = g != 0 ? GluedComponent::Circular : GluedComponent::Linear;
    if (comp.kind == GluedComponent::Circular && g < 3)
      throw glue_error("glue: order axioms fail (degenerate circular component)");
    std::map<int, long long> class_pos;
    std::map<int, std::vector<std::pair<int, int>>> class_elems;
    long long minpos = 0;
    bool first = true;
    for (int fi = 0; fi < nf; ++fi) {
      if (pl.fcomp.find(fi) != root) continue;
      for (int t = 0; t < sp.fragments[fi].size; ++t) {
        int e = pl.base[fi] + t;
        int c = pl.classes.find(e);
        long long p = pl.pos[e];
        auto [it, fresh] = class_pos.emplace(c, p);
        if (!fresh) {
          long long diff = it->second - p;
          bool ok = comp.kind == GluedComponent::Circular ? diff % g == 0 : diff == 0;
          if (!ok) throw glue_error("glue: order axioms fail (inconsistent positions)");
        }
        class_elems[c].push_back({sp.fragments[fi].id, t});
        if (first || p < minpos) minpos = p;
        first = false;
      }
    }
    if (comp.kind == GluedComponent::Circular) {
      std::map<long long, int> by_residue;
      for (auto& [c, p] : class_pos) {
        long long r = ((p - minpos) % g + g) % g;
        auto [it, fresh] = by_residue.emplace(r, c);
        if (!fresh) throw glue_error("glue: order axioms fail (residue collision)");
      }
      if (int(by_residue.size()) != int(g))
        throw glue_error("glue: order axioms fail (missing residues)");
      for (auto& [r, c] : by_residue) comp.classes.push_back(class_elems[c]);
    } else {
      std::map<long long, int> by_pos;
      for (auto& [c, p] : class_pos) {
        auto [it, fresh] = by_pos.emplace(p, c);
        if (!fresh) throw glue_error("glue: order axioms fail (position collision)");
      }
      long long expect = by_pos.begin()->first;
      for (auto& [p, c] : by_pos) {
        if (p != expect++) throw glue_error("glue: order axioms fail (position gap)");
        comp.classes.push_back(class_elems[c]);
      }
    }
    std::vector<std::pair<long long, int>> starts;
    for (int fi = 0; fi < nf; ++fi) {
      if (pl.fcomp.find(fi) != root) continue;
      long long p = pl.pos[pl.base[fi]];
      if (comp.kind == GluedComponent::Circular) p = ((p - minpos) % g + g) % g;
      starts.push_back({p, sp.fragments[fi].id});
    }
    std::sort(starts.begin(), starts.end());
    for (auto& [p, id] : starts) comp.members.push_back(id);
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(), [](const GluedComponent& a, const GluedComponent& b) {
    return a.members < b.members;
  });
  return out;
}

// Components re-entered as plain fragments glue to themselves.
inline IntertwiningSpec components_as_spec(const std::vector<GluedComponent>& comps) {
  IntertwiningSpec sp;
  int id = 0;
  for (auto& c : comps) sp.fragments.push_back({id++, int(c.classes.size())});
  return sp;
}

}  // namespace finhom
