#pragma once

#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finhom/rng.hpp"
#include "finhom/structures.hpp"

// Finite covers of circular orders and their local equivalence relations.
//
// A cover has a circular base 0..N-1. In the plain case (one class) it is a
// connected k-fold cover S(k): the total space is Z_{N*k}, the projection is
// w mod N, and the section assigns each base point a sheet. The derived
// relation R(a,b) holds when the lifted arc from s(a) to s(b) stays within
// one period, i.e. no base point appears twice on the closed lifted arc.
// The partitioned case carries m dense classes, each with its own cover.

namespace finhom {

struct CoverStruct {
  int N = 0;                  // base size
  std::vector<int> ks;        // degree per class
  std::vector<int> cls;      // class of each base point
  std::vector<int> sheet;    // sheet of each base point within its class

  int degree() const { return ks.size() == 1 ? ks[0] : 0; }
  int num_classes() const { return int(ks.size()); }

  // positions of base point within its class (count of same-class points
  // before it) and class sizes
  std::vector<int> class_sizes() const {
    std::vector<int> sz(ks.size(), 0);
    for (int v = 0; v < N; ++v) ++sz[cls[v]];
    return sz;
  }
  std::vector<int> class_positions() const {
    std::vector<int> pos(N, 0), cnt(ks.size(), 0);
    for (int v = 0; v < N; ++v) pos[v] = cnt[cls[v]]++;
    return pos;
  }

  void validate() const {
    if (N < 0 || int(cls.size()) != N || int(sheet.size()) != N)
      throw error("cover: inconsistent arrays");
    for (int v = 0; v < N; ++v) {
      if (cls[v] < 0 || cls[v] >= int(ks.size())) throw error("cover: bad class");
      if (sheet[v] < 0 || sheet[v] >= ks[cls[v]]) throw error("cover: bad sheet");
    }
  }
};

// The arc distance from a to b going forward (1..N-1 for distinct points).
inline int arc_dist(int N, int a, int b) { return ((b - a) % N + N) % N; }

// Plain S(k) relation R. Defined for single-class covers.
inline bool cover_rel(const CoverStruct& c, int a, int b) {
  if (c.num_classes() != 1) throw error("cover_rel needs a single-class cover");
  if (a == b) return false;
  int k = c.ks[0];
  long long period = (long long)c.N * k;
  long long wa = a + (long long)c.N * c.sheet[a];
  long long wb = b + (long long)c.N * c.sheet[b];
  long long d = ((wb - wa) % period + period) % period;
  return d < c.N;  // the lifted arc does not complete a period
}

inline RelTable cover_rel_table(const CoverStruct& c) {
  RelTable t;
  t.arity = 2;
  for (int a = 0; a < c.N; ++a)
    for (int b = 0; b < c.N; ++b)
      if (a != b && cover_rel(c, a, b)) t.add({a, b});
  t.finish();
  return t;
}

// Generic section: within every window of width ceil(N/k) all k sheets
// appear. Built greedily with seeded tie-breaking.
inline CoverStruct build_cover(int N, int k, uint64_t seed, bool generic = true) {
  if (N < 1 || k < 1) throw guard_error("build_cover: N, k >= 1 required");
  if (generic && N < 3 * k) throw guard_error("build_cover: generic sections need N >= 3k");
  CoverStruct c;
  c.N = N;
  c.ks = {k};
  c.cls.assign(N, 0);
  c.sheet.assign(N, 0);
  if (k == 1 || !generic) {
    SplitMix64 rng(seed);
    for (int v = 0; v < N; ++v) c.sheet[v] = generic ? 0 : int(rng.below(k));
    if (!generic) return c;
  }
  int window = (N + k - 1) / k;
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool ok = true;
    for (int v = 0; v < N && ok; ++v) {
      // candidate sheets not breaking any window ending here (cyclically
      // the tail windows are rechecked below)
      std::vector<int> cand;
      for (int s = 0; s < k; ++s) {
        bool fresh = true;
        for (int back = 1; back < k && fresh; ++back) {
          int u = v - back;
          if (u < 0) break;
          if (c.sheet[u] == s) fresh = false;
        }
        if (fresh) cand.push_back(s);
      }
      if (cand.empty()) {
        ok = false;
        break;
      }
      c.sheet[v] = cand[rng.below(cand.size())];
    }
    if (!ok) continue;
    // verify the window property cyclically
    bool good = true;
    for (int v = 0; v < N && good; ++v) {
      std::vector<char> seen(k, 0);
      for (int i = 0; i < window; ++i) seen[c.sheet[(v + i) % N]] = 1;
      for (int s = 0; s < k; ++s)
        if (!seen[s]) good = false;
    }
    if (good) return c;
  }
  throw error("build_cover: failed to construct a generic section");
}

// A partitioned cover: classes round-robin along the base, each class with
// its own generic section.
inline CoverStruct build_partitioned_cover(int N, const std::vector<int>& ks, uint64_t seed) {
  int m = int(ks.size());
  if (m < 1) throw guard_error("build_partitioned_cover: need at least one class");
  CoverStruct c;
  c.N = N;
  c.ks = ks;
  c.cls.resize(N);
  c.sheet.resize(N);
  for (int v = 0; v < N; ++v) c.cls[v] = v % m;
  for (int i = 0; i < m; ++i) {
    int ni = N / m + (i < N % m ? 1 : 0);
    if (ni < 3 * ks[i]) throw guard_error("build_partitioned_cover: class too small");
    CoverStruct sub = build_cover(ni, ks[i], hash_mix(seed, uint64_t(i)));
    int at = 0;
    for (int v = 0; v < N; ++v)
      if (c.cls[v] == i) c.sheet[v] = sub.sheet[at++];
  }
  return c;
}

// ---------------------------------------------------------------------------
// Local equivalence relations on intervals. The open interval (s,t) of the
// base lists the points strictly between s and t going forward. Two points
// are equivalent when they lie in the same class and their lifts sit within
// one period of the class cover.

struct LocalEqRel {
  int from = 0, to = 0;
  std::vector<int> points;  // interval points in order
  std::vector<int> label;   // per point: dense class label, 0..classes-1
  int classes = 0;
};

namespace detail {

// canonical lift anchor: (class, lift residue pulled back to class position 0)
inline long long lift_anchor(const CoverStruct& c, const std::vector<int>& cpos,
                             const std::vector<int>& csz, int anchor_cpos, int v) {
  int i = c.cls[v];
  long long period = (long long)csz[i] * c.ks[i];
  long long lift = cpos[v] + (long long)csz[i] * c.sheet[v];
  long long d = ((cpos[v] - anchor_cpos) % csz[i] + csz[i]) % csz[i];
  return ((lift - d) % period + period) % period;
}

}  // namespace detail

inline LocalEqRel local_eq(const CoverStruct& c, int s, int t) {
  if (s == t) throw error("local_eq: empty interval");
  if (s < 0 || s >= c.N || t < 0 || t >= c.N) throw error("local_eq: out of range");
  LocalEqRel r;
  r.from = s;
  r.to = t;
  for (int v = (s + 1) % c.N; v != t; v = (v + 1) % c.N) r.points.push_back(v);
  if (r.points.empty()) throw error("local_eq: empty interval");
  auto cpos = c.class_positions();
  auto csz = c.class_sizes();
  // anchor per class: class position of the first interval point of that class
  std::vector<int> anchor(c.num_classes(), -1);
  for (int v : r.points)
    if (anchor[c.cls[v]] < 0) anchor[c.cls[v]] = cpos[v];
  std::map<std::pair<int, long long>, int> ids;
  for (int v : r.points) {
    long long a = detail::lift_anchor(c, cpos, csz, anchor[c.cls[v]], v);
    auto [it, fresh] = ids.emplace(std::make_pair(c.cls[v], a), int(ids.size()));
    r.label.push_back(it->second);
  }
  r.classes = int(ids.size());
  return r;
}

// ---------------------------------------------------------------------------
// Cell complexes over a tuple of independent covers. Three cut points per
// cover split its base circle into the intervals 0:(a,b), 1:(b,c), 2:(c,a);
// big cells are products of one interval per cover. The class set of a cell
// is the product of the per-interval local partitions; transitions between
// adjacent cells match classes inside the joint interval through the shared
// cut point.

struct CellComplex {
  std::vector<CoverStruct> covers;
  std::vector<std::array<int, 3>> cuts;  // alpha < beta < gamma per cover
  int ncells = 1;                        // 3^|covers|
  int cell_size = 1;                     // |X|, same for all cells
  std::vector<int> radix;                // class-count per cover (mixed radix)
  // transitions[cell][cover][target interval] = permutation of 0..cell_size-1
  // mapping class indices of `cell` to those of the adjacent cell
  std::map<std::pair<int, int>, std::vector<int>> transition;

  int coords(int cell, int i) const {
    for (int j = 0; j < i; ++j) cell /= 3;
    return cell % 3;
  }
  int with_coord(int cell, int i, int v) const {
    int p = 1;
    for (int j = 0; j < i; ++j) p *= 3;
    int cur = coords(cell, i);
    return cell + (v - cur) * p;
  }
};

namespace detail {

// per cover: the three interval partitions and the three pairwise matchings
struct CoverCells {
  std::array<LocalEqRel, 3> part;
  // match[d]: bijection between interval d and interval (d+1)%3 labels,
  // computed inside the joint interval that crosses the shared cut point
  std::array<std::vector<int>, 3> match;
  int classes = 0;
};

inline CoverCells cover_cells(const CoverStruct& c, const std::array<int, 3>& cut) {
  CoverCells cc;
  int a = cut[0], b = cut[1], g = cut[2];
  cc.part[0] = local_eq(c, a, b);
  cc.part[1] = local_eq(c, b, g);
  cc.part[2] = local_eq(c, g, a);
  cc.classes = cc.part[0].classes;
  for (int d = 0; d < 3; ++d)
    if (cc.part[d].classes != cc.classes)
      throw error("build_complex: intervals do not see all classes; widen the cuts");
  // joint intervals: 0->1 inside (a,g), 1->2 inside (b,a), 2->0 inside (g,b)
  const int start[3] = {a, b, g};
  const int stop[3] = {g, a, b};
  for (int d = 0; d < 3; ++d) {
    LocalEqRel joint = local_eq(c, start[d], stop[d]);
    std::map<int, int> pos;  // base point -> joint label
    for (size_t i = 0; i < joint.points.size(); ++i) pos[joint.points[i]] = joint.label[i];
    const LocalEqRel& src = cc.part[d];
    const LocalEqRel& dst = cc.part[(d + 1) % 3];
    std::vector<int> src_joint(src.classes, -1), dst_joint(dst.classes, -1);
    for (size_t i = 0; i < src.points.size(); ++i) {
      int& sj = src_joint[src.label[i]];
      int j = pos.at(src.points[i]);
      if (sj >= 0 && sj != j) throw error("build_complex: joint interval mismatch");
      sj = j;
    }
    for (size_t i = 0; i < dst.points.size(); ++i) {
      int& dj = dst_joint[dst.label[i]];
      int j = pos.at(dst.points[i]);
      if (dj >= 0 && dj != j) throw error("build_complex: joint interval mismatch");
      dj = j;
    }
    cc.match[d].assign(src.classes, -1);
    for (int x = 0; x < src.classes; ++x) {
      for (int y = 0; y < dst.classes; ++y)
        if (dst_joint[y] == src_joint[x]) cc.match[d][x] = y;
      if (cc.match[d][x] < 0) throw error("build_complex: class lost across cut");
    }
  }
  return cc;
}

}  // namespace detail

inline CellComplex build_complex(const std::vector<CoverStruct>& covers,
                                 const std::vector<std::array<int, 3>>& cuts) {
  if (covers.size() != cuts.size() || covers.empty())
    throw guard_error("build_complex: one cut triple per cover required");
  CellComplex cx;
  cx.covers = covers;
  cx.cuts = cuts;
  int nc = int(covers.size());
  std::vector<detail::CoverCells> cc;
  for (int i = 0; i < nc; ++i) {
    auto& cut = cuts[i];
    if (cut[0] == cut[1] || cut[1] == cut[2] || cut[0] == cut[2])
      throw error("build_complex: cut points must be distinct");
    cc.push_back(detail::cover_cells(covers[i], cut));
    cx.radix.push_back(cc.back().classes);
    cx.ncells *= 3;
    cx.cell_size *= cc.back().classes;
  }
  // materialize transitions for every ordered adjacent cell pair
  for (int cell = 0; cell < cx.ncells; ++cell)
    for (int i = 0; i < nc; ++i) {
      int cur = cx.coords(cell, i);
      for (int v = 0; v < 3; ++v) {
        if (v == cur) continue;
        int other = cx.with_coord(cell, i, v);
        // per-class map on coordinate i: forward matchings cur->cur+1
        std::vector<int> m(cc[i].classes);
        if ((cur + 1) % 3 == v) {
          m = cc[i].match[cur];
        } else {
          // inverse of v -> cur matching
          for (int x = 0; x < cc[i].classes; ++x) m[cc[i].match[v][x]] = x;
        }
        // lift to the product
        std::vector<int> full(cx.cell_size);
        for (int idx = 0; idx < cx.cell_size; ++idx) {
          int rest = idx, out = 0, mul = 1;
          for (int j = 0; j < nc; ++j) {
            int digit = rest % cx.radix[j];
            rest /= cx.radix[j];
            out += (j == i ? m[digit] : digit) * mul;
            mul *= cx.radix[j];
          }
          full[idx] = out;
        }
        cx.transition[{cell, other}] = std::move(full);
      }
    }
  return cx;
}

inline CellComplex build_complex(const std::vector<CoverStruct>& covers, uint64_t seed) {
  std::vector<std::array<int, 3>> cuts;
  SplitMix64 rng(seed);
  for (auto& c : covers) {
    if (c.N < 6) throw guard_error("build_complex: base too small for cut points");
    int a = int(rng.below(uint64_t(c.N)));
    int b = (a + c.N / 3) % c.N;
    int g = (a + 2 * c.N / 3) % c.N;
    std::array<int, 3> t{a, b, g};
    std::sort(t.begin(), t.end());
    cuts.push_back(t);
  }
  return build_complex(covers, cuts);
}

struct SquareDefect {
  int cell = -1, coord0 = -1, coord1 = -1;
};

// The commutation law on every square of adjacent cells.
inline std::optional<SquareDefect> check_square(const CellComplex& cx) {
  int nc = int(cx.covers.size());
  for (int cell = 0; cell < cx.ncells; ++cell)
    for (int i = 0; i < nc; ++i)
      for (int j = i + 1; j < nc; ++j)
        for (int di = 1; di <= 2; ++di)
          for (int dj = 1; dj <= 2; ++dj) {
            int ci = cx.coords(cell, i), cj = cx.coords(cell, j);
            int c_i = cx.with_coord(cell, i, (ci + di) % 3);
            int c_j = cx.with_coord(cell, j, (cj + dj) % 3);
            int c_ij = cx.with_coord(c_i, j, (cj + dj) % 3);
            const auto& f_i = cx.transition.at({cell, c_i});
            const auto& f_j = cx.transition.at({cell, c_j});
            const auto& f_i_then = cx.transition.at({c_i, c_ij});
            const auto& f_j_then = cx.transition.at({c_j, c_ij});
            for (int x = 0; x < cx.cell_size; ++x)
              if (f_i_then[f_i[x]] != f_j_then[f_j[x]])
                return SquareDefect{cell, i, j};
          }
  return std::nullopt;
}

// Composite map along a sequence of pairwise adjacent cells.
inline std::vector<int> path_map(const CellComplex& cx, const std::vector<int>& cells) {
  if (cells.empty()) throw error("path_map: empty path");
  std::vector<int> acc(cx.cell_size);
  std::iota(acc.begin(), acc.end(), 0);
  for (size_t i = 0; i + 1 < cells.size(); ++i) {
    auto it = cx.transition.find({cells[i], cells[i + 1]});
    if (it == cx.transition.end()) throw error("path_map: non-adjacent step");
    for (auto& x : acc) x = it->second[x];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Monodromy

struct MonodromyAction {
  int degree = 0;                          // |X|
  std::vector<std::vector<int>> gens;      // one bijection per cover
};

namespace detail {

// canonical non-wrapping path from cell 0 to `cell`: raise coordinates one
// at a time in coordinate order, stepping 0->1->2
inline std::vector<int> staircase(const CellComplex& cx, int cell) {
  std::vector<int> path{0};
  int cur = 0;
  for (int i = 0; i < int(cx.covers.size()); ++i) {
    int target = cx.coords(cell, i);
    for (int v = 1; v <= target; ++v) {
      cur = cx.with_coord(cur, i, v);
      path.push_back(cur);
    }
  }
  return path;
}

}  // namespace detail

inline MonodromyAction monodromy(const CellComplex& cx) {
  if (auto defect = check_square(cx))
    throw error("monodromy: commutation fails at cell " + std::to_string(defect->cell));
  MonodromyAction act;
  act.degree = cx.cell_size;
  int nc = int(cx.covers.size());
  for (int i = 0; i < nc; ++i) {
    // wrap coordinate i once: the direct 0 -> 2 transition crosses the
    // alpha cut; return along the non-wrapping staircase
    int eps = cx.with_coord(0, i, 2);
    const auto& direct = cx.transition.at({0, eps});
    // identification of cell eps with cell 0: inverse of the staircase map
    auto stairs = detail::staircase(cx, eps);
    auto up = path_map(cx, stairs);
    std::vector<int> down(cx.cell_size);
    for (int x = 0; x < cx.cell_size; ++x) down[up[x]] = x;
    std::vector<int> h(cx.cell_size);
    for (int x = 0; x < cx.cell_size; ++x) h[x] = down[direct[x]];
    act.gens.push_back(std::move(h));
  }
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      for (int x = 0; x < act.degree; ++x)
        if (act.gens[i][act.gens[j][x]] != act.gens[j][act.gens[i][x]])
          throw error("monodromy: generators fail to commute");
  return act;
}

// ---------------------------------------------------------------------------
// Classification. The stabilizer of an orbit of a commuting action is a
// finite-index sublattice of Z^C; since every quotient element has order
// dividing the orbit size L, the lattice is determined by its image in
// (Z/L)^C, which we store explicitly (sorted). Product stabilizers
// prod l_k Z print as the tuple (l_k).

struct OrbitInvariant {
  int size = 0;
  std::vector<std::vector<int>> lattice;  // stabilizer mod size, sorted
  std::vector<int> cyclic_orders;         // l_k = order of e_k on the orbit

  bool operator<(const OrbitInvariant& o) const {
    if (size != o.size) return size < o.size;
    return lattice < o.lattice;
  }
  bool operator==(const OrbitInvariant& o) const = default;
  // stabilizer is the full product prod l_k Z (then it prints as the tuple
  // of cyclic orders)
  bool product_form() const {
    long long prod = 1;
    for (int l : cyclic_orders) prod *= l;
    if (prod != size) return false;
    long long expect = 1;
    for (int l : cyclic_orders) expect *= size / l;
    if (int(lattice.size()) != expect) return false;
    for (auto& v : lattice)
      for (size_t k = 0; k < v.size(); ++k)
        if (v[k] % cyclic_orders[k] != 0) return false;
    return true;
  }
};

using MonodromyInvariant = std::vector<OrbitInvariant>;  // sorted

inline MonodromyInvariant classify_monodromy(const MonodromyAction& act) {
  int nc = int(act.gens.size());
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j)
      for (int x = 0; x < act.degree; ++x)
        if (act.gens[i][act.gens[j][x]] != act.gens[j][act.gens[i][x]])
          throw error("classify_monodromy: generators must commute");
  std::vector<char> seen(act.degree, 0);
  MonodromyInvariant inv;
  for (int x0 = 0; x0 < act.degree; ++x0) {
    if (seen[x0]) continue;
    std::vector<int> orbit{x0};
    seen[x0] = 1;
    for (size_t f = 0; f < orbit.size(); ++f)
      for (auto& g : act.gens) {
        int y = g[orbit[f]];
        if (!seen[y]) {
          seen[y] = 1;
          orbit.push_back(y);
        }
      }
    int L = int(orbit.size());
    OrbitInvariant oi;
    oi.size = L;
    // member test: v in stabilizer iff g1^v1 ... gC^vC fixes x0
    std::vector<int> v(nc, 0);
    while (true) {
      int x = x0;
      for (int i = 0; i < nc; ++i)
        for (int t = 0; t < v[i]; ++t) x = act.gens[i][x];
      if (x == x0) oi.lattice.push_back(v);
      int i = nc - 1;
      while (i >= 0 && ++v[i] == L) v[i--] = 0;
      if (i < 0) break;
    }
    std::sort(oi.lattice.begin(), oi.lattice.end());
    for (int i = 0; i < nc; ++i) {
      int l = 1, x = act.gens[i][x0];
      while (x != x0) {
        x = act.gens[i][x];
        ++l;
      }
      // l is the length of x0's cycle under gen i; on a transitive abelian
      // orbit this is the order of e_i in the quotient
      oi.cyclic_orders.push_back(l);
    }
    inv.push_back(oi);
  }
  std::sort(inv.begin(), inv.end());
  return inv;
}

// Orbits of the joint action (sorted sizes), for transitivity checks.
inline std::vector<int> orbit_sizes(const MonodromyAction& act) {
  std::vector<int> sizes;
  std::vector<char> seen(act.degree, 0);
  for (int x0 = 0; x0 < act.degree; ++x0) {
    if (seen[x0]) continue;
    std::vector<int> frontier{x0};
    seen[x0] = 1;
    for (size_t f = 0; f < frontier.size(); ++f)
      for (auto& g : act.gens) {
        int y = g[frontier[f]];
        if (!seen[y]) {
          seen[y] = 1;
          frontier.push_back(y);
        }
      }
    sizes.push_back(int(frontier.size()));
  }
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace finhom
