#pragma once

#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "finhom/fraisse.hpp"
#include "finhom/structures.hpp"

// Growth profiling: substructure counts pi(k), 1-type counts f(n) over
// parameter sets, polynomial/exponential classification, distality width
// and the finite-axiomatizability bound.

namespace finhom {

struct ProfileEntry {
  int arg = 0;
  uint64_t count = 0;
  bool exact = true;
};

struct GrowthProfile {
  enum Kind { Pi, F } kind = Pi;
  std::string source;
  std::vector<ProfileEntry> entries;
};

struct GrowthVerdict {
  enum Cls { Polynomial, Exponential, Inconclusive } cls = Inconclusive;
  double degree = 0.0;    // log-log slope, for the polynomial case
  double residual = 0.0;  // RMS residual of the winning fit
};

inline const char* growth_name(GrowthVerdict::Cls c) {
  switch (c) {
    case GrowthVerdict::Polynomial: return "polynomial";
    case GrowthVerdict::Exponential: return "exponential";
    case GrowthVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// 1-type keys over a parameter set, specialized for signatures made of
// binary relations and unary predicates (the profiled classes). Agrees with
// qf_type equality; cross-checked against it in the tests.

struct TypeKeyer {
  const FinStruct& s;
  std::vector<std::vector<uint64_t>> bits;  // per binary relation, row bitsets

  explicit TypeKeyer(const FinStruct& st) : s(st) {
    int words = (s.size + 63) / 64;
    for (auto& t : s.rel) {
      if (t.arity != 2) throw guard_error("type keys need a binary signature");
      bits.emplace_back(size_t(s.size) * words, 0);
      auto& b = bits.back();
      for (size_t k = 0; k < t.size(); ++k) {
        uint32_t key = t.keys[k];
        int y = int(key & 63u), x = int((key >> 6) & 63u);
        b[size_t(x) * words + y / 64] |= uint64_t(1) << (y % 64);
      }
    }
  }

  bool edge(size_t ri, int x, int y) const {
    int words = (s.size + 63) / 64;
    return bits[ri][size_t(x) * words + y / 64] >> (y % 64) & 1;
  }

  // 1-type of x over the listed parameters
  uint64_t key(int x, const std::vector<int>& A) const {
    uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (size_t i = 0; i < A.size(); ++i)
      if (A[i] == x) h = hash_mix(h, 1000 + i);
    for (size_t ri = 0; ri < bits.size(); ++ri) {
      uint64_t w = 0;
      for (size_t i = 0; i < A.size(); ++i) {
        w = w << 2 | uint64_t(edge(ri, x, A[i])) << 1 | uint64_t(edge(ri, A[i], x));
      }
      h = hash_mix(h, w);
    }
    for (auto& p : s.pred) h = hash_mix(h, uint64_t(p[x]) + 7);
    return h;
  }
};

// ---------------------------------------------------------------------------
// pi(k): isomorphism classes of induced substructures

inline GrowthProfile profile_pi(const FinStruct& s, int kmax, const std::string& source) {
  if (kmax > 6) throw guard_error("profile_pi: exhaustive mode capped at k <= 6");
  if (s.size > 40) throw guard_error("profile_pi: structure capped at size 40");
  GrowthProfile p;
  p.kind = GrowthProfile::Pi;
  p.source = source;
  for (int k = 1; k <= kmax; ++k) {
    std::unordered_set<std::vector<uint64_t>, VecHash> classes;
    std::vector<int> subset(k);
    std::function<void(int, int)> rec = [&](int i, int start) {
      if (i == k) {
        if (!is_fn_closed(s, subset)) return;
        classes.insert(canonical_key(induced(s, subset)));
        return;
      }
      for (int x = start; x < s.size; ++x) {
        subset[i] = x;
        rec(i + 1, x + 1);
      }
    };
    rec(0, 0);
    p.entries.push_back({k, classes.size(), true});
  }
  return p;
}

// age counts of a catalog (members per size)
inline GrowthProfile profile_pi(const Catalog& cat, int kmax) {
  GrowthProfile p;
  p.kind = GrowthProfile::Pi;
  p.source = cat.rule.name;
  for (int k = 1; k <= std::min(kmax, cat.max_size); ++k)
    p.entries.push_back({k, cat.members[k].size(), true});
  return p;
}

// ---------------------------------------------------------------------------
// f(n): maximal number of 1-types over an n-element parameter set

enum class CountMode { Auto, Exhaustive, Sampled };

inline ProfileEntry type_count_f(const FinStruct& s, int n, CountMode mode = CountMode::Auto,
                                 int trials = 2000, uint64_t seed = 1) {
  if (n < 1 || n > s.size) throw guard_error("type_count_f: n out of range");
  double binom = 1;
  for (int i = 0; i < n; ++i) binom = binom * (s.size - i) / (i + 1);
  bool exhaustive = mode == CountMode::Exhaustive ||
                    (mode == CountMode::Auto && binom <= 1e6);
  if (mode == CountMode::Exhaustive && binom > 1e6)
    throw guard_error("type_count_f: exhaustive mode needs binom(size, n) <= 1e6");
  TypeKeyer keyer(s);
  uint64_t best = 0;
  std::unordered_set<uint64_t> types;
  auto census = [&](const std::vector<int>& A) {
    types.clear();
    for (int x = 0; x < s.size; ++x) types.insert(keyer.key(x, A));
    best = std::max(best, uint64_t(types.size()));
  };
  if (exhaustive) {
    std::vector<int> A(n);
    std::function<void(int, int)> rec = [&](int i, int start) {
      if (i == n) {
        census(A);
        return;
      }
      for (int x = start; x < s.size; ++x) {
        A[i] = x;
        rec(i + 1, x + 1);
      }
    };
    rec(0, 0);
  } else {
    SplitMix64 rng(seed);
    std::vector<int> pool(s.size);
    for (int i = 0; i < s.size; ++i) pool[i] = i;
    for (int t = 0; t < trials; ++t) {
      for (int i = 0; i < n; ++i) {
        int j = i + int(rng.below(uint64_t(pool.size() - i)));
        std::swap(pool[i], pool[j]);
      }
      census(std::vector<int>(pool.begin(), pool.begin() + n));
    }
  }
  return {n, best, exhaustive};
}

inline GrowthProfile profile_f(const FinStruct& s, int nmax, const std::string& source,
                               CountMode mode = CountMode::Auto, int trials = 2000,
                               uint64_t seed = 1) {
  GrowthProfile p;
  p.kind = GrowthProfile::F;
  p.source = source;
  for (int n = 1; n <= nmax; ++n) p.entries.push_back(type_count_f(s, n, mode, trials, seed));
  return p;
}

// ---------------------------------------------------------------------------
// Growth classification: least-squares fit of log(count) against log(n)
// (polynomial) and against n (exponential); the better fit wins if its RMS
// residual is below the fixed 0.1 threshold. An exponential verdict also
// requires successive ratios to stay above 1.05.

inline GrowthVerdict classify_growth(const GrowthProfile& p) {
  std::vector<double> xs, ys;
  for (auto& e : p.entries)
    if (e.exact && e.count > 0) {
      xs.push_back(double(e.arg));
      ys.push_back(std::log(double(e.count)));
    }
  if (xs.size() < 4) throw guard_error("classify_growth: need at least 4 exact entries");
  auto fit = [&](bool logx) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = int(xs.size());
    for (int i = 0; i < n; ++i) {
      double x = logx ? std::log(xs[i]) : xs[i];
      sx += x;
      sy += ys[i];
      sxx += x * x;
      sxy += x * ys[i];
    }
    double denom = n * sxx - sx * sx;
    double slope = denom == 0 ? 0 : (n * sxy - sx * sy) / denom;
    double inter = (sy - slope * sx) / n;
    double rss = 0;
    for (int i = 0; i < n; ++i) {
      double x = logx ? std::log(xs[i]) : xs[i];
      double r = ys[i] - (inter + slope * x);
      rss += r * r;
    }
    return std::pair<double, double>(slope, std::sqrt(rss / n));
  };
  auto [deg, rpoly] = fit(true);
  auto [rate, rexp] = fit(false);
  bool ratios_ok = true;
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    if (std::exp(ys[i + 1]) < 1.05 * std::exp(ys[i])) ratios_ok = false;
  GrowthVerdict v;
  if (rpoly <= rexp && rpoly < 0.1) {
    v.cls = GrowthVerdict::Polynomial;
    v.degree = deg;
    v.residual = rpoly;
  } else if (rexp < rpoly && rexp < 0.1 && ratios_ok) {
    v.cls = GrowthVerdict::Exponential;
    v.degree = rate;
    v.residual = rexp;
  } else {
    v.cls = GrowthVerdict::Inconclusive;
    v.residual = std::min(rpoly, rexp);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Distality width: least k such that every 1-type over every parameter set
// A (|A| <= nmax) is pinned by some k-element subset of A.

struct DistalityResult {
  bool found = false;
  int width = 0;  // the minimal k, or the nmax bound when !found
};

inline DistalityResult distality_width(const FinStruct& s, int nmax) {
  if (nmax > 6) throw guard_error("distality_width: nmax capped at 6");
  if (s.size > 30) throw guard_error("distality_width: structure capped at size 30");
  TypeKeyer keyer(s);
  std::vector<uint64_t> full(s.size), key0(s.size);
  // does width k handle every parameter set of size <= nmax?
  auto k_works = [&](int k) {
    std::vector<int> A;
    bool ok = true;
    std::function<void(int)> rec = [&](int start) {
      if (!ok) return;
      int m = int(A.size());
      if (m > k) {
        for (int x = 0; x < s.size; ++x) full[x] = keyer.key(x, A);
        std::vector<char> covered(s.size, 0);
        std::vector<int> sub(k);
        std::function<void(int, int)> subs = [&](int i, int st) {
          if (i == k) {
            for (int x = 0; x < s.size; ++x) key0[x] = keyer.key(x, sub);
            // classes over the subset whose full key is constant pin all
            // of their members
            std::unordered_map<uint64_t, std::pair<uint64_t, bool>> grp;
            for (int x = 0; x < s.size; ++x) {
              auto [it, fresh] = grp.emplace(key0[x], std::make_pair(full[x], true));
              if (!fresh && it->second.first != full[x]) it->second.second = false;
            }
            for (int x = 0; x < s.size; ++x)
              if (grp[key0[x]].second) covered[x] = 1;
            return;
          }
          for (int t = st; t < m; ++t) {
            sub[i] = A[t];
            subs(i + 1, t + 1);
          }
        };
        subs(0, 0);
        for (int x = 0; x < s.size; ++x)
          if (!covered[x]) {
            ok = false;
            return;
          }
      }
      if (m == nmax) return;
      for (int x = start; x < s.size; ++x) {
        A.push_back(x);
        rec(x + 1);
        A.pop_back();
      }
    };
    rec(0);
    return ok;
  };
  for (int k = 1; k < nmax; ++k)
    if (k_works(k)) return {true, k};
  return {false, nmax};
}

// The bound n0 = kr + k + r + 1 from the distal finite-axiomatizability
// argument.
inline int axiomatization_bound(int k, int r) {
  if (k < 1 || r < 1) throw guard_error("axiomatization_bound: k, r >= 1");
  return k * r + k + r + 1;
}

// ---------------------------------------------------------------------------
// The random-graph contrast fixture, size 24. Planted configuration:
//   - a 5-set B = {0..4} with a full-pattern point and five one-flip
//     partners, so no 4 parameters ever pin a 1-type over B (width > 4);
//   - a shattered 4-set {0,1,2,3} (all 16 edge patterns appear), so
//     f(4) = 2^4 + 4 exactly;
// the remainder is filled by extension-property closure at level 4.

inline GenericApprox build_graph_fixture(uint64_t seed) {
  ClassRule rule = make_graph_class();
  SplitMix64 rng(seed);
  const int target = 24;
  std::vector<std::vector<char>> adj(target, std::vector<char>(target, 0));
  int size = 5;  // B = 0..4, edgeless
  auto add_point = [&](const std::vector<int>& over, uint32_t pattern) {
    int id = size++;
    for (size_t i = 0; i < over.size(); ++i)
      if (pattern >> i & 1) adj[id][over[i]] = adj[over[i]][id] = 1;
    for (int y = 0; y < id; ++y) {
      bool fixed = false;
      for (int b : over)
        if (b == y) fixed = true;
      if (!fixed && rng.coin()) adj[id][y] = adj[y][id] = 1;
    }
    return id;
  };
  std::vector<int> B{0, 1, 2, 3, 4};
  add_point(B, 0b11111);  // the full-pattern point
  for (int i = 0; i < 5; ++i) add_point(B, 0b11111u & ~(1u << i));
  // shatter {0,1,2,3}: patterns present so far
  std::vector<int> A4{0, 1, 2, 3};
  std::vector<char> have(16, 0);
  for (int x = 4; x < size; ++x) {
    uint32_t pat = 0;
    for (int i = 0; i < 4; ++i) pat |= uint32_t(adj[x][A4[i]]) << i;
    have[pat] = 1;
  }
  for (uint32_t pat = 0; pat < 16; ++pat)
    if (!have[pat]) add_point(A4, pat);
  // extension closure at level 4 up to the target size
  auto materialize = [&]() {
    FinStruct s = FinStruct::empty(rule.sig, size);
    for (int x = 0; x < size; ++x)
      for (int y = 0; y < size; ++y)
        if (adj[x][y]) s.rel[0].add({x, y});
    s.rel[0].finish();
    return s;
  };
  while (size < target) {
    FinStruct cur = materialize();
    auto missing = check_extension_property(cur, rule, 4);
    if (missing.empty()) break;
    auto& job = missing.front();
    uint32_t pattern = 0;
    int a = int(job.base.size());
    for (int i = 0; i < a; ++i) {
      int t[2] = {i, a};
      if (job.ext.rel[0].contains(t)) pattern |= 1u << i;
    }
    add_point(job.base, pattern);
  }
  GenericApprox g;
  g.s = materialize();
  g.class_name = rule.name;
  g.ep_requested = 4;
  g.seed = seed;
  for (int level = 1; level <= 4; ++level) {
    if (!check_extension_property(g.s, rule, level).empty()) break;
    g.ep_verified = level;
  }
  return g;
}

}  // namespace finhom
