#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "finhom/structures.hpp"

// Amalgamation classes, finite approximations of their limits, and
// isomorphism testing. Classes are given by decidable rules; catalogs hold
// all members up to a size bound, deduplicated by canonical form.

namespace finhom {

struct ClassRule {
  enum Kind { Orders, Graph, RMonotone, Tn, Le2Graph };
  Kind kind = Orders;
  int n = 1;  // parameter of orders:n / tn:n
  std::string name;
  Signature sig;
  // Classes whose members never exceed a fixed size (0 = unbounded).
  int size_bound = 0;
};

inline ClassRule make_orders_class(int n) {
  if (n < 1) throw guard_error("orders class needs n >= 1");
  ClassRule r;
  r.kind = ClassRule::Orders;
  r.n = n;
  r.name = "orders:" + std::to_string(n);
  for (int i = 1; i <= n; ++i)
    r.sig.relations.push_back({"le" + std::to_string(i), 2, RelKind::LinearOrder});
  return r;
}

inline ClassRule make_graph_class() {
  ClassRule r;
  r.kind = ClassRule::Graph;
  r.name = "graph";
  r.sig.relations.push_back({"E", 2, RelKind::Generic});
  return r;
}

inline ClassRule make_le2graph_class() {
  ClassRule r = make_graph_class();
  r.kind = ClassRule::Le2Graph;
  r.name = "le2graph";
  r.size_bound = 2;
  return r;
}

inline ClassRule make_rmono_class() {
  ClassRule r;
  r.kind = ClassRule::RMonotone;
  r.name = "rmono";
  r.sig.relations.push_back({"le1", 2, RelKind::LinearOrder});
  r.sig.relations.push_back({"le2", 2, RelKind::LinearOrder});
  r.sig.relations.push_back({"R", 2, RelKind::Generic});
  return r;
}

inline ClassRule make_tn_class(int n) {
  if (n < 1) throw guard_error("tn class needs n >= 1");
  ClassRule r;
  r.kind = ClassRule::Tn;
  r.n = n;
  r.name = "tn:" + std::to_string(n);
  r.sig.relations.push_back({"le", 2, RelKind::LinearOrder});
  for (int i = 0; i < n; ++i) r.sig.preds.push_back("P" + std::to_string(i));
  for (int i = 1; i < n; ++i) r.sig.fns.push_back("f" + std::to_string(i));
  return r;
}

inline ClassRule parse_class(const std::string& spec) {
  auto colon = spec.find(':');
  std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  int arg = colon == std::string::npos ? 1 : std::stoi(spec.substr(colon + 1));
  if (head == "orders") return make_orders_class(arg);
  if (head == "graph") return make_graph_class();
  if (head == "le2graph") return make_le2graph_class();
  if (head == "rmono") return make_rmono_class();
  if (head == "tn") return make_tn_class(arg);
  throw guard_error("unknown class rule: " + spec);
}

inline bool class_member(const ClassRule& r, const FinStruct& s) {
  if (!(s.sig == r.sig)) return false;
  if (r.size_bound && s.size > r.size_bound) return false;
  switch (r.kind) {
    case ClassRule::Orders: {
      for (auto& t : s.rel)
        if (!is_linear_order_table(t, s.size)) return false;
      return true;
    }
    case ClassRule::Graph:
    case ClassRule::Le2Graph: {
      const RelTable& e = s.rel[0];
      for (size_t k = 0; k < e.size(); ++k) {
        Tuple t = e.decode(k);
        if (t[0] == t[1]) return false;
        int rev[2] = {t[1], t[0]};
        if (!e.contains(rev)) return false;
      }
      return true;
    }
    case ClassRule::RMonotone: {
      if (!is_linear_order_table(s.rel[0], s.size)) return false;
      if (!is_linear_order_table(s.rel[1], s.size)) return false;
      const RelTable& R = s.rel[2];
      for (int a = 0; a < s.size; ++a) {
        int aa[2] = {a, a};
        if (R.contains(aa)) return false;
      }
      // a' <=1 a, a R b, b <=2 b'  =>  a' R b'
      for (int a = 0; a < s.size; ++a)
        for (int b = 0; b < s.size; ++b) {
          int ab[2] = {a, b};
          if (!R.contains(ab)) continue;
          for (int a2 = 0; a2 < s.size; ++a2)
            for (int b2 = 0; b2 < s.size; ++b2) {
              if (!detail::le(s.rel[0], a2, a) || !detail::le(s.rel[1], b, b2)) continue;
              int t[2] = {a2, b2};
              if (!R.contains(t)) return false;
            }
        }
      return true;
    }
    case ClassRule::Tn: {
      if (!is_linear_order_table(s.rel[0], s.size)) return false;
      for (int x = 0; x < s.size; ++x) {
        int cnt = 0;
        for (auto& p : s.pred) cnt += p[x];
        if (cnt != 1) return false;
        bool in_p0 = s.pred[0][x];
        int prev = x;
        for (int i = 1; i < r.n; ++i) {
          int y = s.fn[i - 1][x];
          if (!in_p0) {
            if (y != x) return false;
          } else {
            if (!s.pred[i][y]) return false;
            int pr[2] = {prev, y};
            if (!s.rel[0].contains(pr)) return false;
            prev = y;
          }
        }
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Embeddings (strong: preserve and reflect, respect functions).

inline void for_each_embedding(const FinStruct& a, const FinStruct& b,
                               const std::function<bool(const std::vector<int>&)>& cb) {
  if (!(a.sig == b.sig)) return;
  if (a.size > b.size) return;
  std::vector<int> map(a.size, -1);
  std::vector<char> used(b.size, 0);
  bool stop = false;
  std::function<void(int)> rec = [&](int x) {
    if (stop) return;
    if (x == a.size) {
      if (is_partial_iso(a, b, map))
        if (!cb(map)) stop = true;
      return;
    }
    for (int y = 0; y < b.size && !stop; ++y) {
      if (used[y]) continue;
      map[x] = y;
      // quick reject on binary facts against mapped prefix
      bool ok = true;
      for (size_t ri = 0; ri < a.rel.size() && ok; ++ri) {
        if (a.rel[ri].arity != 2) continue;
        for (int z = 0; z <= x && ok; ++z) {
          if (map[z] < 0) continue;
          int t1[2] = {x, z}, u1[2] = {y, map[z]};
          if (a.rel[ri].contains(t1) != b.rel[ri].contains(u1)) ok = false;
          int t2[2] = {z, x}, u2[2] = {map[z], y};
          if (a.rel[ri].contains(t2) != b.rel[ri].contains(u2)) ok = false;
        }
      }
      for (size_t pi = 0; pi < a.pred.size() && ok; ++pi)
        if (a.pred[pi][x] != b.pred[pi][y]) ok = false;
      if (ok) {
        used[y] = 1;
        rec(x + 1);
        used[y] = 0;
      }
      map[x] = -1;
    }
  };
  rec(0);
}

inline bool embeds(const FinStruct& a, const FinStruct& b) {
  bool found = false;
  for_each_embedding(a, b, [&](const std::vector<int>&) {
    found = true;
    return false;
  });
  return found;
}

inline std::vector<std::vector<int>> automorphisms(const FinStruct& s) {
  std::vector<std::vector<int>> out;
  for_each_embedding(s, s, [&](const std::vector<int>& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Catalogs

struct Catalog {
  ClassRule rule;
  int max_size = 0;
  std::vector<std::vector<FinStruct>> members;  // canonical copies, by size
  std::vector<std::unordered_set<std::vector<uint64_t>, VecHash>> keys;

  bool contains_key(int size, const std::vector<uint64_t>& k) const {
    if (size < 0 || size > max_size) return false;
    return keys[size].count(k) > 0;
  }
};

namespace detail {

inline void all_orders(int m, const std::function<void(const std::vector<int>&)>& cb) {
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  do {
    cb(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

inline RelTable order_table_from_ranks(const std::vector<int>& rank) {
  // rank[x] = position of x; strict pairs x<y iff rank[x]<rank[y]
  RelTable t;
  t.arity = 2;
  int m = int(rank.size());
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y)
      if (rank[x] < rank[y]) t.add({x, y});
  t.finish();
  return t;
}

template <typename CB>
void generate_members(const ClassRule& r, int m, CB&& emit) {
  if (r.size_bound && m > r.size_bound) return;
  switch (r.kind) {
    case ClassRule::Orders: {
      // first order fixed as the natural one; every member is isomorphic
      // to such a structure
      std::vector<int> nat(m);
      for (int i = 0; i < m; ++i) nat[i] = i;
      std::vector<std::vector<int>> ranks(r.n, nat);
      std::function<void(int)> rec = [&](int i) {
        if (i == r.n) {
          FinStruct s = FinStruct::empty(r.sig, m);
          for (int j = 0; j < r.n; ++j) s.rel[j] = order_table_from_ranks(ranks[j]);
          emit(s);
          return;
        }
        all_orders(m, [&](const std::vector<int>& p) {
          ranks[i] = p;
          rec(i + 1);
        });
      };
      if (m == 0) {
        emit(FinStruct::empty(r.sig, 0));
      } else {
        rec(1);
      }
      break;
    }
    case ClassRule::Graph:
    case ClassRule::Le2Graph: {
      int pairs = m * (m - 1) / 2;
      if (pairs > 20) throw guard_error("graph catalog size too large");
      for (uint32_t mask = 0; mask < (1u << pairs); ++mask) {
        FinStruct s = FinStruct::empty(r.sig, m);
        int bit = 0;
        for (int x = 0; x < m; ++x)
          for (int y = x + 1; y < m; ++y, ++bit)
            if (mask >> bit & 1) {
              s.rel[0].add({x, y});
              s.rel[0].add({y, x});
            }
        s.rel[0].finish();
        emit(s);
      }
      break;
    }
    case ClassRule::RMonotone: {
      if (m > 4) throw guard_error("rmono catalog capped at size 4");
      std::vector<int> nat(m);
      for (int i = 0; i < m; ++i) nat[i] = i;
      all_orders(m, [&](const std::vector<int>& p2) {
        int cells = m * m;
        for (uint32_t mask = 0; mask < (1u << cells); ++mask) {
          FinStruct s = FinStruct::empty(r.sig, m);
          s.rel[0] = order_table_from_ranks(nat);
          s.rel[1] = order_table_from_ranks(p2);
          for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y)
              if (mask >> (x * m + y) & 1) s.rel[2].add({x, y});
          s.rel[2].finish();
          if (class_member(r, s)) emit(s);
        }
      });
      break;
    }
    case ClassRule::Tn: {
      if (m > 5) throw guard_error("tn catalog capped at size 5");
      // order fixed natural; enumerate labelings and function choices
      std::vector<int> label(m, 0);
      std::function<void(int)> lab = [&](int i) {
        if (i == m) {
          // choose f values for P0 points
          std::vector<int> p0;
          for (int x = 0; x < m; ++x)
            if (label[x] == 0) p0.push_back(x);
          std::vector<std::vector<int>> fv(std::max(0, r.n - 1), std::vector<int>(m));
          for (int fi = 0; fi < r.n - 1; ++fi)
            for (int x = 0; x < m; ++x) fv[fi][x] = x;
          std::function<void(size_t, int)> pick = [&](size_t pi, int fi) {
            if (pi == p0.size()) {
              FinStruct s = FinStruct::empty(r.sig, m);
              std::vector<int> nat(m);
              for (int x = 0; x < m; ++x) nat[x] = x;
              s.rel[0] = order_table_from_ranks(nat);
              for (int x = 0; x < m; ++x) s.pred[label[x]][x] = 1;
              for (int f = 0; f < r.n - 1; ++f) s.fn[f] = fv[f];
              if (class_member(r, s)) emit(s);
              return;
            }
            if (fi == r.n - 1) {
              pick(pi + 1, 0);
              return;
            }
            int x = p0[pi];
            int prev = fi == 0 ? x : fv[fi - 1][x];
            for (int y = prev + 1; y < m; ++y) {
              if (label[y] != fi + 1) continue;
              fv[fi][x] = y;
              pick(pi, fi + 1);
            }
            fv[fi][x] = x;
          };
          if (r.n == 1) {
            FinStruct s = FinStruct::empty(r.sig, m);
            std::vector<int> nat(m);
            for (int x = 0; x < m; ++x) nat[x] = x;
            s.rel[0] = order_table_from_ranks(nat);
            for (int x = 0; x < m; ++x) s.pred[0][x] = 1;
            emit(s);
          } else {
            pick(0, 0);
          }
          return;
        }
        for (int l = 0; l < r.n; ++l) {
          label[i] = l;
          lab(i + 1);
        }
      };
      lab(0);
      break;
    }
  }
}

}  // namespace detail

inline Catalog enumerate_catalog(const ClassRule& rule, int max_size) {
  if (max_size < 0 || max_size > 8) throw guard_error("catalog max-size must be in 0..8");
  Catalog cat;
  cat.rule = rule;
  cat.max_size = max_size;
  cat.members.resize(max_size + 1);
  cat.keys.resize(max_size + 1);
  for (int m = 0; m <= max_size; ++m) {
    detail::generate_members(rule, m, [&](const FinStruct& s) {
      auto key = canonical_key(s);
      if (cat.keys[m].insert(key).second) cat.members[m].push_back(canonical_form(s).structure);
    });
  }
  return cat;
}

// ---------------------------------------------------------------------------
// One-point extension types over a structure A (indices 0..|A|-1 carry A,
// the new point is index |A|). Every returned structure is a class member.

inline std::vector<FinStruct> one_point_extensions(const ClassRule& rule, const FinStruct& A) {
  int a = A.size;
  std::vector<FinStruct> out;
  if (rule.size_bound && a + 1 > rule.size_bound) return out;
  switch (rule.kind) {
    case ClassRule::Orders: {
      // a cut per order: 0..a positions
      std::vector<std::vector<int>> rank(rule.n, std::vector<int>(a));
      for (int i = 0; i < rule.n; ++i)
        for (int x = 0; x < a; ++x) {
          int c = 0;
          for (int y = 0; y < a; ++y) {
            int t[2] = {y, x};
            if (A.rel[i].contains(t)) ++c;
          }
          rank[i][x] = c;
        }
      std::vector<int> cut(rule.n, 0);
      while (true) {
        FinStruct e = FinStruct::empty(rule.sig, a + 1);
        for (int i = 0; i < rule.n; ++i) {
          for (int x = 0; x < a; ++x)
            for (int y = 0; y < a; ++y) {
              int t[2] = {x, y};
              if (A.rel[i].contains(t)) e.rel[i].add(t);
            }
          for (int x = 0; x < a; ++x) {
            if (rank[i][x] < cut[i])
              e.rel[i].add({x, a});
            else
              e.rel[i].add({a, x});
          }
          e.rel[i].finish();
        }
        out.push_back(std::move(e));
        int j = rule.n - 1;
        while (j >= 0 && ++cut[j] == a + 1) cut[j--] = 0;
        if (j < 0) break;
      }
      break;
    }
    case ClassRule::Graph:
    case ClassRule::Le2Graph: {
      for (uint32_t mask = 0; mask < (1u << a); ++mask) {
        FinStruct e = FinStruct::empty(rule.sig, a + 1);
        e.rel[0] = A.rel[0];
        for (int x = 0; x < a; ++x)
          if (mask >> x & 1) {
            e.rel[0].add({x, a});
            e.rel[0].add({a, x});
          }
        e.rel[0].finish();
        out.push_back(std::move(e));
      }
      break;
    }
    case ClassRule::RMonotone: {
      if (a > 4) throw guard_error("rmono extension enumeration capped");
      for (int c1 = 0; c1 <= a; ++c1)
        for (int c2 = 0; c2 <= a; ++c2)
          for (uint32_t mask = 0; mask < (1u << (2 * a)); ++mask) {
            FinStruct e = FinStruct::empty(rule.sig, a + 1);
            for (int i = 0; i < 2; ++i) {
              std::vector<int> rank(a);
              for (int x = 0; x < a; ++x) {
                int c = 0;
                for (int y = 0; y < a; ++y) {
                  int t[2] = {y, x};
                  if (A.rel[i].contains(t)) ++c;
                }
                rank[x] = c;
              }
              for (int x = 0; x < a; ++x)
                for (int y = 0; y < a; ++y) {
                  int t[2] = {x, y};
                  if (A.rel[i].contains(t)) e.rel[i].add(t);
                }
              int cut = i == 0 ? c1 : c2;
              for (int x = 0; x < a; ++x) {
                if (rank[x] < cut)
                  e.rel[i].add({x, a});
                else
                  e.rel[i].add({a, x});
              }
              e.rel[i].finish();
            }
            e.rel[2] = A.rel[2];
            for (int x = 0; x < a; ++x) {
              if (mask >> x & 1) e.rel[2].add({a, x});
              if (mask >> (a + x) & 1) e.rel[2].add({x, a});
            }
            e.rel[2].finish();
            if (class_member(rule, e)) out.push_back(std::move(e));
          }
      break;
    }
    case ClassRule::Tn: {
      // a new point with a class label and a cut; a P0 point must find its
      // images among existing elements
      std::vector<int> rank(a);
      for (int x = 0; x < a; ++x) {
        int c = 0;
        for (int y = 0; y < a; ++y) {
          int t[2] = {y, x};
          if (A.rel[0].contains(t)) ++c;
        }
        rank[x] = c;
      }
      auto base = [&](int cut) {
        FinStruct e = FinStruct::empty(rule.sig, a + 1);
        for (int x = 0; x < a; ++x)
          for (int y = 0; y < a; ++y) {
            int t[2] = {x, y};
            if (A.rel[0].contains(t)) e.rel[0].add(t);
          }
        for (int x = 0; x < a; ++x) {
          if (rank[x] < cut)
            e.rel[0].add({x, a});
          else
            e.rel[0].add({a, x});
        }
        e.rel[0].finish();
        for (size_t pi = 0; pi < A.pred.size(); ++pi)
          for (int x = 0; x < a; ++x) e.pred[pi][x] = A.pred[pi][x];
        for (size_t fi = 0; fi < A.fn.size(); ++fi)
          for (int x = 0; x < a; ++x) e.fn[fi][x] = A.fn[fi][x];
        return e;
      };
      for (int cut = 0; cut <= a; ++cut) {
        for (int l = 1; l < rule.n; ++l) {
          FinStruct e = base(cut);
          e.pred[l][a] = 1;
          if (class_member(rule, e)) out.push_back(std::move(e));
        }
        if (rule.n == 1) {
          FinStruct e = base(cut);
          e.pred[0][a] = 1;
          if (class_member(rule, e)) out.push_back(std::move(e));
          continue;
        }
        // P0 point: choose images among existing elements
        std::function<void(FinStruct&, int)> pick = [&](FinStruct& e, int fi) {
          if (fi == rule.n - 1) {
            if (class_member(rule, e)) out.push_back(e);
            return;
          }
          for (int y = 0; y < a; ++y) {
            if (!A.pred[fi + 1][y]) continue;
            e.fn[fi][a] = y;
            pick(e, fi + 1);
          }
          e.fn[fi][a] = a;
        };
        FinStruct e = base(cut);
        e.pred[0][a] = 1;
        pick(e, 0);
      }
      break;
    }
  }
  return out;
}

// Does some x in s realize the extension `ext` over the listed elements A?
// ext has A on positions 0..|A|-1 (matching the induced structure in that
// order) and the new point last.
inline bool extension_realized(const FinStruct& s, const std::vector<int>& A,
                               const FinStruct& ext) {
  int a = int(A.size());
  std::vector<int> map(ext.size, -1);
  for (int i = 0; i < a; ++i) map[i] = A[i];
  for (int x = 0; x < s.size; ++x) {
    bool in_a = false;
    for (int y : A)
      if (y == x) in_a = true;
    if (in_a) continue;
    map[a] = x;
    if (is_partial_iso(ext, s, map)) return true;
  }
  return false;
}

struct MissingExtension {
  std::vector<int> base;  // elements of s
  FinStruct ext;
};

// One-point extension audit: every fn-closed subset A with |A| < m must have
// all of its class extensions realized in s.
inline std::vector<MissingExtension> check_extension_property(const FinStruct& s,
                                                              const ClassRule& rule,
                                                              int m) {
  if (m > 4) throw guard_error("extension audit capped at m <= 4");
  std::vector<MissingExtension> missing;
  std::vector<int> subset;
  std::function<void(int)> rec = [&](int start) {
    if (int(subset.size()) < m) {
      if (is_fn_closed(s, subset)) {
        FinStruct A = induced(s, subset);
        for (auto& ext : one_point_extensions(rule, A))
          if (!extension_realized(s, subset, ext)) missing.push_back({subset, ext});
      }
      for (int x = start; x < s.size; ++x) {
        subset.push_back(x);
        rec(x + 1);
        subset.pop_back();
      }
    }
  };
  rec(0);
  return missing;
}

// ---------------------------------------------------------------------------
// HP / JEP / AP

enum class Verdict { Holds, Fails, Unknown };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct AmalgamationReport {
  Verdict hp = Verdict::Holds, jep = Verdict::Holds, ap = Verdict::Holds;
  std::string detail;
};

inline AmalgamationReport check_amalgamation(const Catalog& cat) {
  AmalgamationReport rep;
  const ClassRule& rule = cat.rule;
  // HP: one-point-deleted fn-closed subsets stay in the class catalog.
  for (int m = 1; m <= cat.max_size && rep.hp == Verdict::Holds; ++m)
    for (auto& s : cat.members[m]) {
      for (int drop = 0; drop < m; ++drop) {
        std::vector<int> dom;
        for (int x = 0; x < m; ++x)
          if (x != drop) dom.push_back(x);
        if (!is_fn_closed(s, dom)) continue;
        auto key = canonical_key(induced(s, dom));
        if (!cat.contains_key(m - 1, key)) {
          rep.hp = Verdict::Fails;
          rep.detail += "HP fails at a size-" + std::to_string(m) + " member; ";
          break;
        }
      }
      if (rep.hp != Verdict::Holds) break;
    }
  // JEP, quantified over pairs whose free join fits within the bound (so a
  // negative answer is conclusive for hereditary classes). For classes with
  // a global size bound inside the catalog the search is exhaustive.
  bool exhaustive = rule.size_bound && rule.size_bound <= cat.max_size;
  for (int mb = 1; mb <= cat.max_size && rep.jep == Verdict::Holds; ++mb)
    for (auto& B : cat.members[mb]) {
      for (int mc = 1; mc <= cat.max_size; ++mc) {
        if (mb + mc > cat.max_size && !exhaustive) continue;
        for (auto& C : cat.members[mc]) {
          bool found = false;
          for (int md = std::max(mb, mc); md <= cat.max_size && !found; ++md)
            for (auto& D : cat.members[md])
              if (embeds(B, D) && embeds(C, D)) {
                found = true;
                break;
              }
          if (!found) {
            bool conclusive = exhaustive || rule.sig.fns.empty();
            rep.jep = conclusive ? Verdict::Fails : Verdict::Unknown;
            if (conclusive)
              rep.detail += "JEP fails on a (" + std::to_string(mb) + "," +
                            std::to_string(mc) + ") pair; ";
            break;
          }
        }
        if (rep.jep != Verdict::Holds) break;
      }
      if (rep.jep != Verdict::Holds) break;
    }
  // AP over one-point spans (A, A+x, A+y), quantified so that the free
  // amalgam fits within the bound. An amalgam exists iff some member D
  // admits an embedding of A over which both extension types are realized;
  // identification of the two new points is allowed.
  for (int ma = 0; (ma + 2 <= cat.max_size ||
                    (exhaustive && ma + 1 <= rule.size_bound)) &&
                   rep.ap == Verdict::Holds;
       ++ma)
    for (auto& A : cat.members[ma]) {
      auto exts = one_point_extensions(rule, A);
      size_t ne = exts.size();
      if (ne == 0) continue;
      // realized[e] per (D, embedding); pairs covered jointly
      std::vector<std::vector<char>> pair_ok(ne, std::vector<char>(ne, 0));
      for (int md = ma + 1; md <= cat.max_size; ++md)
        for (auto& D : cat.members[md])
          for_each_embedding(A, D, [&](const std::vector<int>& e) {
            std::vector<int> dom(e.begin(), e.end());
            std::vector<char> got(ne, 0);
            for (size_t i = 0; i < ne; ++i) got[i] = extension_realized(D, dom, exts[i]);
            for (size_t i = 0; i < ne; ++i)
              if (got[i])
                for (size_t j = 0; j < ne; ++j)
                  if (got[j]) pair_ok[i][j] = 1;
            return true;
          });
      for (size_t i = 0; i < ne && rep.ap == Verdict::Holds; ++i)
        for (size_t j = i; j < ne; ++j)
          if (!pair_ok[i][j]) {
            bool conclusive = exhaustive || rule.sig.fns.empty();
            rep.ap = conclusive ? Verdict::Fails : Verdict::Unknown;
            if (conclusive)
              rep.detail += "AP fails on a span over a size-" + std::to_string(ma) +
                            " base; ";
            break;
          }
      if (rep.ap != Verdict::Holds) break;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Generic approximations

struct GenericApprox {
  FinStruct s;
  std::string class_name;
  int ep_requested = 0;
  int ep_verified = 0;
  uint64_t seed = 0;
};

namespace detail {

// Incremental builder for the relational classes that support seeded
// one-point completion (orders:n and graphs).
struct GenericBuilder {
  const ClassRule& rule;
  SplitMix64& rng;
  std::vector<std::vector<int>> order_lists;  // per linear order: ids ascending
  std::vector<std::vector<char>> adj;         // graph adjacency

  GenericBuilder(const ClassRule& r, SplitMix64& g) : rule(r), rng(g) {
    if (r.kind == ClassRule::Orders) order_lists.resize(r.n);
  }

  int size() const {
    if (rule.kind == ClassRule::Orders)
      return order_lists.empty() ? 0 : int(order_lists[0].size());
    return int(adj.size());
  }

  FinStruct materialize() const {
    FinStruct s = FinStruct::empty(rule.sig, size());
    if (rule.kind == ClassRule::Orders) {
      for (int i = 0; i < rule.n; ++i) {
        std::vector<int> rank(size());
        for (size_t p = 0; p < order_lists[i].size(); ++p) rank[order_lists[i][p]] = int(p);
        s.rel[i] = order_table_from_ranks(rank);
      }
    } else {
      for (int x = 0; x < size(); ++x)
        for (int y = 0; y < size(); ++y)
          if (adj[x][y]) s.rel[0].add({x, y});
      s.rel[0].finish();
    }
    return s;
  }

  // Insert a fresh point realizing ext над the elements `base`.
  void insert(const std::vector<int>& base, const FinStruct& ext) {
    int a = int(base.size());
    int id = size();
    if (rule.kind == ClassRule::Orders) {
      for (int i = 0; i < rule.n; ++i) {
        auto& lst = order_lists[i];
        // allowed slot range [lo, hi] from the cut over base
        int lo = 0, hi = int(lst.size());
        for (int j = 0; j < a; ++j) {
          int pos = 0;
          while (lst[pos] != base[j]) ++pos;
          int t[2] = {j, a};
          if (ext.rel[i].contains(t))
            lo = std::max(lo, pos + 1);  // base[j] below new point
          else
            hi = std::min(hi, pos);
        }
        if (lo > hi) throw error("internal: inconsistent cut");
        int slot = lo + int(rng.below(uint64_t(hi - lo + 1)));
        lst.insert(lst.begin() + slot, id);
      }
    } else {
      for (auto& row : adj) row.push_back(0);
      adj.push_back(std::vector<char>(id + 1, 0));
      for (int j = 0; j < a; ++j) {
        int t[2] = {j, a};
        if (ext.rel[0].contains(t)) adj[id][base[j]] = adj[base[j]][id] = 1;
      }
      for (int y = 0; y < id; ++y) {
        bool in_base = false;
        for (int b : base)
          if (b == y) in_base = true;
        if (!in_base && rng.coin()) adj[id][y] = adj[y][id] = 1;
      }
    }
  }
};

}  // namespace detail

FinStruct build_tn(int n, int target, uint64_t seed);  // defined below

inline GenericApprox build_generic(const ClassRule& rule, int target, int m, uint64_t seed) {
  if (target < 0 || target > kMaxUniverse) throw guard_error("target size out of range");
  GenericApprox g;
  g.class_name = rule.name;
  g.ep_requested = m;
  g.seed = seed;
  if (rule.kind == ClassRule::Tn) {
    g.s = build_tn(rule.n, target, seed);
  } else if (rule.kind == ClassRule::Orders || rule.kind == ClassRule::Graph) {
    SplitMix64 rng(seed);
    detail::GenericBuilder b(rule, rng);
    // FIFO over missing extensions; refill by a fresh audit when drained
    std::deque<MissingExtension> queue;
    int guard = 50 * (target + 1);
    while (b.size() < target && guard-- > 0) {
      FinStruct cur = b.materialize();
      if (queue.empty()) {
        auto missing = check_extension_property(cur, rule, m);
        for (auto& x : missing) queue.push_back(std::move(x));
        if (queue.empty()) break;  // extension-closed at this level
      }
      MissingExtension job = std::move(queue.front());
      queue.pop_front();
      if (extension_realized(cur, job.base, job.ext)) continue;
      b.insert(job.base, job.ext);
    }
    if (guard <= 0) throw error("build_generic: iteration cap exceeded");
    g.s = b.materialize();
  } else {
    throw guard_error(rule.name + ": class rule without extension closure support");
  }
  for (int level = 1; level <= m; ++level) {
    if (!check_extension_property(g.s, rule, level).empty()) break;
    g.ep_verified = level;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Isomorphism: exact via canonical forms for small structures, depth-d
// back-and-forth equivalence (hash-consed type towers) beyond.

struct IsoResult {
  enum K { Iso, NonIso, PartialIsoPos, PartialIsoNeg } kind;
  int depth = 0;
  std::vector<int> map;  // filled for K::Iso
};

namespace detail {

struct TypeTower {
  std::map<std::vector<uint64_t>, int> ids;
  int intern(const std::vector<uint64_t>& v) {
    auto [it, fresh] = ids.emplace(v, int(ids.size()));
    return it->second;
  }

  int top(const FinStruct& s, int depth) {
    // values for all tuples of size `depth` down to the empty tuple
    std::vector<int> tuple;
    return eval(s, tuple, depth);
  }

  int eval(const FinStruct& s, std::vector<int>& tuple, int remaining) {
    std::vector<uint64_t> v;
    if (!tuple.empty()) {
      auto fp = qf_type(s, tuple, {});
      v.push_back(fp.hash());
    } else {
      v.push_back(0);
    }
    if (remaining > 0) {
      std::vector<int> child;
      for (int x = 0; x < s.size; ++x) {
        tuple.push_back(x);
        child.push_back(eval(s, tuple, remaining - 1));
        tuple.pop_back();
      }
      std::sort(child.begin(), child.end());
      child.erase(std::unique(child.begin(), child.end()), child.end());
      for (int c : child) v.push_back(uint64_t(c) + 1);
    }
    return intern(v);
  }
};

}  // namespace detail

inline IsoResult back_and_forth_iso(const FinStruct& a, const FinStruct& b, int depth = 3) {
  if (!(a.sig == b.sig)) throw error("back_and_forth_iso: signature mismatch");
  IsoResult r;
  if (a.size <= 10 && b.size <= 10) {
    if (a.size != b.size) {
      r.kind = IsoResult::NonIso;
      return r;
    }
    Canonical ca = canonical_form(a), cb = canonical_form(b);
    if (encode_struct(ca.structure) == encode_struct(cb.structure)) {
      r.kind = IsoResult::Iso;
      // map = cb.relabel^{-1} ∘ ca.relabel
      std::vector<int> inv(b.size);
      for (int x = 0; x < b.size; ++x) inv[cb.relabel[x]] = x;
      r.map.resize(a.size);
      for (int x = 0; x < a.size; ++x) r.map[x] = inv[ca.relabel[x]];
    } else {
      r.kind = IsoResult::NonIso;
    }
    return r;
  }
  r.depth = depth;
  detail::TypeTower tower;
  int ta = tower.top(a, depth);
  int tb = tower.top(b, depth);
  r.kind = ta == tb ? IsoResult::PartialIsoPos : IsoResult::PartialIsoNeg;
  return r;
}

// ---------------------------------------------------------------------------
// Homogeneity audit (exhaustive, |s| <= 7): every partial isomorphism
// between fn-closed substructures must extend to an automorphism.

struct HomogeneityResult {
  bool homogeneous = true;
  std::vector<int> witness;  // a non-extendable partial map, -1 outside domain
};

inline HomogeneityResult is_homogeneous(const FinStruct& s) {
  if (s.size > 7) throw guard_error("homogeneity audit capped at size 7");
  HomogeneityResult res;
  auto autos = automorphisms(s);
  std::vector<int> map(s.size, -1);
  std::vector<char> used(s.size, 0);
  std::function<bool(int)> rec = [&](int x) {
    // every fn-closed partial iso seen so far must extend
    std::vector<int> dom;
    for (int i = 0; i < s.size; ++i)
      if (map[i] >= 0) dom.push_back(i);
    bool closed = is_fn_closed(s, dom);
    std::vector<int> img;
    for (int i : dom) img.push_back(map[i]);
    if (closed && is_fn_closed(s, img)) {
      bool extends = false;
      for (auto& al : autos) {
        bool ok = true;
        for (int i : dom)
          if (al[i] != map[i]) {
            ok = false;
            break;
          }
        if (ok) {
          extends = true;
          break;
        }
      }
      if (!extends) {
        res.homogeneous = false;
        res.witness = map;
        return false;
      }
    }
    for (int y = x; y < s.size; ++y) {  // y = next domain element considered
      for (int z = 0; z < s.size; ++z) {
        if (used[z]) continue;
        map[y] = z;
        used[z] = 1;
        if (is_partial_iso(s, s, map)) {
          if (!rec(y + 1)) return false;
        }
        used[z] = 0;
        map[y] = -1;
      }
    }
    return true;
  };
  rec(0);
  return res;
}

// ---------------------------------------------------------------------------
// T_n: finite members of the intertwined-order class, grown by inserting
// generator chains (a P0 point together with its images) into gap boxes.

inline FinStruct build_tn(int n, int target, uint64_t seed) {
  if (n < 1) throw guard_error("build_tn: n >= 1 required");
  if (target < 0 || target > kMaxUniverse) throw guard_error("target size out of range");
  ClassRule rule = make_tn_class(n);
  SplitMix64 rng(seed);
  std::vector<int> order;   // ids in ascending order
  std::vector<int> label;   // class per id
  std::vector<std::vector<int>> fv(std::max(0, n - 1));  // images per id
  int next_id = 0;
  auto new_elem = [&](int lab) {
    label.push_back(lab);
    for (auto& f : fv) f.push_back(-1);
    return next_id++;
  };
  while (next_id + n <= target) {
    int len = int(order.size());
    // choose n strictly ascending gap positions in 0..len
    std::vector<int> gaps;
    if (len + 1 < n) {
      for (int i = 0; i < n; ++i) gaps.push_back(std::min(i, len));
    } else {
      std::vector<int> all(len + 1);
      for (int i = 0; i <= len; ++i) all[i] = i;
      for (int i = 0; i < n; ++i) {
        int j = i + int(rng.below(uint64_t(all.size() - i)));
        std::swap(all[i], all[j]);
        gaps.push_back(all[i]);
      }
      std::sort(gaps.begin(), gaps.end());
      gaps.erase(std::unique(gaps.begin(), gaps.end()), gaps.end());
      while (int(gaps.size()) < n) gaps.push_back(gaps.back());  // degenerate early case
    }
    int x = new_elem(0);
    std::vector<int> chain{x};
    for (int i = 1; i < n; ++i) {
      int y = new_elem(i);
      fv[i - 1][x] = y;
      chain.push_back(y);
    }
    // insert chain members at the chosen gaps (later slots shift as earlier
    // members land)
    for (int i = n - 1; i >= 0; --i) order.insert(order.begin() + gaps[i], chain[i]);
  }
  FinStruct s = FinStruct::empty(rule.sig, next_id);
  std::vector<int> rank(next_id);
  for (size_t p = 0; p < order.size(); ++p) rank[order[p]] = int(p);
  s.rel[0] = detail::order_table_from_ranks(rank);
  for (int x = 0; x < next_id; ++x) s.pred[label[x]][x] = 1;
  for (int fi = 0; fi + 1 < n; ++fi)
    for (int x = 0; x < next_id; ++x) s.fn[fi][x] = fv[fi][x] < 0 ? x : fv[fi][x];
  if (!class_member(rule, s)) throw error("internal: build_tn produced a non-member");
  return s;
}

struct TnAudit {
  bool order_ok = false, partition_ok = false, fn_ok = false;
  bool pass() const { return order_ok && partition_ok && fn_ok; }
};

inline TnAudit audit_tn(const FinStruct& s, int n) {
  TnAudit a;
  a.order_ok = is_linear_order_table(s.rel[0], s.size);
  a.partition_ok = true;
  for (int x = 0; x < s.size; ++x) {
    int c = 0;
    for (auto& p : s.pred) c += p[x];
    if (c != 1) a.partition_ok = false;
  }
  a.fn_ok = true;
  for (int x = 0; x < s.size; ++x) {
    int prev = x;
    for (int i = 1; i < n; ++i) {
      int y = s.fn[i - 1][x];
      if (!s.pred[0][x]) {
        if (y != x) a.fn_ok = false;
      } else {
        int t[2] = {prev, y};
        if (!s.pred[i][y] || !s.rel[0].contains(t)) a.fn_ok = false;
        prev = y;
      }
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// The n! intertwined stacked-order structures: relabel which function index
// targets which block, so that the avatar chain of a base point reads in
// order sigma. Pairwise distinctness is certified by 2-type censuses.

inline std::vector<FinStruct> enumerate_intertwined(int n, int target, uint64_t seed = 11) {
  if (n < 1 || n > 4) throw guard_error("enumerate_intertwined: n in 1..4");
  FinStruct base = build_tn(n, target, seed);
  // invert the block bijections f_i : P0 -> Pi
  std::vector<std::vector<int>> finv(n, std::vector<int>(base.size, -1));
  for (int x = 0; x < base.size; ++x) {
    finv[0][x] = x;
    if (base.pred[0][x])
      for (int i = 1; i < n; ++i) finv[i][base.fn[i - 1][x]] = x;
  }
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  std::vector<FinStruct> out;
  do {
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[sigma[i]] = i;
    FinStruct v = base;
    for (int i = 0; i < n; ++i)
      v.pred[i] = base.pred[inv[i]];
    int j0 = inv[0];
    for (int i = 1; i < n; ++i) {
      int js = inv[i];
      for (int x = 0; x < base.size; ++x) {
        if (!v.pred[0][x]) {
          v.fn[i - 1][x] = x;
        } else {
          int u = finv[j0][x];  // base point of the chain through x
          int img = js == 0 ? u : base.fn[js - 1][u];
          v.fn[i - 1][x] = img;
        }
      }
    }
    out.push_back(std::move(v));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

// 2-type census over ordered pairs of distinct elements.
inline std::map<TypeFingerprint, int> pair_type_census(const FinStruct& s) {
  std::map<TypeFingerprint, int> census;
  for (int x = 0; x < s.size; ++x)
    for (int y = 0; y < s.size; ++y) {
      if (x == y) continue;
      ++census[qf_type(s, {x, y}, {})];
    }
  return census;
}

}  // namespace finhom
