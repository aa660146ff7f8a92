#include <catch2/catch_amalgamated.hpp>

#include "finhom/covers.hpp"

using namespace finhom;

namespace {

// independent lift-walk oracle: step the total space Z_{N*k} from s(a) to
// s(b) and watch for a repeated base point on the closed arc
bool lift_oracle(const CoverStruct& c, int a, int b) {
  int k = c.ks[0];
  long long total = (long long)c.N * k;
  long long w = a + (long long)c.N * c.sheet[a];
  long long target = b + (long long)c.N * c.sheet[b];
  std::vector<char> visited(c.N, 0);
  visited[a] = 1;
  int guard = int(total) + 1;
  while (w != target && guard-- > 0) {
    w = (w + 1) % total;
    int base = int(w % c.N);
    if (visited[base]) return false;
    visited[base] = 1;
  }
  return true;
}

CoverStruct alternating_cover() {
  CoverStruct c;
  c.N = 6;
  c.ks = {2};
  c.cls.assign(6, 0);
  c.sheet = {0, 1, 0, 1, 0, 1};
  return c;
}

}  // namespace

TEST_CASE("degree-1 covers relate all distinct pairs") {
  CoverStruct c = build_cover(9, 1, 3);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) CHECK(cover_rel(c, a, b) == (a != b));
}

TEST_CASE("the alternating 12-point cover matches the lift oracle on every arc") {
  CoverStruct c = alternating_cover();
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      CHECK(cover_rel(c, a, b) == lift_oracle(c, a, b));
    }
}

TEST_CASE("generic sections cover all sheets in every window") {
  CoverStruct c = build_cover(9, 3, 1);
  for (int v = 0; v < 9; ++v) {
    std::set<int> seen;
    for (int i = 0; i < 3; ++i) seen.insert(c.sheet[(v + i) % 9]);
    CHECK(seen.size() == 3);
  }
  CHECK_THROWS_AS(build_cover(8, 3, 1), guard_error);  // N >= 3k
}

TEST_CASE("random covers match the lift oracle") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    CoverStruct c = build_cover(12, 3, seed);
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b) {
        if (a == b) continue;
        CHECK(cover_rel(c, a, b) == lift_oracle(c, a, b));
      }
  }
}

TEST_CASE("local partitions: single class everywhere for k = 1") {
  CoverStruct c = build_cover(9, 1, 3);
  LocalEqRel r = local_eq(c, 0, 5);
  CHECK(r.classes == 1);
}

TEST_CASE("the alternating cover alternates on every 4-point interval") {
  CoverStruct c = alternating_cover();
  for (int s = 0; s < 6; ++s) {
    int t = (s + 5) % 6;  // interval of four points
    LocalEqRel r = local_eq(c, s, t);
    REQUIRE(r.points.size() == 4);
    CHECK(r.classes == 2);
    CHECK(r.label[0] == r.label[2]);
    CHECK(r.label[1] == r.label[3]);
    CHECK(r.label[0] != r.label[1]);
  }
}

TEST_CASE("local partitions agree with the pairwise relation and restrict well") {
  CoverStruct c = build_cover(12, 3, 7);
  LocalEqRel r = local_eq(c, 0, 9);
  // equivalence agrees with the displayed disjunction via R
  for (size_t i = 0; i < r.points.size(); ++i)
    for (size_t j = 0; j < r.points.size(); ++j) {
      bool eq = r.label[i] == r.label[j];
      bool formula;
      if (i == j) {
        formula = true;
      } else if (i < j) {
        formula = cover_rel(c, r.points[i], r.points[j]);
      } else {
        formula = cover_rel(c, r.points[j], r.points[i]);
      }
      CHECK(eq == formula);
    }
  CHECK(r.classes <= 3);
  // locality: the restriction to a subinterval is the restricted partition
  LocalEqRel sub = local_eq(c, 2, 7);
  for (size_t i = 0; i < sub.points.size(); ++i)
    for (size_t j = 0; j < sub.points.size(); ++j) {
      size_t pi = 0, pj = 0;
      while (r.points[pi] != sub.points[i]) ++pi;
      while (r.points[pj] != sub.points[j]) ++pj;
      CHECK((sub.label[i] == sub.label[j]) == (r.label[pi] == r.label[pj]));
    }
}

TEST_CASE("complexes over one k=2 cover: three cells of two classes") {
  CoverStruct c = build_cover(12, 2, 5);
  CellComplex cx = build_complex({c}, uint64_t(3));
  CHECK(cx.ncells == 3);
  CHECK(cx.cell_size == 2);
  for (auto& [key, map] : cx.transition) {
    std::set<int> img(map.begin(), map.end());
    CHECK(img.size() == map.size());
  }
  CHECK_FALSE(check_square(cx).has_value());
}

TEST_CASE("complexes over a k=1 cover are trivial") {
  CoverStruct c = build_cover(9, 1, 2);
  CellComplex cx = build_complex({c}, uint64_t(1));
  CHECK(cx.cell_size == 1);
  CHECK_FALSE(check_square(cx).has_value());
}

TEST_CASE("product complexes multiply class counts") {
  CoverStruct c2 = build_cover(12, 2, 1);
  CoverStruct c3 = build_cover(12, 3, 2);
  CellComplex cx = build_complex({c2, c3}, uint64_t(5));
  CHECK(cx.ncells == 9);
  CHECK(cx.cell_size == 6);
  CHECK_FALSE(check_square(cx).has_value());
}

TEST_CASE("a perturbed transition is caught by the square audit") {
  CoverStruct c2 = build_cover(12, 2, 1);
  CoverStruct c3 = build_cover(12, 3, 2);
  CellComplex cx = build_complex({c2, c3}, uint64_t(5));
  // swap two entries of one transition
  auto it = cx.transition.begin();
  std::swap(it->second[0], it->second[1]);
  auto defect = check_square(cx);
  REQUIRE(defect.has_value());
  CHECK_THROWS_AS(monodromy(cx), error);
}

TEST_CASE("path maps: identity, refinement, and grid independence") {
  CoverStruct c2 = build_cover(12, 2, 1);
  CoverStruct c3 = build_cover(12, 3, 2);
  CellComplex cx = build_complex({c2, c3}, uint64_t(5));
  auto idm = path_map(cx, {0});
  for (int i = 0; i < cx.cell_size; ++i) CHECK(idm[i] == i);
  // a step and its reverse cancel
  int other = cx.with_coord(0, 0, 1);
  auto there_back = path_map(cx, {0, other, 0});
  CHECK(there_back == idm);
  CHECK_THROWS_AS(path_map(cx, std::vector<int>{0, cx.with_coord(cx.with_coord(0, 0, 1), 1, 1)}),
                  error);
  // all monotone staircases between equal endpoints give equal maps
  // (coordinates only ever increase 0 -> 1 -> 2: no wrap)
  int target = cx.with_coord(cx.with_coord(0, 0, 2), 1, 2);
  std::vector<std::vector<int>> paths;
  std::vector<int> cur{0};
  std::function<void(int)> grow = [&](int cell) {
    if (cell == target) {
      paths.push_back(cur);
      return;
    }
    for (int i = 0; i < 2; ++i) {
      int cc = cx.coords(cell, i), tc = cx.coords(target, i);
      if (cc < tc) {
        int nxt = cx.with_coord(cell, i, cc + 1);
        cur.push_back(nxt);
        grow(nxt);
        cur.pop_back();
      }
    }
  };
  grow(0);
  REQUIRE(paths.size() > 1);
  auto ref = path_map(cx, paths[0]);
  for (auto& p : paths) CHECK(path_map(cx, p) == ref);
}

TEST_CASE("monodromy of a single S(3) cover is a 3-cycle") {
  CoverStruct c = build_cover(9, 3, 4);
  CellComplex cx = build_complex({c}, uint64_t(8));
  MonodromyAction act = monodromy(cx);
  REQUIRE(act.degree == 3);
  auto inv = classify_monodromy(act);
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].size == 3);
  CHECK(inv[0].cyclic_orders == std::vector<int>{3});
  CHECK(inv[0].product_form());
  CHECK(orbit_sizes(act) == std::vector<int>{3});
}

TEST_CASE("monodromy of S(2) x S(3) is transitive with stabilizer 2Z x 3Z") {
  CoverStruct c2 = build_cover(12, 2, 1);
  CoverStruct c3 = build_cover(12, 3, 2);
  CellComplex cx = build_complex({c2, c3}, uint64_t(5));
  MonodromyAction act = monodromy(cx);
  REQUIRE(act.degree == 6);
  // h1: three 2-cycles, h2: two 3-cycles
  auto cycle_lengths = [&](const std::vector<int>& g) {
    std::vector<int> lens;
    std::vector<char> seen(g.size(), 0);
    for (size_t x = 0; x < g.size(); ++x) {
      if (seen[x]) continue;
      int len = 0;
      size_t y = x;
      do {
        seen[y] = 1;
        y = size_t(g[y]);
        ++len;
      } while (y != x);
      lens.push_back(len);
    }
    std::sort(lens.begin(), lens.end());
    return lens;
  };
  CHECK(cycle_lengths(act.gens[0]) == std::vector<int>{2, 2, 2});
  CHECK(cycle_lengths(act.gens[1]) == std::vector<int>{3, 3});
  CHECK(orbit_sizes(act) == std::vector<int>{6});
  auto inv = classify_monodromy(act);
  REQUIRE(inv.size() == 1);
  CHECK(inv[0].size == 6);
  CHECK(inv[0].cyclic_orders == std::vector<int>{2, 3});
  CHECK(inv[0].product_form());
}

TEST_CASE("a partitioned (2,3) cover on one circle has orbits 2 and 3") {
  CoverStruct c = build_partitioned_cover(30, {2, 3}, 9);
  CellComplex cx = build_complex({c}, uint64_t(4));
  CHECK(cx.cell_size == 5);
  MonodromyAction act = monodromy(cx);
  auto inv = classify_monodromy(act);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0].size == 2);
  CHECK(inv[0].cyclic_orders == std::vector<int>{2});
  CHECK(inv[1].size == 3);
  CHECK(inv[1].cyclic_orders == std::vector<int>{3});
  CHECK(orbit_sizes(act) == std::vector<int>{2, 3});
}

TEST_CASE("the invariant is stable under relabeling and under cut choice") {
  CoverStruct c2 = build_cover(12, 2, 1);
  CoverStruct c3 = build_cover(12, 3, 2);
  CellComplex cx = build_complex({c2, c3}, uint64_t(5));
  MonodromyAction act = monodromy(cx);
  auto inv = classify_monodromy(act);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> perm(act.degree);
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = act.degree - 1; j > 0; --j)
      std::swap(perm[j], perm[rng.below(uint64_t(j + 1))]);
    MonodromyAction moved;
    moved.degree = act.degree;
    for (auto& g : act.gens) {
      std::vector<int> h(act.degree);
      for (int x = 0; x < act.degree; ++x) h[perm[x]] = perm[g[x]];
      moved.gens.push_back(h);
    }
    CHECK(classify_monodromy(moved) == inv);
  }
  // different cut points on the same covers
  for (uint64_t cutseed : {11ull, 12ull, 13ull}) {
    CellComplex cx2 = build_complex({c2, c3}, cutseed);
    CHECK(classify_monodromy(monodromy(cx2)) == inv);
  }
}

TEST_CASE("degenerate cut intervals are rejected") {
  CoverStruct c = build_cover(9, 3, 4);
  std::vector<std::array<int, 3>> cuts{{0, 1, 2}};  // intervals (0,1) and (1,2) are empty
  CHECK_THROWS_AS(build_complex({c}, cuts), error);
}
