#include <catch2/catch_amalgamated.hpp>

#include "finhom/fraisse.hpp"
#include "finhom/json_io.hpp"
#include "finhom/structures.hpp"

using namespace finhom;

namespace {

// a structure with n random total orders, oracle-side rank bookkeeping
struct OrderFixture {
  FinStruct s;
  std::vector<std::vector<int>> ranks;  // ranks[i][x]
};

OrderFixture random_orders(int n, int size, uint64_t seed) {
  OrderFixture f;
  ClassRule rule = make_orders_class(n);
  f.s = FinStruct::empty(rule.sig, size);
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    std::vector<int> perm(size);
    std::iota(perm.begin(), perm.end(), 0);
    for (int j = size - 1; j > 0; --j) {
      int k = int(rng.below(uint64_t(j + 1)));
      std::swap(perm[j], perm[k]);
    }
    std::vector<int> rank(size);
    for (int p = 0; p < size; ++p) rank[perm[p]] = p;
    f.ranks.push_back(rank);
    for (int x = 0; x < size; ++x)
      for (int y = 0; y < size; ++y)
        if (rank[x] < rank[y]) f.s.rel[i].add({x, y});
    f.s.rel[i].finish();
  }
  return f;
}

bool le_rank(const std::vector<int>& rank, int x, int y) { return rank[x] <= rank[y]; }

}  // namespace

TEST_CASE("betweenness from small explicit orders") {
  OrderFixture f = random_orders(1, 3, 1);
  // rebuild as the natural chain 0<1<2
  f = OrderFixture{};
  ClassRule rule = make_orders_class(1);
  f.s = FinStruct::empty(rule.sig, 3);
  f.s.rel[0].add({0, 1});
  f.s.rel[0].add({0, 2});
  f.s.rel[0].add({1, 2});
  f.s.rel[0].finish();
  RelTable b = derive_betweenness(f.s, "le1");
  CHECK(b.contains({0, 1, 2}));
  CHECK(b.contains({2, 1, 0}));
  CHECK_FALSE(b.contains({1, 0, 2}));
}

TEST_CASE("betweenness keeps degenerate triples") {
  ClassRule rule = make_orders_class(1);
  FinStruct s = FinStruct::empty(rule.sig, 2);
  s.rel[0].add({0, 1});
  s.rel[0].finish();
  RelTable b = derive_betweenness(s, "le1");
  CHECK(b.contains({0, 0, 1}));  // x <= y <= z with x = y
  CHECK(b.contains({0, 1, 1}));
  CHECK_FALSE(b.contains({1, 0, 1}));
}

TEST_CASE("betweenness equals the brute-force formula on a random order") {
  OrderFixture f = random_orders(1, 5, 42);
  RelTable b = derive_betweenness(f.s, "le1");
  auto& r = f.ranks[0];
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int z = 0; z < 5; ++z) {
        bool expect = (le_rank(r, x, y) && le_rank(r, y, z)) ||
                      (le_rank(r, z, y) && le_rank(r, y, x));
        int t[3] = {x, y, z};
        CHECK(b.contains(t) == expect);
      }
}

TEST_CASE("circular order from the 3-chain") {
  ClassRule rule = make_orders_class(1);
  FinStruct s = FinStruct::empty(rule.sig, 3);
  s.rel[0].add({0, 1});
  s.rel[0].add({0, 2});
  s.rel[0].add({1, 2});
  s.rel[0].finish();
  RelTable c = derive_circular(s, "le1");
  CHECK(c.contains({0, 1, 2}));
  CHECK(c.contains({1, 2, 0}));
  CHECK(c.contains({2, 0, 1}));
  CHECK_FALSE(c.contains({0, 2, 1}));
}

TEST_CASE("circular wrap-around case on four points") {
  ClassRule rule = make_orders_class(1);
  FinStruct s = FinStruct::empty(rule.sig, 4);
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y) s.rel[0].add({x, y});
  s.rel[0].finish();
  RelTable c = derive_circular(s, "le1");
  CHECK(c.contains({3, 0, 2}));  // y <= z <= x with 0 <= 2 <= 3
}

TEST_CASE("circular equals brute force on a size-6 random order") {
  OrderFixture f = random_orders(1, 6, 7);
  RelTable c = derive_circular(f.s, "le1");
  auto& r = f.ranks[0];
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      for (int z = 0; z < 6; ++z) {
        bool expect = (le_rank(r, x, y) && le_rank(r, y, z)) ||
                      (le_rank(r, z, x) && le_rank(r, x, y)) ||
                      (le_rank(r, y, z) && le_rank(r, z, x));
        int t[3] = {x, y, z};
        CHECK(c.contains(t) == expect);
      }
}

namespace {

FinStruct circle_struct(int n) {
  Signature sig;
  sig.relations.push_back({"C", 3, RelKind::CircularOrder});
  FinStruct s = FinStruct::empty(sig, n);
  ClassRule rule = make_orders_class(1);
  FinStruct chain = FinStruct::empty(rule.sig, n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) chain.rel[0].add({x, y});
  chain.rel[0].finish();
  s.rel[0] = circular_table_from_order(chain.rel[0], n);
  return s;
}

}  // namespace

TEST_CASE("separation on the 4-circle") {
  FinStruct s = circle_struct(4);
  RelTable sep = derive_separation(s, "C");
  CHECK(sep.contains({0, 1, 2, 3}));
  CHECK_FALSE(sep.contains({0, 2, 1, 3}));
}

TEST_CASE("separation equals brute force on a size-5 circle") {
  FinStruct s = circle_struct(5);
  RelTable sep = derive_separation(s, "C");
  auto C = [&](int a, int b, int c) {
    int t[3] = {a, b, c};
    return s.rel[0].contains(t);
  };
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int z = 0; z < 5; ++z)
        for (int t = 0; t < 5; ++t) {
          bool d1 = C(x, y, z) && C(y, z, t) && C(z, t, x) && C(t, x, y);
          bool d2 = C(t, z, y) && C(z, y, x) && C(y, x, t) && C(x, t, z);
          int q[4] = {x, y, z, t};
          CHECK(sep.contains(q) == (d1 || d2));
        }
}

TEST_CASE("betweenness and separation are reversal invariant") {
  OrderFixture f = random_orders(1, 6, 9);
  FinStruct rev = f.s;
  rev.rel[0] = RelTable{};
  rev.rel[0].arity = 2;
  for (int x = 0; x < 6; ++x)
    for (int y = 0; y < 6; ++y)
      if (f.ranks[0][x] > f.ranks[0][y]) rev.rel[0].add({x, y});
  rev.rel[0].finish();
  CHECK(derive_betweenness(f.s, "le1") == derive_betweenness(rev, "le1"));

  Signature csig;
  csig.relations.push_back({"C", 3, RelKind::CircularOrder});
  FinStruct c1 = FinStruct::empty(csig, 6), c2 = c1;
  c1.rel[0] = circular_table_from_order(f.s.rel[0], 6);
  c2.rel[0] = circular_table_from_order(rev.rel[0], 6);
  CHECK(derive_separation(c1, "C") == derive_separation(c2, "C"));
}

TEST_CASE("cutting the derived circle recovers a linear order") {
  OrderFixture f = random_orders(1, 7, 21);
  RelTable c = derive_circular(f.s, "le1");
  for (int cut = 0; cut < 7; ++cut) {
    // x <' y iff C(cut, x, y), on the remaining points
    RelTable lin;
    lin.arity = 2;
    for (int x = 0; x < 7; ++x)
      for (int y = 0; y < 7; ++y) {
        if (x == cut || y == cut || x == y) continue;
        int t[3] = {cut, x, y};
        if (c.contains(t)) lin.add({x, y});
      }
    lin.finish();
    // relabel to 0..5 and verify the order axioms
    ClassRule rule = make_orders_class(1);
    FinStruct sub = FinStruct::empty(rule.sig, 6);
    std::vector<int> pos(7, -1);
    int at = 0;
    for (int x = 0; x < 7; ++x)
      if (x != cut) pos[x] = at++;
    for (size_t k = 0; k < lin.size(); ++k) {
      Tuple t = lin.decode(k);
      sub.rel[0].add({pos[t[0]], pos[t[1]]});
    }
    sub.rel[0].finish();
    CHECK(is_linear_order_table(sub.rel[0], 6));
  }
}

TEST_CASE("kind errors and unknown symbols") {
  OrderFixture f = random_orders(1, 4, 3);
  CHECK_THROWS_AS(derive_betweenness(f.s, "nope"), error);
  CHECK_THROWS_AS(derive_separation(f.s, "le1"), error);  // wrong kind
}

TEST_CASE("canonical form is relabeling invariant") {
  OrderFixture f = random_orders(2, 5, 17);
  SplitMix64 rng(5);
  std::vector<int> lab(5);
  std::iota(lab.begin(), lab.end(), 0);
  for (int j = 4; j > 0; --j) std::swap(lab[j], lab[rng.below(uint64_t(j + 1))]);
  FinStruct moved = relabel(f.s, lab);
  CHECK(canonical_key(f.s) == canonical_key(moved));
  CHECK(encode_struct(canonical_form(f.s).structure) ==
        encode_struct(canonical_form(moved).structure));
}

TEST_CASE("canonical form identifies 0<1 with its relabeling") {
  ClassRule rule = make_orders_class(1);
  FinStruct a = FinStruct::empty(rule.sig, 2);
  a.rel[0].add({0, 1});
  a.rel[0].finish();
  FinStruct b = FinStruct::empty(rule.sig, 2);
  b.rel[0].add({1, 0});
  b.rel[0].finish();
  CHECK(canonical_key(a) == canonical_key(b));
}

TEST_CASE("the six 2-order structures of size 3 stay distinct") {
  // brute-force pairwise isomorphism agrees with canonical keys
  ClassRule rule = make_orders_class(2);
  std::vector<FinStruct> all;
  std::vector<int> nat{0, 1, 2};
  std::vector<int> perm = nat;
  do {
    FinStruct s = FinStruct::empty(rule.sig, 3);
    for (int x = 0; x < 3; ++x)
      for (int y = 0; y < 3; ++y) {
        if (nat[x] < nat[y]) s.rel[0].add({x, y});
        if (perm[x] < perm[y]) s.rel[1].add({x, y});
      }
    s.rel[0].finish();
    s.rel[1].finish();
    all.push_back(s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::set<std::vector<uint64_t>> keys;
  for (auto& s : all) keys.insert(canonical_key(s));
  CHECK(keys.size() == 6);
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      CHECK_FALSE(embeds(all[i], all[j]) && embeds(all[j], all[i]) &&
                  canonical_key(all[i]) == canonical_key(all[j]));
}

TEST_CASE("canonical form is idempotent and isomorphic to the input") {
  OrderFixture f = random_orders(2, 6, 33);
  Canonical c = canonical_form(f.s);
  CHECK(encode_struct(canonical_form(c.structure).structure) == encode_struct(c.structure));
  // the certificate is an isomorphism
  CHECK(is_partial_iso(f.s, c.structure, c.relabel));
}

TEST_CASE("qf types separate cuts and agree with the partial-iso oracle") {
  ClassRule rule = make_orders_class(1);
  FinStruct s = FinStruct::empty(rule.sig, 6);
  for (int x = 0; x < 6; ++x)
    for (int y = x + 1; y < 6; ++y) s.rel[0].add({x, y});
  s.rel[0].finish();
  // both 0 and 1 sit below A = {3,4,5}; 5 does not
  CHECK(qf_type(s, {0}, {3, 4}) == qf_type(s, {1}, {3, 4}));
  CHECK_FALSE(qf_type(s, {0}, {3, 4}) == qf_type(s, {5}, {3, 4}));

  OrderFixture f = random_orders(2, 10, 77);
  std::vector<int> a_set;
  for (int a1 = 0; a1 < 10; ++a1)
    for (int a2 = a1 + 1; a2 < 10; ++a2)
      for (int a3 = a2 + 1; a3 < 10; ++a3) {
        std::vector<int> A{a1, a2, a3};
        for (int x = 0; x < 10; ++x)
          for (int y = 0; y < 10; ++y) {
            bool fp_equal = qf_type(f.s, {x}, A) == qf_type(f.s, {y}, A);
            // oracle: the map fixing A pointwise and sending x to y
            std::vector<int> map(10, -1);
            for (int p : A) map[p] = p;
            bool iso;
            if (x == y) {
              iso = true;
            } else if (map[x] >= 0 || map[y] >= 0) {
              iso = false;  // x or y inside A and not equal
            } else {
              map[x] = y;
              iso = is_partial_iso(f.s, f.s, map);
            }
            CHECK(fp_equal == iso);
          }
      }
}

TEST_CASE("same automorphism orbit implies equal fingerprints") {
  OrderFixture f = random_orders(1, 5, 101);
  Signature sig = f.s.sig;
  sig.preds.push_back("P");
  FinStruct s = FinStruct::empty(sig, 5);
  s.rel[0] = f.s.rel[0];
  s.pred[0][2] = 1;
  auto autos = automorphisms(s);
  for (auto& a : autos)
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) {
        std::vector<int> t1{x, y}, t2{a[x], a[y]};
        CHECK(qf_type(s, t1, {}) == qf_type(s, t2, {}));
      }
}

TEST_CASE("json round trip") {
  OrderFixture f = random_orders(2, 5, 5);
  Signature sig = f.s.sig;
  sig.preds.push_back("P");
  sig.fns.push_back("g");
  FinStruct s = FinStruct::empty(sig, 5);
  s.rel[0] = f.s.rel[0];
  s.rel[1] = f.s.rel[1];
  s.pred[0][1] = s.pred[0][3] = 1;
  s.fn[0] = {1, 1, 3, 3, 4};
  json j = to_json(s);
  FinStruct back = struct_from_json(j);
  CHECK(encode_struct(back) == encode_struct(s));
  CHECK(to_json(back) == j);
}

TEST_CASE("size guards and degenerate structures") {
  ClassRule rule = make_orders_class(1);
  FinStruct s0 = FinStruct::empty(rule.sig, 0);
  CHECK(derive_betweenness(s0, "le1").size() == 0);
  FinStruct s1 = FinStruct::empty(rule.sig, 1);
  RelTable b = derive_betweenness(s1, "le1");
  CHECK(b.contains({0, 0, 0}));
  CHECK(is_circular_order_table(derive_circular(s1, "le1"), 1));  // vacuous below 3
}
