#include "doctest.h"

#include "theon/builtins.hpp"
#include "theon/rng.hpp"
#include "theon/theons.hpp"

using namespace theon;

namespace {

// Random step graphon: symmetric in the two vertex cells, constant in the
// pair coordinate.
Theon random_step_graphon(int m, uint64_t seed) {
  Theon t;
  t.theory = builtin_theory("Graph");
  t.grid = GroundGrid::uniform(m);
  auto coords = coord_index(2, 2);
  size_t size = static_cast<size_t>(m) * static_cast<size_t>(m) * static_cast<size_t>(m);
  auto bits = std::make_shared<std::vector<char>>(size, 0);
  for (int c1 = 0; c1 < m; ++c1)
    for (int c2 = c1; c2 < m; ++c2) {
      char v = (rng::hash(seed, {static_cast<uint64_t>(c1), static_cast<uint64_t>(c2)}) & 1) ? 1 : 0;
      for (int c12 = 0; c12 < m; ++c12) {
        (*bits)[static_cast<size_t>(c1 + m * (c2 + m * c12))] = v;
        (*bits)[static_cast<size_t>(c2 + m * (c1 + m * c12))] = v;
      }
    }
  t.peons = {pe_table(bits, coords)};
  return t;
}

TheonPoint pair_point(const Coord& a, const Coord& b, const Coord& ab) {
  TheonPoint p;
  p.masks = {1, 2, 3};
  p.coords = {a, b, ab};
  return p;
}

}  // namespace

TEST_CASE("horn oracle density-point rule on cells") {
  Theon g = random_step_graphon(2, 5);
  auto oracle = strengthen_horn(g);

  // interior point of a member cell is a member
  auto table = [&](int c1, int c2) {
    Coord a{c1, {1, 1}}, b{c2, {1, 1}}, ab{0, {1, 1}};
    return oracle->member(0, pair_point(a, b, ab));
  };
  TheonPointOracle base(g);
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2) {
      Coord a{c1, {7, 7}}, b{c2, {9, 9}}, ab{1, {3, 3}};
      CHECK(oracle->member(0, pair_point(a, b, ab)) == base.member(0, pair_point(a, b, ab)));
    }
  (void)table;

  // face point between a member and a non-member cell is not a density point
  // construct explicitly: cells (0,0) in, (0,1) out in some random grid
  Theon h;
  h.theory = builtin_theory("Graph");
  h.grid = GroundGrid::uniform(2);
  auto coords = coord_index(2, 2);
  auto bits = std::make_shared<std::vector<char>>(8, 0);
  // member iff both vertex cells are 0 (any pair cell)
  (*bits)[0 + 2 * (0 + 2 * 0)] = 1;
  (*bits)[0 + 2 * (0 + 2 * 1)] = 1;
  auto oh = strengthen_horn(Theon{h.theory, h.grid, {pe_table(bits, coords)}});
  Coord inside{0, {5, 0}};
  Coord boundary{1, {0, 0}};  // position 1/2 = face between cells 0 and 1
  Coord pairc{0, {9, 9}};
  CHECK(oh->member(0, pair_point(inside, inside, pairc)));
  CHECK_FALSE(oh->member(0, pair_point(inside, boundary, pairc)));

  // positive mode takes the closure instead
  auto op = strengthen_horn(Theon{h.theory, h.grid, {pe_table(bits, coords)}}, /*positive=*/true);
  CHECK(op->member(0, pair_point(inside, boundary, pairc)));
}

TEST_CASE("horn-strengthened random step graphons agree with the input and are strong") {
  for (uint64_t seed : {1u, 2u, 3u}) {
    Theon g = random_step_graphon(3, seed);
    REQUIRE(weak_check(g, g.theory).pass());
    auto oracle = strengthen_horn(g);
    TheonPointOracle base(g);
    // agreement on sampled interior points
    for (uint64_t s = 0; s < 2000; ++s) {
      Structure a = sample_model(*oracle, 2, rng::hash(seed, {s}));
      Structure b = sample_model(base, 2, rng::hash(seed, {s}));
      CHECK(a == b);
    }
    CHECK(strong_check_sampled(*oracle, g.theory, 2000, seed).pass);
  }
}

TEST_CASE("linorder strengthening of the standard order") {
  Theon lin = builtin_theon("linorder_std");
  Rat bad = -1;
  auto oracle = strengthen_linorder(lin, &bad);
  CHECK(bad == 0);
  // output orders by first coordinate
  for (uint64_t s = 0; s < 200; ++s) {
    Coord a{0, {rng::hash(1, {s, 1}), 0}};
    Coord b{0, {rng::hash(1, {s, 2}), 0}};
    Coord ab{0, {rng::hash(1, {s, 3}), 0}};
    if (a.off[0] == b.off[0]) continue;
    bool expect = a.off[0] < b.off[0];
    CHECK(oracle->member(0, pair_point(a, b, ab)) == expect);
  }
  CHECK(strong_check_sampled(*oracle, lin.theory, 1000, 3).pass);
}

TEST_CASE("linorder strengthening of linorder_mod(2)") {
  Theon lin = builtin_theon("linorder_mod:2");
  Rat bad = -1;
  auto oracle = strengthen_linorder(lin, &bad);
  CHECK(bad == 0);
  TheonPointOracle base(lin);
  // agreement with the input on a measure-one set of sampled pairs
  int agree = 0, total = 0;
  for (uint64_t s = 0; s < 1000; ++s) {
    Coord a{static_cast<int>(rng::hash(2, {s, 1}) & 1), {rng::hash(2, {s, 2}), 0}};
    Coord b{static_cast<int>(rng::hash(2, {s, 3}) & 1), {rng::hash(2, {s, 4}), 0}};
    Coord ab{0, {rng::hash(2, {s, 5}), 0}};
    ++total;
    if (oracle->member(0, pair_point(a, b, ab)) == base.member(0, pair_point(a, b, ab))) ++agree;
  }
  CHECK(agree == total);
  CHECK(strong_check_sampled(*oracle, lin.theory, 1000, 5).pass);
}

TEST_CASE("linorder strengthening via step tables") {
  // two cells ordered blockwise: cell 0 before cell 1, random inside
  Theon t;
  t.theory = builtin_theory("LinOrder");
  t.grid = GroundGrid::uniform(2);
  auto coords = coord_index(2, 2);
  auto bits = std::make_shared<std::vector<char>>(8, 0);
  // lt holds iff cell(x) = 0 and cell(y) = 1 ... and half of the diagonal via
  // the pair coordinate (this is only weak after within-cell repair)
  for (int c12 = 0; c12 < 2; ++c12) (*bits)[static_cast<size_t>(0 + 2 * (1 + 2 * c12))] = 1;
  // same-cell pairs: decide by the pair coordinate cell (not transitive
  // pointwise, but weak violations have measure zero? they do not: use the
  // antisymmetrized pipeline input with a genuinely weak theon instead)
  Theon ordered;
  ordered.theory = t.theory;
  ordered.grid = t.grid;
  ordered.peons = {pe_or({pe_and({pe_cell_in(1, {1, 0}), pe_cell_in(2, {0, 1})}),
                          pe_and({pe_cell_in(1, {1, 0}), pe_cell_in(2, {1, 0}), pe_frac_cmp(1, 2, 0)}),
                          pe_and({pe_cell_in(1, {0, 1}), pe_cell_in(2, {0, 1}), pe_frac_cmp(1, 2, 0)})})};
  REQUIRE(weak_check(ordered, ordered.theory).pass());
  Rat bad = -1;
  auto oracle = strengthen_linorder(ordered, &bad);
  CHECK(bad == 0);
  CHECK(strong_check_sampled(*oracle, ordered.theory, 1000, 9).pass);
  (void)bits;
}

TEST_CASE("strengthen_horn rejects non-step input") {
  Theon lin = builtin_theon("linorder_std");
  CHECK_THROWS(strengthen_horn(lin));
}

TEST_CASE("strengthen_linorder rejects non-weak input") {
  // constant-true peon is not antisymmetric-weak
  Theon badt;
  badt.theory = builtin_theory("LinOrder");
  badt.grid = GroundGrid::uniform(1);
  badt.peons = {pe_const(true)};
  CHECK_THROWS(strengthen_linorder(badt));
}
