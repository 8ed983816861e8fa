#include "doctest.h"

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/interpret.hpp"
#include "theon/rng.hpp"
#include "theon/theons.hpp"

using namespace theon;

TEST_CASE("coordinate index follows the subset precedence") {
  auto idx = coord_index(3, 3);
  std::vector<CoordMask> expect = {0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};
  CHECK(idx == expect);
}

TEST_CASE("constant graphon exact densities") {
  Theon w = builtin_theon("constant_graphon:1/2");
  for (int mv = 2; mv <= 4; ++mv) {
    for (const auto& cls : enumerate_models(builtin_theory("Graph"), mv)) {
      const Structure& h = cls.canonical;
      unsigned edges = static_cast<unsigned>(h.relations[0].size() / 2);
      unsigned pairs = static_cast<unsigned>(mv * (mv - 1) / 2);
      Rat expected = rat_pow(rat(1, 2), pairs);  // p^l (1-p)^(C(m,2)-l) at p = 1/2
      (void)edges;
      CHECK(exact_density(w, h, DKind::IND) == expected);
    }
  }
  // t_inj(H, W_p) = p^l
  Structure p3 = make_named_model("P", {"3"});
  CHECK(exact_density(w, p3, DKind::INJ) == rat(1, 4));
  Structure k3 = make_named_model("K", {"3"});
  CHECK(exact_density(w, k3, DKind::INJ) == rat(1, 8));
}

TEST_CASE("random hypergraphon vs triangle hypergraphon at K4minus") {
  Theon hp = builtin_theon("hypergraphon_Hp:1/2");
  Theon hq = builtin_theon("hypergraphon_Hprime:1/2");
  Structure k4m = make_named_model("K4minus", {});
  CHECK(exact_density(hp, k4m, DKind::IND) == rat(1, 16));  // p^3 (1-p)
  CHECK(exact_density(hq, k4m, DKind::IND) == 0);
}

TEST_CASE("star order against the standard linear order") {
  Theon lin = builtin_theon("linorder_std");
  for (int n = 2; n <= 5; ++n) {
    Structure s = make_named_model("star", {std::to_string(n)});
    // the star's language is {lt}, matching LinOrder
    CHECK(exact_density(lin, s, DKind::INJ) == rat(1, n));
  }
}

TEST_CASE("turan theon and the chromatic polynomial") {
  Theon t3 = builtin_theon("turan:3");
  Structure k3 = make_named_model("K", {"3"});
  CHECK(exact_density(t3, k3, DKind::INJ) == rat(2, 9));  // P_{K3}(3)/27 = 6/27
  Structure k4 = make_named_model("K", {"4"});
  CHECK(exact_density(t3, k4, DKind::INJ) == 0);  // K4 is not 3-colorable
}

TEST_CASE("linorder representations give identical densities") {
  Theon a = builtin_theon("linorder_std");
  Theon b = builtin_theon("linorder_mod:2");
  Theon c = builtin_theon("linorder_mod:3");
  for (int n = 1; n <= 4; ++n) {
    Structure tr(builtin_theory("LinOrder").language, n);
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) tr.add("lt", {i, j});
    Rat pa = exact_density(a, tr, DKind::P);
    CHECK(pa == exact_density(b, tr, DKind::P));
    CHECK(pa == exact_density(c, tr, DKind::P));
    CHECK(pa == 1);
  }
}

TEST_CASE("truth measure basics") {
  Theon w = builtin_theon("constant_graphon:1/2");
  Language lang = w.theory.language;
  // E(x,x): empty truth region
  CHECK(truth_measure(parse_formula("E(x,x)", lang), w) == 0);
  // symmetry on a pair-coordinate peon
  CHECK(truth_measure(parse_formula("E(x,y) <-> E(y,x)", lang), w) == 1);
  // edge density statement: measure of E(x,y) is 1/2
  CHECK(truth_measure(parse_formula("E(x,y)", lang), w) == rat(1, 2));
  // transitivity on the standard order
  Theon lin = builtin_theon("linorder_std");
  CHECK(truth_measure(parse_formula("lt(x,y) & lt(y,z) -> lt(x,z)", lin.theory.language), lin) == 1);
}

TEST_CASE("weak_check passes for every builtin theon") {
  for (const char* spec :
       {"constant_graphon:1/2", "hypergraphon_Hp:1/2", "hypergraphon_Hprime:1/2", "turan:3",
        "linorder_std", "linorder_mod:2", "linorder_mod:3", "standard_permuton:identity:2",
        "poseton_chain:2", "interval_example:3"}) {
    Theon t = builtin_theon(spec);
    WeakCheckReport rep = weak_check(t, t.theory);
    INFO(spec);
    CHECK(rep.pass());
  }
}

TEST_CASE("weak_check measures are exact (not just booleans)") {
  Theon lin = builtin_theon("linorder_mod:2");
  for (const auto& e : weak_check(lin, lin.theory).entries) CHECK(e.measure == 1);
}

TEST_CASE("strong check: standard order, permuton, poseton") {
  Theon lin = builtin_theon("linorder_std");
  TheonPointOracle lo(lin);
  CHECK(strong_check_sampled(lo, lin.theory, 2000, 7).pass);

  Theon perm = builtin_theon("standard_permuton:identity:2");
  TheonPointOracle po(perm);
  CHECK(strong_check_sampled(po, perm.theory, 2000, 7).pass);

  Theon pos = builtin_theon("poseton_chain:2");
  TheonPointOracle qo(pos);
  CHECK(strong_check_sampled(qo, pos.theory, 2000, 7).pass);
}

TEST_CASE("strong check fails for a graphon read as a tournament limit") {
  // symmetric peon violates antisymmetry at almost every off-diagonal point
  Theon w = builtin_theon("constant_graphon:1/2");
  Theon fake;
  fake.theory = builtin_theory("Tournament");
  fake.grid = w.grid;
  fake.peons = w.peons;
  TheonPointOracle o(fake);
  auto res = strong_check_sampled(o, fake.theory, 200, 11);
  CHECK_FALSE(res.pass);
}

TEST_CASE("sampling: constant graphon p=1 gives complete graphs") {
  Theon one;
  one.theory = builtin_theory("Graph");
  one.grid = GroundGrid::uniform(1);
  one.peons = {pe_const(true)};
  Structure s = sample_model(one, 5, 42);
  CHECK(isomorphic(s, make_named_model("K", {"5"})));
  Structure s0 = sample_model(one, 0, 42);
  CHECK(s0.n == 0);
  Structure s1 = sample_model(one, 1, 42);
  CHECK(s1.relations[0].empty());
}

TEST_CASE("sampling is deterministic in the seed") {
  Theon w = builtin_theon("constant_graphon:1/2");
  Structure a = sample_model(w, 6, 1234);
  Structure b = sample_model(w, 6, 1234);
  CHECK(a == b);
  Structure c = sample_model(w, 6, 1235);
  bool same = a == c;
  CHECK_FALSE(same);
}

TEST_CASE("sampled frequencies match exact densities (4 sigma)") {
  const uint64_t N = 20000;
  for (const char* spec : {"constant_graphon:1/2", "turan:3", "standard_permuton:identity:2"}) {
    Theon t = builtin_theon(spec);
    // labeled census at n = 3
    std::map<std::string, uint64_t> counts;
    for (uint64_t s = 0; s < N; ++s) {
      Structure m = sample_model(t, 3, rng::hash(99, {s}));
      counts[m.encode()] += 1;
    }
    for (const auto& cls : enumerate_models(t.theory, 3)) {
      // any labeled representative; t_ind is the labeled probability
      Rat q = exact_density(t, cls.canonical, DKind::IND);
      uint64_t c = counts.count(cls.canonical.encode()) ? counts[cls.canonical.encode()] : 0;
      Rat emp = Rat(static_cast<long>(c)) / Rat(static_cast<long>(N));
      Rat diff = emp - q;
      // (emp - q)^2 <= 16 q(1-q)/N, exact comparison
      INFO(spec, " ", cls.key);
      CHECK(diff * diff * Rat(static_cast<long>(N)) <= 16 * q * (1 - q) + Rat(1, 1000000));
    }
  }
}

TEST_CASE("chain rule transfers to theons") {
  Theon w = builtin_theon("turan:3");
  Theory g = builtin_theory("Graph");
  Structure k2 = make_named_model("K", {"2"});
  Rat direct = exact_density(w, k2, DKind::P);
  Rat chained = 0;
  for (const auto& mid : enumerate_models(g, 4))
    chained += density(DensityKind::P, k2, mid.canonical) * exact_density(w, mid.canonical, DKind::P);
  CHECK(direct == chained);
}

TEST_CASE("interpret_theon: triangle interpretation of a constant graphon") {
  auto tri = builtin_interpretation("triangle");
  Theon w = builtin_theon("constant_graphon:1/2");
  Theon h = interpret_theon(tri.translation, tri.source, w);
  // hyperedge density q^3
  Structure k33(h.theory.language, 3);
  for (const auto& t : Structure::distinct_tuples(3, 3)) k33.add(0, t);
  CHECK(exact_density(h, k33, DKind::INJ) == rat(1, 8));
  CHECK(weak_check(h, h.theory).pass());
}

TEST_CASE("interpret_theon: identity keeps densities") {
  Theon w = builtin_theon("constant_graphon:1/3");
  Translation id = identity_translation(w.theory.language);
  Theon w2 = interpret_theon(id, w.theory, w);
  for (int n = 2; n <= 3; ++n)
    for (const auto& cls : enumerate_models(w.theory, n))
      CHECK(exact_density(w, cls.canonical, DKind::IND) == exact_density(w2, cls.canonical, DKind::IND));
}

TEST_CASE("interpret_theon: order erasure of a permuton gives the lt1 order") {
  auto oe = builtin_interpretation("order_erasing_perm");
  Theon perm = builtin_theon("standard_permuton:identity:2");
  Theon lin = interpret_theon(oe.translation, oe.source, perm);
  CHECK(weak_check(lin, builtin_theory("LinOrder")).pass());
  Structure tr3 = make_named_model("Tr", {"3"});
  // relabel star-language: build the chain in lt language
  Structure chain(builtin_theory("LinOrder").language, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) chain.add("lt", {i, j});
  (void)tr3;
  CHECK(exact_density(lin, chain, DKind::P) == 1);
}

TEST_CASE("interpretation pullback identity on theons") {
  // p(M, I(N)) = evaluate(pi^I(M), against N) for the triangle interpretation
  auto tri = builtin_interpretation("triangle");
  Theon w = builtin_theon("constant_graphon:1/2");
  Theon h = interpret_theon(tri.translation, tri.source, w);
  for (int n = 3; n <= 3; ++n) {
    for (const auto& mcls : enumerate_models(tri.source, n)) {
      Rat lhs = exact_density(h, mcls.canonical, DKind::P);
      Rat rhs = 0;
      for (const auto& ncls : enumerate_models(tri.target, n)) {
        if (isomorphic(apply_model(tri.translation, ncls.canonical), mcls.canonical))
          rhs += exact_density(w, ncls.canonical, DKind::P);
      }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("permuton round trips") {
  // identity 2x2
  PlanarGrid id2;
  id2.g = 2;
  id2.w = {{rat(1, 2), Rat(0)}, {Rat(0), rat(1, 2)}};
  Theon t = standard_permuton(id2);
  Structure p12 = make_named_model("perm", {"12"});
  Structure p21 = make_named_model("perm", {"21"});
  CHECK(exact_density(t, p12, DKind::P) == 1);
  CHECK(exact_density(t, p21, DKind::P) == 0);
  CHECK(permuton_extract(t) == id2);

  // a doubly stochastic 3x3 grid
  PlanarGrid mu;
  mu.g = 3;
  auto r = [&](long a) { return rat(a, 18); };
  mu.w = {{r(3), r(2), r(1)}, {r(2), r(2), r(2)}, {r(1), r(2), r(3)}};
  Theon t3 = standard_permuton(mu);
  CHECK(weak_check(t3, t3.theory).pass());
  CHECK(permuton_extract(t3) == mu);

  // increasing theon written over a 1-D grid: both orders are the first axis
  Theon inc;
  inc.theory = builtin_theory("Perm");
  inc.grid = GroundGrid::uniform(2);
  inc.peons = {pe_axis_cmp(1, 2, 0), pe_axis_cmp(1, 2, 0)};
  PlanarGrid diag = permuton_extract(inc);
  CHECK(diag.g == 2);
  CHECK(diag.w[0][0] == rat(1, 2));
  CHECK(diag.w[1][1] == rat(1, 2));
  CHECK(diag.w[0][1] == 0);
}

TEST_CASE("poseton round trips") {
  for (int g : {2, 3}) {
    StepKernel w;
    w.g = g;
    w.w.assign(static_cast<size_t>(g * g), std::vector<Rat>(static_cast<size_t>(g * g), Rat(0)));
    // random-ish poseton kernel satisfying the cell laws: full order between
    // far columns, partial weight between adjacent ones
    for (int c1 = 0; c1 < g * g; ++c1)
      for (int c2 = 0; c2 < g * g; ++c2) {
        int col1 = c1 / g, col2 = c2 / g;
        if (col1 + 1 == col2 && g == 3)
          w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] = 0;  // adjacent: no relation
        else if (col1 < col2)
          w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] = 1;
      }
    Theon t = poseton_from_w(w);
    CHECK(weak_check(t, t.theory).pass());
    StepKernel back = poseton_extract(t);
    CHECK(back.g == w.g);
    CHECK(back.w == w.w);
  }

  // fractional kernel: W = 1/2 between the two columns of a g=2 grid is not
  // transitive-lawful unless chains close; with only two columns it is fine
  StepKernel half;
  half.g = 2;
  half.w.assign(4, std::vector<Rat>(4, Rat(0)));
  for (int c1 = 0; c1 < 4; ++c1)
    for (int c2 = 0; c2 < 4; ++c2)
      if (c1 / 2 < c2 / 2) half.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] = rat(1, 2);
  Theon th = poseton_from_w(half);
  StepKernel back = poseton_extract(th);
  CHECK(back.w == half.w);

  // W == 0: antichain; chain density vanishes
  StepKernel zero;
  zero.g = 2;
  zero.w.assign(4, std::vector<Rat>(4, Rat(0)));
  Theon tz = poseton_from_w(zero);
  Structure chain2(builtin_theory("Order").language, 2);
  chain2.add("lt", {1, 2});
  // project away lt1: density of any related pair under lt2 is 0
  auto oe = builtin_interpretation("order_erasing_extorder");
  Theon proj = interpret_theon(oe.translation, oe.source, tz);
  CHECK(exact_density(proj, chain2, DKind::P) == 0);
}

TEST_CASE("theon file round trips") {
  Theon t = builtin_theon("turan:3");
  std::string text = print_theon(t);
  Theon back = parse_theon(text);
  Structure k3 = make_named_model("K", {"3"});
  CHECK(exact_density(back, k3, DKind::INJ) == exact_density(t, k3, DKind::INJ));

  Theon cmp = parse_theon("cmptheon { theory=LinOrder m=2 peon lt := frac(x{1}) < frac(x{2}) }");
  Theon lm = builtin_theon("linorder_mod:2");
  Structure chain(builtin_theory("LinOrder").language, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) chain.add("lt", {i, j});
  CHECK(exact_density(cmp, chain, DKind::IND) == exact_density(lm, chain, DKind::IND));

  Theon step = parse_theon(
      "steptheon { theory=Graph cells=2 weights=1/2,1/2 peon E { (0,0,*) (1,1,*) } }");
  Structure k2 = make_named_model("K", {"2"});
  CHECK(exact_density(step, k2, DKind::IND) == rat(1, 2));
}

TEST_CASE("permuton extraction refuses inputs with skew offset coupling") {
  // one order by within-cell offset, the other by position: the section
  // image is a sloped line, which no finite grid represents exactly
  Theon skew;
  skew.theory = builtin_theory("Perm");
  skew.grid = GroundGrid::uniform(2);
  skew.peons = {pe_frac_cmp(1, 2, 0), pe_axis_cmp(1, 2, 0)};
  REQUIRE(weak_check(skew, skew.theory).pass());
  CHECK_THROWS(permuton_extract(skew));
}

TEST_CASE("weighted pair-coordinate tables behave like constant graphons") {
  // membership depends only on the pair coordinate's cell: cell 0 carries
  // weight 1/3, so this is the graphon with constant density 1/3
  Theon t;
  t.theory = builtin_theory("Graph");
  t.grid = GroundGrid::uniform(2);
  t.grid.cells[0].weight = rat(1, 3);
  t.grid.cells[1].weight = rat(2, 3);
  t.grid.cells[0].lo[0] = 0;
  t.grid.cells[0].hi[0] = rat(1, 3);
  t.grid.cells[1].lo[0] = rat(1, 3);
  t.grid.cells[1].hi[0] = 1;
  auto coords = coord_index(2, 2);
  auto bits = std::make_shared<std::vector<char>>(8, 0);
  for (int c1 = 0; c1 < 2; ++c1)
    for (int c2 = 0; c2 < 2; ++c2) (*bits)[static_cast<size_t>(c1 + 2 * (c2 + 2 * 0))] = 1;
  t.peons = {pe_table(bits, coords)};
  REQUIRE(weak_check(t, t.theory).pass());

  Theory g = builtin_theory("Graph");
  for (int m = 2; m <= 4; ++m)
    for (const auto& cls : enumerate_models(g, m)) {
      unsigned edges = static_cast<unsigned>(cls.canonical.relations[0].size() / 2);
      unsigned pairs = static_cast<unsigned>(m * (m - 1) / 2);
      Rat expected = rat_pow(rat(1, 3), edges) * rat_pow(rat(2, 3), pairs - edges);
      CHECK(exact_density(t, cls.canonical, DKind::IND) == expected);
    }

  // chain rule through level 3 for the same object
  Structure k2 = make_named_model("K", {"2"});
  Rat direct = exact_density(t, k2, DKind::P);
  Rat chained = 0;
  for (const auto& mid : enumerate_models(g, 3))
    chained += density(DensityKind::P, k2, mid.canonical) * exact_density(t, mid.canonical, DKind::P);
  CHECK(direct == chained);

  // and the sampler agrees
  std::map<std::string, uint64_t> counts;
  const uint64_t N = 20000;
  for (uint64_t s = 0; s < N; ++s) counts[sample_model(t, 3, rng::hash(77, {s})).encode()] += 1;
  for (const auto& cls : enumerate_models(g, 3)) {
    Rat q = exact_density(t, cls.canonical, DKind::IND);
    Rat emp = Rat(static_cast<long>(counts[cls.canonical.encode()])) / Rat(static_cast<long>(N));
    Rat diff = emp - q;
    CHECK(diff * diff * Rat(static_cast<long>(N)) <= 16 * q * (1 - q));
  }
}
