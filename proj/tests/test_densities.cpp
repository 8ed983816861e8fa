#include "doctest.h"

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/rng.hpp"

using namespace theon;

namespace {

Structure random_graph(int n, uint64_t seed) {
  Theory g = builtin_theory("Graph");
  Structure s(g.language, n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (rng::hash(seed, {static_cast<uint64_t>(i), static_cast<uint64_t>(j)}) & 1) {
        s.add("E", {i, j});
        s.add("E", {j, i});
      }
  return s;
}

Structure complement(const Structure& g) {
  Structure out(g.language, g.n);
  for (int i = 1; i <= g.n; ++i)
    for (int j = 1; j <= g.n; ++j)
      if (i != j && !g.has(0, {i, j})) out.add(0, {i, j});
  return out;
}

}  // namespace

TEST_CASE("graph densities from the worked examples") {
  auto K2 = make_named_model("K", {"2"});
  auto P3 = make_named_model("P", {"3"});
  auto P4 = make_named_model("P", {"4"});
  auto K5 = make_named_model("K", {"5"});
  CHECK(density(DensityKind::P, K2, P3) == rat(2, 3));
  CHECK(density(DensityKind::IND, P3, P4) == rat(1, 6));
  CHECK(density(DensityKind::INJ, P3, K5) == 1);
  CHECK(density(DensityKind::P, P3, make_named_model("K", {"6"})) == 0);
  // larger M than N
  CHECK(density(DensityKind::P, P4, P3) == 0);
}

TEST_CASE("t_ind(M,M) = aut/m!") {
  for (const char* nm : {"P3", "C5", "K4"}) {
    Structure m = make_named_model(nm, {});
    auto cls = canonical_form(m);
    CHECK(density(DensityKind::IND, m, m) ==
          Rat(static_cast<long>(cls.aut_count)) / Rat(static_cast<long>(factorial_u64(static_cast<unsigned>(m.n)))));
  }
}

TEST_CASE("tournament densities") {
  auto Tr3 = make_named_model("Tr", {"3"});
  auto C3 = make_named_model("C3arrow", {});
  auto W4 = make_named_model("W4", {});
  auto L4 = make_named_model("L4", {});
  CHECK(density(DensityKind::P, Tr3, W4) == rat(3, 4));
  CHECK(density(DensityKind::P, Tr3, L4) == rat(3, 4));
  CHECK(density(DensityKind::IND, Tr3, W4) == rat(1, 8));
  CHECK(density(DensityKind::IND, Tr3, L4) == rat(1, 8));
  CHECK(density(DensityKind::P, C3, W4) == rat(1, 4));
  CHECK(density(DensityKind::P, C3, L4) == rat(1, 4));
  CHECK(density(DensityKind::IND, C3, L4) == rat(1, 8));
}

TEST_CASE("permutation pattern densities in 14235") {
  auto big = make_named_model("perm", {"14235"});
  CHECK(density(DensityKind::P, make_named_model("perm", {"123"}), big) == rat(1, 2));
  CHECK(density(DensityKind::P, make_named_model("perm", {"132"}), big) == rat(1, 5));
  CHECK(density(DensityKind::P, make_named_model("perm", {"213"}), big) == rat(1, 5));
  CHECK(density(DensityKind::P, make_named_model("perm", {"231"}), big) == 0);
  CHECK(density(DensityKind::P, make_named_model("perm", {"312"}), big) == rat(1, 10));
  CHECK(density(DensityKind::P, make_named_model("perm", {"321"}), big) == 0);
}

TEST_CASE("multi-densities") {
  auto K2 = make_named_model("K", {"2"});
  auto I2 = make_named_model("I", {"2"});
  auto P5 = make_named_model("P", {"5"});
  CHECK(multi_density({K2, K2}, P5) == rat(1, 5));
  CHECK(multi_density({K2, I2}, P5) == rat(1, 5));
  auto big = make_named_model("perm", {"14235"});
  auto p12 = make_named_model("perm", {"12"});
  auto p21 = make_named_model("perm", {"21"});
  CHECK(multi_density({p12, p12}, big) == rat(3, 5));
  CHECK(multi_density({p12, p21}, big) == rat(1, 5));
  CHECK(multi_density({p21, p21}, big) == 0);
  // overflow convention
  CHECK(multi_density({P5, P5}, P5) == 0);
}

TEST_CASE("mobius on graphs is (-1)^extra-edges") {
  Theory g = builtin_theory("Graph");
  Structure i3(g.language, 3);
  Structure p3 = make_named_model("P", {"3"});
  Structure k3 = make_named_model("K", {"3"});
  CHECK(mobius(i3, i3, g) == 1);
  CHECK(mobius(i3, p3, g) == 1);   // 2 extra edges... (-1)^2
  CHECK(mobius(i3, k3, g) == -1);  // 3 extra edges
  Structure e1(g.language, 3);
  e1.add("E", {1, 2});
  e1.add("E", {2, 1});
  CHECK(mobius(e1, k3, g) == 1);
  CHECK(mobius(p3, e1, g) == 0);  // not a subset
}

TEST_CASE("mobius is trivial for tournaments") {
  Theory t = builtin_theory("Tournament");
  auto tr3 = make_named_model("Tr", {"3"});
  auto c3 = make_named_model("C3arrow", {});
  CHECK(mobius(tr3, tr3, t) == 1);
  CHECK(mobius(tr3, c3, t) == 0);
  // supermodels of a tournament on the same vertex set: only itself
  CHECK(supermodels(tr3, t).size() == 1);
}

TEST_CASE("inj/ind conversions round trip against P6") {
  Theory g = builtin_theory("Graph");
  Structure n = make_named_model("P", {"6"});
  for (const auto& mcls : enumerate_models(g, 4)) {
    const Structure& m = mcls.canonical;
    ClassTable tind, tinj;
    for (const auto& sup : supermodels(m, g)) {
      auto key = canonical_form(sup).key;
      if (!tind.count(key)) {
        tind[key] = density(DensityKind::IND, sup, n);
        tinj[key] = density(DensityKind::INJ, sup, n);
      }
    }
    CHECK(tinj_from_tind(m, g, tind) == density(DensityKind::INJ, m, n));
    CHECK(tind_from_tinj(m, g, tinj) == density(DensityKind::IND, m, n));
  }
}

TEST_CASE("t_inj(I3, G) = 1 via the supermodel sum") {
  Theory g = builtin_theory("Graph");
  Structure i3(g.language, 3);
  Structure n = random_graph(6, 11);
  ClassTable tind;
  for (const auto& sup : supermodels(i3, g)) {
    auto key = canonical_form(sup).key;
    if (!tind.count(key)) tind[key] = density(DensityKind::IND, sup, n);
  }
  CHECK(tinj_from_tind(i3, g, tind) == 1);
  CHECK(density(DensityKind::INJ, i3, n) == 1);
}

TEST_CASE("chain rule for graphs through level 4") {
  Theory g = builtin_theory("Graph");
  Structure n = random_graph(7, 3);
  auto level4 = enumerate_models(g, 4);
  for (const auto& mcls : enumerate_models(g, 3)) {
    const Structure& m = mcls.canonical;
    Rat direct = density(DensityKind::P, m, n);
    Rat chained = 0;
    for (const auto& mid : level4)
      chained += density(DensityKind::P, m, mid.canonical) * density(DensityKind::P, mid.canonical, n);
    CHECK(direct == chained);
  }
}

TEST_CASE("multi chain rule") {
  Theory g = builtin_theory("Graph");
  auto K2 = make_named_model("K", {"2"});
  auto I2 = make_named_model("I", {"2"});
  Structure n = random_graph(7, 5);
  auto level4 = enumerate_models(g, 4);
  Rat direct = multi_density({K2, I2}, n);
  Rat chained = 0;
  for (const auto& mid : level4)
    chained += multi_density({K2, I2}, mid.canonical) * density(DensityKind::P, mid.canonical, n);
  CHECK(direct == chained);
}

TEST_CASE("conversion identity t_ind = aut/m! p") {
  Structure m = make_named_model("P", {"3"});
  Structure n = random_graph(7, 9);
  auto cls = canonical_form(m);
  CHECK(density(DensityKind::IND, m, n) ==
        density(DensityKind::P, m, n) * Rat(static_cast<long>(cls.aut_count)) /
            Rat(static_cast<long>(factorial_u64(3))));
}

TEST_CASE("collision bound on random instances") {
  auto K2 = make_named_model("K", {"2"});
  auto P3 = make_named_model("P", {"3"});
  for (uint64_t seed : {21u, 22u, 23u}) {
    Structure n = random_graph(12, seed);
    Rat gap = multi_density({K2, P3}, n) -
              density(DensityKind::P, K2, n) * density(DensityKind::P, P3, n);
    Rat bound = rat((2 + 3) * (2 + 3), 12);
    CHECK(abs(gap) <= bound);
  }
}

TEST_CASE("complementation p(H,G) = p(H-bar, G-bar)") {
  Structure g = random_graph(7, 31);
  for (const auto& hcls : enumerate_models(builtin_theory("Graph"), 3)) {
    const Structure& h = hcls.canonical;
    CHECK(density(DensityKind::P, h, g) == density(DensityKind::P, complement(h), complement(g)));
  }
}

TEST_CASE("isomorphism invariance of densities") {
  Structure n = random_graph(6, 41);
  // relabeled copy of n
  Structure n2(n.language, n.n);
  int perm[7] = {0, 3, 5, 1, 6, 2, 4};
  for (const auto& t : n.relations[0]) n2.add(0, {perm[t[0]], perm[t[1]]});
  auto P3 = make_named_model("P", {"3"});
  for (auto kind : {DensityKind::P, DensityKind::IND, DensityKind::INJ})
    CHECK(density(kind, P3, n) == density(kind, P3, n2));
}
