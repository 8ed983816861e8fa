#include "doctest.h"

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/interpret.hpp"

using namespace theon;

TEST_CASE("translate_formula worked examples") {
  auto fa = builtin_interpretation("feedback_arc");
  FormulaPtr img = fa.translation.image(fa.translation.source.require("E"));
  CHECK(print_formula(img) == "lt(x1,x2) & E(x2,x1) | lt(x2,x1) & E(x1,x2)");

  auto tri = builtin_interpretation("triangle");
  FormulaPtr f = translate_formula(tri.translation, parse_formula("E(x,y,z)", tri.source.language));
  CHECK(print_formula(f) == "E(x,y) & E(x,z) & E(y,z)");

  // identity translation leaves formulas unchanged
  Theory g = builtin_theory("Graph");
  Translation id = identity_translation(g.language);
  FormulaPtr ax = g.axioms[1];
  CHECK(formula_equal(translate_formula(id, ax), ax));
}

TEST_CASE("apply_model worked examples") {
  auto tri = builtin_interpretation("triangle");
  Structure k4 = make_named_model("K", {"4"});
  Structure h = apply_model(tri.translation, k4);
  // complete 3-hypergraph on 4 vertices: 4 hyperedges x 6 orderings
  CHECK(h.relations[0].size() == 24);
  CHECK(is_model(h, builtin_theory("kHypergraph:3")));

  auto oe = builtin_interpretation("orientation_erasing");
  Structure c3 = make_named_model("C3arrow", {});
  CHECK(isomorphic(apply_model(oe.translation, c3), make_named_model("K", {"3"})));

  // feedback arc applied to (identity order, empty graph) gives Tr3
  auto fa = builtin_interpretation("feedback_arc");
  Structure n(fa.target.language, 3);  // TournamentOrder: E, lt
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) n.add("lt", {i, j});
  // need a tournament: make all arcs point down the order (E(j,i) for i<j)
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) n.add("E", {j, i});
  CHECK(is_model(n, fa.target));
  Structure g = apply_model(fa.translation, n);
  // each pair i<j has arc j->i, so edge present: the graph is K3 with the order
  CHECK(g.has(g.language.require("E"), {1, 2}));

  Structure n2(fa.target.language, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j) {
      n2.add("lt", {i, j});
      n2.add("E", {i, j});  // arcs up the order: no feedback edges
    }
  Structure g2 = apply_model(fa.translation, n2);
  CHECK(g2.relations[g2.language.require("E")].empty());
}

TEST_CASE("verify_interpretation") {
  auto fa = builtin_interpretation("feedback_arc");
  CHECK(verify_interpretation(fa.translation, fa.source, fa.target).pass);
  auto fi = builtin_interpretation("feedback_arc_inverse");
  CHECK(verify_interpretation(fi.translation, fi.source, fi.target).pass);
  auto fdf = builtin_interpretation("fdf");
  CHECK(verify_interpretation(fdf.translation, fdf.source, fdf.target).pass);
  auto ft = builtin_interpretation("fdf_thresh");
  CHECK(verify_interpretation(ft.translation, ft.source, ft.target).pass);

  // bogus: E -> E from Graph to Orgraph fails with a 2-vertex countermodel
  Theory g = builtin_theory("Graph"), o = builtin_theory("Orgraph");
  Translation bogus;
  bogus.name = "bogus";
  bogus.source = g.language;
  bogus.target = o.language;
  bogus.images.push_back(parse_formula("E(x1,x2)", o.language));
  auto res = verify_interpretation(bogus, g, o);
  CHECK_FALSE(res.pass);
  REQUIRE(res.countermodel.has_value());
  CHECK(res.countermodel->n <= 2);
}

TEST_CASE("compose and equivalence") {
  Theory g = builtin_theory("Graph");
  Translation id = identity_translation(g.language);
  auto oe = builtin_interpretation("orientation_erasing");
  // compose(identity, I) behaves as I on all models n <= 4
  Translation c = compose(id, oe.translation);
  for (const auto& cls : enumerate_models(oe.target, 4)) {
    CHECK(apply_model(c, cls.canonical) == apply_model(oe.translation, cls.canonical));
  }

  // feedback arc composed with its inverse is equivalent to the identity
  auto fa = builtin_interpretation("feedback_arc");
  auto fi = builtin_interpretation("feedback_arc_inverse");
  Translation round = compose(fa.translation, fi.translation);
  CHECK(equivalent(round, identity_translation(fa.source.language), fa.source));
  Translation round2 = compose(fi.translation, fa.translation);
  CHECK(equivalent(round2, identity_translation(fi.source.language), fi.source));

  // canonicalization round trip is equivalent to the identity
  auto cg = canonicalize(builtin_theory("Graph"));
  Translation jc = compose(cg.to_prime, cg.from_prime);
  CHECK(equivalent(jc, identity_translation(builtin_theory("Graph").language), builtin_theory("Graph")));
}

TEST_CASE("contravariant functoriality at the model level") {
  auto fa = builtin_interpretation("feedback_arc");
  auto fi = builtin_interpretation("feedback_arc_inverse");
  Translation comp = compose(fa.translation, fi.translation);
  for (const auto& cls : enumerate_models(fa.source, 4)) {
    Structure via_comp = apply_model(comp, cls.canonical);
    Structure via_steps = apply_model(fa.translation, apply_model(fi.translation, cls.canonical));
    CHECK(via_comp == via_steps);
  }
}

TEST_CASE("verified interpretations send models to models") {
  auto fdf = builtin_interpretation("fdf");
  for (int n = 0; n <= 4; ++n)
    for (const auto& cls : enumerate_models(fdf.target, n))
      CHECK(is_model(apply_model(fdf.translation, cls.canonical), fdf.source));
}

TEST_CASE("amalgamate") {
  // both trivial from the empty theory: disjoint union
  Theory empty = parse_theory("theory T0 { language {} }");
  Theory g = builtin_theory("Graph"), lo = builtin_theory("LinOrder");
  Translation triv1, triv2;
  triv1.name = "t1";
  triv1.source = empty.language;
  triv1.target = g.language;
  triv2.name = "t2";
  triv2.source = empty.language;
  triv2.target = lo.language;
  Amalgam am = amalgamate(triv1, empty, g, triv2, lo);
  CHECK(am.theory.language.size() == 2);
  CHECK(am.theory.axioms.size() == g.axioms.size() + lo.axioms.size());
  for (int n = 0; n <= 3; ++n)
    CHECK(enumerate_models(am.theory, n).size() ==
          enumerate_models(builtin_theory("GraphOrder"), n).size());

  // amalgamating two axiom-adding interpretations adds both axiom sets
  Theory tf = builtin_theory("TFGraph");
  Theory eq = builtin_theory("EqRel");
  Translation idg = identity_translation(g.language);
  Amalgam am2 = amalgamate(idg, g, tf, idg, eq);
  // models must be both triangle-free and P3-free: unions of edges and points
  for (const auto& cls : enumerate_models(am2.theory, 4)) {
    Structure proj = apply_model(am2.into_1, cls.canonical);
    CHECK(is_model(proj, tf));
  }

  // amalgamate(identity, identity) is isomorphic to T itself
  Amalgam am3 = amalgamate(idg, g, g, idg, g);
  Translation embed = am3.into_1;
  CHECK(verify_interpretation(embed, g, am3.theory).pass);
  for (int n = 0; n <= 3; ++n)
    CHECK(enumerate_models(am3.theory, n).size() == enumerate_models(g, n).size());
}

TEST_CASE("interpretation file format round trip") {
  auto ni = builtin_interpretation("orientation_erasing");
  std::string text = print_interpretation(ni);
  auto back = parse_interpretation(text);
  CHECK(back.translation.images.size() == ni.translation.images.size());
  CHECK(formula_equal(back.translation.image(0), ni.translation.image(0)));

  auto manual = parse_interpretation("interp { from=Graph to=Orgraph  E(x,y) := E(x,y) | E(y,x) }");
  CHECK(formula_equal(manual.translation.image(0), ni.translation.image(0)));
}
