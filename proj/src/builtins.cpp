#include "theon/builtins.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace theon {

namespace {

Theory from_dsl(const std::string& text) { return parse_theory(text); }

Theory graph() {
  return from_dsl(
      "theory Graph { language { E/2 }"
      " axiom !E(x,x);"
      " axiom E(x,y) <-> E(y,x); }");
}

Theory digraph() {
  return from_dsl("theory Digraph { language { E/2 } axiom !E(x,x); }");
}

Theory orgraph() {
  return from_dsl(
      "theory Orgraph { language { E/2 }"
      " axiom !E(x,x);"
      " axiom E(x,y) -> !E(y,x); }");
}

Theory tournament() {
  return from_dsl(
      "theory Tournament { language { E/2 }"
      " axiom !E(x,x);"
      " axiom x != y -> (E(x,y) <-> !E(y,x)); }");
}

// All symmetric-group images of one k-tuple of variables, plus canonicity.
Theory k_hypergraph(int k) {
  std::vector<std::string> xs;
  for (int i = 1; i <= k; ++i) xs.push_back("x" + std::to_string(i));
  Language lang({{"E", k}});
  Theory t;
  t.name = "Hypergraph" + std::to_string(k);
  t.language = lang;
  // canonicity: x_i = x_j -> !E(x1..xk)
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      t.axioms.push_back(f_implies(f_equal(xs[static_cast<size_t>(i)], xs[static_cast<size_t>(j)]),
                                   f_not(f_atom("E", xs))));
  // symmetry under adjacent transpositions generates S_k
  for (int i = 0; i + 1 < k; ++i) {
    std::vector<std::string> ys = xs;
    std::swap(ys[static_cast<size_t>(i)], ys[static_cast<size_t>(i + 1)]);
    t.axioms.push_back(f_iff(f_atom("E", xs), f_atom("E", ys)));
  }
  return t;
}

Theory c_coloring(int c) {
  std::ostringstream os;
  os << "theory Coloring" << c << " { language { ";
  for (int i = 0; i < c; ++i) os << (i ? ", " : "") << "chi" << i << "/1";
  os << " }";
  for (int i = 0; i < c; ++i)
    for (int j = i + 1; j < c; ++j) os << " axiom !chi" << i << "(x) | !chi" << j << "(x);";
  os << " axiom ";
  for (int i = 0; i < c; ++i) os << (i ? " | " : "") << "chi" << i << "(x)";
  os << "; }";
  return from_dsl(os.str());
}

Theory c_colored_graph(int c) {
  std::ostringstream os;
  os << "theory ColoredGraph" << c << " { language { ";
  for (int i = 0; i < c; ++i) os << (i ? ", " : "") << "E" << i << "/2";
  os << " }";
  for (int i = 0; i < c; ++i) {
    os << " axiom !E" << i << "(x,x);";
    os << " axiom E" << i << "(x,y) <-> E" << i << "(y,x);";
  }
  for (int i = 0; i < c; ++i)
    for (int j = i + 1; j < c; ++j) os << " axiom !E" << i << "(x,y) | !E" << j << "(x,y);";
  os << " }";
  return from_dsl(os.str());
}

Theory c_colored_complete(int c) {
  Theory t = c_colored_graph(c);
  t.name = "ColoredComplete" + std::to_string(c);
  std::ostringstream os;
  os << "x != y -> (";
  for (int i = 0; i < c; ++i) os << (i ? " | " : "") << "E" << i << "(x,y)";
  os << ")";
  t.axioms.push_back(parse_formula(os.str(), t.language));
  return t;
}

Theory lin_order() {
  return from_dsl(
      "theory LinOrder { language { lt/2 }"
      " axiom !lt(x,x);"
      " axiom x != y -> (lt(x,y) <-> !lt(y,x));"
      " axiom lt(x,y) & lt(y,z) -> lt(x,z); }");
}

Theory order() {
  return from_dsl(
      "theory Order { language { lt/2 }"
      " axiom !lt(x,x);"
      " axiom lt(x,y) -> !lt(y,x);"
      " axiom lt(x,y) & lt(y,z) -> lt(x,z); }");
}

Theory pre_order() {
  return from_dsl(
      "theory PreOrder { language { lt/2 }"
      " axiom !lt(x,x);"
      " axiom x != z & lt(x,y) & lt(y,z) -> lt(x,z); }");
}

Theory cyc_order() {
  return from_dsl(
      "theory CycOrder { language { C/3 }"
      " axiom !C(x,x,y); axiom !C(x,y,x); axiom !C(y,x,x); axiom !C(x,x,x);"
      " axiom C(x,y,z) -> C(y,z,x);"
      " axiom x != y & x != z & y != z -> (C(x,y,z) <-> !C(x,z,y));"
      " axiom C(x,w,y) & C(x,y,z) -> C(x,w,z); }");
}

Theory perm() {
  return from_dsl(
      "theory Perm { language { lt1/2, lt2/2 }"
      " axiom !lt1(x,x);"
      " axiom x != y -> (lt1(x,y) <-> !lt1(y,x));"
      " axiom lt1(x,y) & lt1(y,z) -> lt1(x,z);"
      " axiom !lt2(x,x);"
      " axiom x != y -> (lt2(x,y) <-> !lt2(y,x));"
      " axiom lt2(x,y) & lt2(y,z) -> lt2(x,z); }");
}

// Graphs whose components are cliques; strictified transitivity keeps the
// axiomatization substitutionally closed.
Theory eq_rel() {
  return from_dsl(
      "theory EqRel { language { E/2 }"
      " axiom !E(x,x);"
      " axiom E(x,y) <-> E(y,x);"
      " axiom x != z & E(x,y) & E(y,z) -> E(x,z); }");
}

Theory extended_order() {
  return from_dsl(
      "theory ExtendedOrder { language { lt1/2, lt2/2 }"
      " axiom !lt1(x,x);"
      " axiom x != y -> (lt1(x,y) <-> !lt1(y,x));"
      " axiom lt1(x,y) & lt1(y,z) -> lt1(x,z);"
      " axiom !lt2(x,x);"
      " axiom lt2(x,y) -> !lt2(y,x);"
      " axiom lt2(x,y) & lt2(y,z) -> lt2(x,z);"
      " axiom lt2(x,y) -> lt1(x,y); }");
}

Theory thresh_graph() {
  Theory t = graph();
  t.name = "ThreshGraph";
  t.axioms.push_back(parse_formula(
      "(E(x,y) & E(u,z)) -> ((E(x,u) & E(x,z)) | (E(y,u) & E(y,z)) | (E(u,x) & E(u,y)) | (E(z,x) & E(z,y)))",
      t.language));
  return t;
}

Theory tf_graph() {
  Theory t = graph();
  t.name = "TFGraph";
  // no triangle, not necessarily induced
  t.axioms.push_back(
      parse_formula("x != y & x != z & y != z -> !(E(x,y) & E(y,z) & E(x,z))", t.language));
  return t;
}

Theory turan() {
  Theory t = k_hypergraph(3);
  t.name = "Turan";
  // no independent set of size four
  t.axioms.push_back(parse_formula(
      "x1 != x2 & x1 != x3 & x1 != x4 & x2 != x3 & x2 != x4 & x3 != x4 ->"
      " (E(x1,x2,x3) | E(x1,x2,x4) | E(x1,x3,x4) | E(x2,x3,x4))",
      t.language));
  return t;
}

Theory fdf() {
  Theory t = orgraph();
  t.name = "FDF";
  // forbid induced directed 4-cycles: arcs 1->2->3->4->1, all other ordered
  // pairs of distinct vertices are non-arcs
  t.axioms.push_back(parse_formula(
      "x1 != x2 & x1 != x3 & x1 != x4 & x2 != x3 & x2 != x4 & x3 != x4 ->"
      " !(E(x1,x2) & E(x2,x3) & E(x3,x4) & E(x4,x1)"
      " & !E(x2,x1) & !E(x3,x2) & !E(x4,x3) & !E(x1,x4)"
      " & !E(x1,x3) & !E(x3,x1) & !E(x2,x4) & !E(x4,x2))",
      t.language));
  return t;
}

}  // namespace

Theory union_theory(const Theory& a, const Theory& b, const std::string& name) {
  std::set<std::string> taken;
  for (const auto& s : a.language.symbols()) taken.insert(s.name);
  std::map<std::string, std::string> rename_b;
  std::vector<PredicateSymbol> syms = a.language.symbols();
  for (const auto& s : b.language.symbols()) {
    std::string nm = s.name;
    while (taken.count(nm)) nm += "_r";
    rename_b[s.name] = nm;
    taken.insert(nm);
    syms.push_back({nm, s.arity});
  }
  Theory t;
  t.name = name;
  t.language = Language(std::move(syms));
  t.axioms = a.axioms;

  std::function<FormulaPtr(const FormulaPtr&)> rn = [&](const FormulaPtr& f) -> FormulaPtr {
    auto g = std::make_shared<Formula>(*f);
    if (g->kind == Formula::Kind::Atom) g->pred = rename_b.at(g->pred);
    g->kids.clear();
    for (const auto& k : f->kids) g->kids.push_back(rn(k));
    return g;
  };
  for (const auto& ax : b.axioms) t.axioms.push_back(rn(ax));
  t.validate();
  return t;
}

Theory builtin_theory(const std::string& name) {
  // split "Name(arg)" / "Name:arg"
  std::string base = name;
  std::string arg;
  auto lp = name.find('(');
  auto cl = name.find(':');
  if (lp != std::string::npos && name.back() == ')') {
    base = name.substr(0, lp);
    arg = name.substr(lp + 1, name.size() - lp - 2);
  } else if (cl != std::string::npos) {
    base = name.substr(0, cl);
    arg = name.substr(cl + 1);
  }

  if (base == "Graph") return graph();
  if (base == "Digraph") return digraph();
  if (base == "Orgraph") return orgraph();
  if (base == "Tournament") return tournament();
  if (base == "kHypergraph") return k_hypergraph(std::stoi(arg));
  if (base == "cColoring") return c_coloring(std::stoi(arg));
  if (base == "cColoredGraph") return c_colored_graph(std::stoi(arg));
  if (base == "cColoredComplete") return c_colored_complete(std::stoi(arg));
  if (base == "LinOrder") return lin_order();
  if (base == "Order") return order();
  if (base == "CycOrder") return cyc_order();
  if (base == "Perm") return perm();
  if (base == "EqRel") return eq_rel();
  if (base == "PreOrder") return pre_order();
  if (base == "ExtendedOrder") return extended_order();
  if (base == "ThreshGraph") return thresh_graph();
  if (base == "TFGraph") return tf_graph();
  if (base == "Turan") return turan();
  if (base == "FDF") return fdf();
  if (base == "IntervalGraph") {
    // Carrier language only: Graph axioms under this name. Completeness is
    // not claimed; callers add forbidden structures as needed.
    Theory t = graph();
    t.name = "IntervalGraph";
    return t;
  }
  if (base == "GraphOrder") {
    Theory t = union_theory(graph(), lin_order(), "GraphOrder");
    return t;
  }
  if (base == "TournamentOrder") {
    Theory t = union_theory(tournament(), lin_order(), "TournamentOrder");
    return t;
  }
  if (base == "ThreshGraph3") {
    Theory t = union_theory(thresh_graph(), c_coloring(3), "ThreshGraph3");
    return t;
  }
  throw std::invalid_argument("unknown builtin theory " + name);
}

}  // namespace theon
