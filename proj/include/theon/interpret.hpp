#pragma once

#include <optional>
#include <string>
#include <vector>

#include "theon/logic.hpp"
#include "theon/models.hpp"

namespace theon {

// Translation: predicate symbols of `source` to open formulas over `target`
// with variables exactly x1..x_{k(P)}.
struct Translation {
  std::string name;
  Language source;
  Language target;
  std::vector<FormulaPtr> images;  // indexed like source symbols

  const FormulaPtr& image(int src_idx) const { return images[static_cast<size_t>(src_idx)]; }
  void validate() const;
};

// Canonical variable names x1..xk used by translation images.
std::vector<std::string> canonical_vars(int k);

Translation identity_translation(const Language& lang, std::string name = "id");

// Structural substitution of atoms; equality atoms unchanged.
FormulaPtr translate_formula(const Translation& i, const FormulaPtr& f);

// Model of the source theory induced on the same vertex set.
Structure apply_model(const Translation& i, const Structure& n);

struct VerifyResult {
  bool pass = true;
  // first failing axiom with countermodel and assignment, if any
  std::optional<FormulaPtr> axiom;
  std::optional<Structure> countermodel;
  std::vector<int> assignment;
};

// Exact decision: T2 |- I(A) for every axiom A of T1, via finite model
// checking at size = variable count.
VerifyResult verify_interpretation(const Translation& i, const Theory& t1, const Theory& t2);

Translation compose(const Translation& i, const Translation& j);  // j . i  (i: T1->T2, j: T2->T3)

// T2 |- I1(P) <-> I2(P) for every source symbol P.
bool equivalent(const Translation& i1, const Translation& i2, const Theory& t2);

struct Amalgam {
  Theory theory;        // T-hat
  Translation into_1;   // T1 -> T-hat (identity embedding, possibly renamed)
  Translation into_2;   // T2 -> T-hat
};

// Amalgamated sum of I1 : T -> T1 and I2 : T -> T2; languages auto-renamed
// to be disjoint, bridge axioms I1(P) <-> I2(P) added.
Amalgam amalgamate(const Translation& i1, const Theory& t, const Theory& t1, const Translation& i2,
                   const Theory& t2);

struct CanonicalizeResult {
  Theory theory;           // canonical companion T'
  Translation to_prime;    // I : T -> T'
  Translation from_prime;  // J : T' -> T
};

// Subdivision into a canonical theory; one symbol P_<rgs> per equivalence
// relation of [k(P)], representatives are class minima ordered by minimum.
CanonicalizeResult canonicalize(const Theory& t);

// Built-in interpretations from the worked examples:
//   orientation_erasing  Graph -> Orgraph
//   orientation_erasing_digraph  Graph -> Digraph
//   color_erasing_vertex(c)  Graph -> Graph u cColoring(c)
//   color_erasing_edge(c)  Graph -> cColoredGraph(c)
//   order_erasing_graph  Graph -> GraphOrder
//   order_erasing_perm  LinOrder -> Perm
//   order_erasing_extorder  Order -> ExtendedOrder  (lt -> lt2)
//   linear_erasing_extorder  LinOrder -> ExtendedOrder  (lt -> lt1)
//   feedback_arc  GraphOrder -> TournamentOrder, and feedback_arc_inverse
//   triangle  kHypergraph(3) -> Graph
//   fdf  Turan -> FDF
//   fdf_thresh  FDF -> ThreshGraph3
// Each comes paired with its (source, target) theories.
struct NamedInterpretation {
  Translation translation;
  Theory source;
  Theory target;
};
NamedInterpretation builtin_interpretation(const std::string& name);

// Interpretation file format:
//   interp { from=Graph to=Orgraph  E(x,y) := E(x,y) | E(y,x) }
// from/to are builtin theory names.
NamedInterpretation parse_interpretation(const std::string& text);
std::string print_interpretation(const NamedInterpretation& ni);

}  // namespace theon
