#pragma once

#include <string>

#include "theon/logic.hpp"

namespace theon {

// Built-in theory registry. Exact names:
//   Graph, Digraph, Orgraph, Tournament, kHypergraph(k), cColoring(c),
//   LinOrder, Order, CycOrder, Perm, EqRel, PreOrder, ExtendedOrder,
//   IntervalGraph (carrier language only: Graph axioms under another name).
// Also available for interpretation targets and tests: cColoredGraph(c),
// cColoredComplete(c), TFGraph, Turan, FDF, ThreshGraph, GraphOrder
// (= Graph + LinOrder), TournamentOrder (= Tournament + LinOrder).
// Parameterized names accept both "kHypergraph(3)" and "kHypergraph:3".
Theory builtin_theory(const std::string& name);

// Disjoint union: axioms of both; symbol clashes resolved by suffixing.
Theory union_theory(const Theory& a, const Theory& b, const std::string& name);

}  // namespace theon
