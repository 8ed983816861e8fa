#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "theon/exec.hpp"
#include "theon/logic.hpp"

namespace theon {

using Tuple = std::vector<int>;  // 1-based vertices

// Finite labeled structure: n vertices (1..n) plus one relation per symbol.
struct Structure {
  Language language;
  int n = 0;
  std::vector<std::vector<Tuple>> relations;  // per symbol, sorted, deduplicated

  Structure() = default;
  Structure(Language lang, int n_);

  void add(const std::string& pred, const Tuple& t);
  void add(int pred_idx, const Tuple& t);
  bool has(int pred_idx, const Tuple& t) const;
  void normalize();  // sort + dedup all relations

  // Distinct-entry tuples only (the part visible to canonical theories).
  static std::vector<Tuple> distinct_tuples(int n, int arity);
  static std::vector<Tuple> all_tuples(int n, int arity);

  std::string encode() const;  // deterministic printable encoding
  bool operator==(const Structure& o) const;
  bool operator<(const Structure& o) const;
};

using Assignment = std::vector<int>;  // variable index -> vertex (1-based)

// Standard open-formula semantics; sigma maps the formula's variables (in
// first-occurrence order) to vertices.
bool satisfies(const Structure& m, const FormulaPtr& f, const Assignment& sigma);
bool satisfies(const Structure& m, const FormulaPtr& f, const std::map<std::string, int>& sigma);

bool is_model(const Structure& m, const Theory& t);

// Induced submodel: keep the (1-based) vertices in `verts`, relabel
// order-preservingly to 1..|verts|.
Structure induced(const Structure& n, const std::vector<int>& verts);

struct IsoClass {
  Structure canonical;
  uint64_t aut_count = 1;
  std::string key;  // canonical.encode()
};

// Lexicographically minimal relation encoding over all n! relabelings.
// Guarded at n <= 9.
IsoClass canonical_form(const Structure& m);

// Automorphism count only (same brute force).
uint64_t aut_count(const Structure& m);

bool isomorphic(const Structure& a, const Structure& b);

// All models of a canonical theory at size n, up to isomorphism, sorted by
// canonical encoding. Level-by-level vertex extension with axiom pruning.
std::vector<IsoClass> enumerate_models(const Theory& t, int n, GuardCounter* guard = nullptr);

// Named structures used throughout: K_l, I_l, P_l, C_l, Tr_l, C3arrow, W4,
// L4, K4minus, Turan(n,l), StarOrder(n), perm one-line notation.
Structure make_named_model(const std::string& name, const std::vector<std::string>& params);

// .mdl format: `model { n = 5  E = (1,2) (2,1) ... }`; language inferred
// from predicate names and tuple lengths unless `lang` is given.
Structure parse_model(const std::string& text, const Language* lang = nullptr);
std::string print_model(const Structure& m);

}  // namespace theon
