#pragma once

#include <map>
#include <vector>

#include "theon/exec.hpp"
#include "theon/models.hpp"
#include "theon/rat.hpp"

namespace theon {

enum class DensityKind { P, IND, INJ };

// Exact densities between finite models of the same canonical theory.
//   P    fraction of |V(M)|-subsets V with N|_V isomorphic to M
//   IND  fraction of injections that are induced embeddings
//   INJ  fraction of injections that are positive embeddings
// All three are 0 when M is larger than N.
Rat density(DensityKind kind, const Structure& m, const Structure& n, Exec mode = exec_mode());

// Number of injections [m]->[n] that are induced (or positive) embeddings.
uint64_t embedding_count(const Structure& m, const Structure& n, bool induced, Exec mode = exec_mode());

// p(M_1,...,M_t; N): uniformly random ordered tuple of pairwise-disjoint
// vertex subsets of the prescribed sizes, each inducing the matching M_i.
Rat multi_density(const std::vector<Structure>& ms, const Structure& n, Exec mode = exec_mode());

// Labeled supermodels of M of the owning theory on the same vertex set
// (extensions of the relations, filtered by is_model).
std::vector<Structure> supermodels(const Structure& m, const Theory& t);

// Mobius function of the poset of same-vertex-set models of `t` between M
// and M' under relation inclusion; 0 unless M is a subset of M'.
Rat mobius(const Structure& m, const Structure& mprime, const Theory& t);

// Conversions between induced and positive embedding densities via a table
// of per-isomorphism-class values at level |V(M)|.
using ClassTable = std::map<std::string, Rat>;  // canonical key -> value
Rat tinj_from_tind(const Structure& m, const Theory& t, const ClassTable& tind_table);
Rat tind_from_tinj(const Structure& m, const Theory& t, const ClassTable& tinj_table);

}  // namespace theon
