#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "theon/exec.hpp"
#include "theon/models.hpp"
#include "theon/rat.hpp"

namespace theon {

// Subset of F_2^n as a bit array indexed by the integer encoding of vectors
// (bit i-1 of the index is coordinate i).
struct LinSubset {
  int n = 0;
  std::vector<char> bits;  // length 2^n

  bool has(uint32_t v) const { return bits[v] != 0; }
  uint64_t count() const;
};

// Target pattern f : F_2^m \ {0} -> {0,1}.
struct Pattern {
  int m = 0;
  std::vector<char> values;  // length 2^m - 1, index v-1 for v in 1..2^m-1

  bool at(uint32_t v) const { return values[v - 1] != 0; }
};

// Relational shadow of A: vertex set F_2^n (vertex v+1 for vector v), with
// symmetric relations E_1..E_K on pairwise-distinct tuples summing into A.
Structure model_from_subset(const LinSubset& a, int max_arity);

// Labeled pattern model N_{f,B} on the basis vectors of F_2^m.
Structure pattern_model(const Pattern& f);

// Probability over a uniform linear map alpha : F_2^m -> F_2^n that
// 1_A(alpha(x)) = f(x) for every nonzero x. Exact mode enumerates all
// 2^(mn) matrices (guard mn <= 24).
Rat pattern_density_exact(const Pattern& f, const LinSubset& a, Exec mode = exec_mode());
Rat pattern_density_sampled(const Pattern& f, const LinSubset& a, uint64_t samples, uint64_t seed,
                            Exec mode = exec_mode());

LinSubset blowup(const LinSubset& a, int t);

// Monochromatic affine triangles (x, y, x+y) of a coloring c : F_2^n -> {0,1}.
Rat triangle_mono_exact(const LinSubset& coloring, Exec mode = exec_mode());
Rat triangle_mono_sampled(const LinSubset& coloring, uint64_t samples, uint64_t seed,
                          Exec mode = exec_mode());

// Hex bitstring format: `linsubset { n=4 bits=0f3a }`, bit v of the parsed
// big-endian hex number marks vector v; `pattern { m=2 bits=5 }` likewise
// over indices 0..2^m-2 for vectors 1..2^m-1.
LinSubset parse_linsubset(const std::string& text);
std::string print_linsubset(const LinSubset& a);
Pattern parse_pattern(const std::string& text);
std::string print_pattern(const Pattern& f);

}  // namespace theon
