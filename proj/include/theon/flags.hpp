#pragma once

#include <map>
#include <string>

#include "theon/densities.hpp"
#include "theon/interpret.hpp"
#include "theon/models.hpp"

namespace theon {

// A formal rational combination of isomorphism classes of models at a fixed
// level, i.e. an element of the flag algebra expressed in the level basis.
class FlagVector {
 public:
  FlagVector(Theory theory, int level);

  const Theory& theory() const { return theory_; }
  int level() const { return level_; }
  const std::map<std::string, Rat>& coeffs() const { return coeffs_; }

  void set(const Structure& basis_model, const Rat& c);
  void add(const Structure& basis_model, const Rat& c);
  Rat coeff(const Structure& m) const;  // 0 if absent

  FlagVector& operator+=(const FlagVector& o);
  FlagVector& operator*=(const Rat& c);

  // level-l basis, cached per (theory name, level)
  const std::vector<IsoClass>& basis() const;

 private:
  Theory theory_;
  int level_;
  std::map<std::string, Rat> coeffs_;  // canonical key -> coefficient
  friend FlagVector lift(const FlagVector& v, int lvl, Exec mode);
};

// Single basis model as a vector; the 0-vertex model is the unit 1.
FlagVector flag_of(const Theory& t, const Structure& m);
FlagVector flag_unit(const Theory& t);

// Chain-rule expansion into the level-lvl basis.
FlagVector lift(const FlagVector& v, int lvl, Exec mode = exec_mode());

// Algebra product expressed at level lvl >= l1 + l2.
FlagVector product(const FlagVector& a, const FlagVector& b, int lvl, Exec mode = exec_mode());

// Linear functional p(-, N).
Rat evaluate(const FlagVector& v, const Structure& n, Exec mode = exec_mode());

// pi^I: unweighted sum over same-size target classes whose I-image is
// isomorphic to each basis model, extended linearly. I must be verified by
// the caller (verify_interpretation).
FlagVector pi_map(const Translation& i, const Theory& t1, const Theory& t2, const FlagVector& v);

// flagvec file format:
//   flagvec { theory=Graph level=3  coeff "n=3;E:..." = 2/3 ... }
FlagVector parse_flagvec(const std::string& text);
std::string print_flagvec(const FlagVector& v);

}  // namespace theon
