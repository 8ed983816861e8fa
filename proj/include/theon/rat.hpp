#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace theon {

// All exact arithmetic in the library goes through Rat. Values are kept
// normalized (gcd 1, positive denominator) by GMP.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Canonical "num/den" rendering, always with an explicit denominator.
inline std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "a/b" or a bare integer "a".
inline Rat rat_parse(const std::string& s) {
  std::string t = s;
  if (t.find('/') == std::string::npos) t += "/1";
  Rat q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline Rat rat_pow(const Rat& q, unsigned long e) {
  Rat r = 1;
  for (unsigned long i = 0; i < e; ++i) r *= q;
  return r;
}

inline unsigned long factorial_u64(unsigned n) {
  unsigned long f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// Exact dyadic u/2^64 as a rational, for comparing sampled offsets.
inline Rat dyadic64(uint64_t u) {
  static const mpz_class den = [] {
    mpz_class d = 1;
    d <<= 64;
    return d;
  }();
  Rat q(mpz_class(static_cast<unsigned long>(u)), den);
  q.canonicalize();
  return q;
}

}  // namespace theon
