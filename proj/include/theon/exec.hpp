#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "theon/rat.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace theon {

// Every heavy kernel exists in two flavors: a serial reference loop and an
// OpenMP loop. Exact rational addition is associative and commutative, so
// both produce identical results; tests compare them and the benchmark tool
// times them.
enum class Exec { Serial, Parallel };

Exec& exec_mode();

void set_jobs(int jobs);  // jobs==1 selects Serial, otherwise Parallel with that many threads

struct GuardExceeded : std::runtime_error {
  explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration node budget; THEON_GUARD overrides the 1e7 default.
uint64_t guard_limit();

struct GuardCounter {
  uint64_t used = 0;
  uint64_t limit;
  GuardCounter() : limit(guard_limit()) {}
  explicit GuardCounter(uint64_t lim) : limit(lim) {}
  void spend(uint64_t n) {
    used += n;
    if (used > limit) throw GuardExceeded("enumeration guard exceeded (" + std::to_string(limit) + " nodes)");
  }
};

// Sum of fn(i) for i in [0, n), exact.
template <typename Fn>
Rat reduce_rat(uint64_t n, Fn&& fn, Exec mode) {
  if (mode == Exec::Serial) {
    Rat acc = 0;
    for (uint64_t i = 0; i < n; ++i) acc += fn(i);
    return acc;
  }
#ifdef _OPENMP
  int nt = omp_get_max_threads();
  std::vector<Rat> part(static_cast<size_t>(nt), Rat(0));
#pragma omp parallel
  {
    int t = omp_get_thread_num();
    Rat local = 0;
#pragma omp for schedule(static)
    for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) local += fn(static_cast<uint64_t>(i));
    part[static_cast<size_t>(t)] = local;
  }
  Rat acc = 0;
  for (const Rat& p : part) acc += p;
  return acc;
#else
  Rat acc = 0;
  for (uint64_t i = 0; i < n; ++i) acc += fn(i);
  return acc;
#endif
}

template <typename Fn>
uint64_t count_u64(uint64_t n, Fn&& fn, Exec mode) {
  if (mode == Exec::Serial) {
    uint64_t acc = 0;
    for (uint64_t i = 0; i < n; ++i) acc += fn(i) ? 1 : 0;
    return acc;
  }
#ifdef _OPENMP
  uint64_t acc = 0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (int64_t i = 0; i < static_cast<int64_t>(n); ++i) acc += fn(static_cast<uint64_t>(i)) ? 1 : 0;
  return acc;
#else
  uint64_t acc = 0;
  for (uint64_t i = 0; i < n; ++i) acc += fn(i) ? 1 : 0;
  return acc;
#endif
}

}  // namespace theon
