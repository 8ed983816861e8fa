#include "theon/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace theon {

Exec& exec_mode() {
  static Exec mode = Exec::Parallel;
  return mode;
}

void set_jobs(int jobs) {
  if (jobs <= 1) {
    exec_mode() = Exec::Serial;
    return;
  }
  exec_mode() = Exec::Parallel;
#ifdef _OPENMP
  omp_set_num_threads(jobs);
#endif
}

uint64_t guard_limit() {
  static uint64_t limit = [] {
    const char* env = std::getenv("THEON_GUARD");
    if (env) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<uint64_t>(v);
    }
    return static_cast<uint64_t>(10000000);  // documented default
  }();
  return limit;
}

}  // namespace theon
