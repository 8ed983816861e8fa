// Benchmark: serial reference kernels vs the OpenMP kernels on
// representative workloads. Both paths produce identical exact results; the
// point of this tool is the timing comparison.

#include <chrono>
#include <cstdio>

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/flags.hpp"
#include "theon/lineons.hpp"
#include "theon/rng.hpp"
#include "theon/theons.hpp"

using namespace theon;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename Fn>
void bench(const char* name, Fn&& fn) {
  auto t0 = Clock::now();
  auto serial = fn(Exec::Serial);
  double ts = ms_since(t0);
  t0 = Clock::now();
  auto parallel = fn(Exec::Parallel);
  double tp = ms_since(t0);
  if (serial != parallel) {
    std::printf("%-36s MISMATCH between serial and parallel results\n", name);
    return;
  }
  std::printf("%-36s serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n", name, ts, tp,
              tp > 0 ? ts / tp : 0.0);
}

Structure random_graph(int n, uint64_t seed) {
  Theory g = builtin_theory("Graph");
  Structure s(g.language, n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (rng::hash(seed, {static_cast<uint64_t>(i), static_cast<uint64_t>(j)}) & 1) {
        s.add("E", {i, j});
        s.add("E", {j, i});
      }
  return s;
}

}  // namespace

int main() {
  set_jobs(0);  // default thread count for the parallel runs

  Structure n30 = random_graph(24, 17);
  Structure p4 = make_named_model("P", {"4"});
  bench("density t_ind(P4, G24)", [&](Exec m) { return density(DensityKind::IND, p4, n30, m); });

  Structure k2 = make_named_model("K", {"2"});
  Structure p3 = make_named_model("P", {"3"});
  bench("multi-density p(K2,P3; G24)", [&](Exec m) { return multi_density({k2, p3}, n30, m); });

  Theon hp = builtin_theon("hypergraphon_Hprime:1/2");
  Structure k4m = make_named_model("K4minus", {});
  bench("exact t_ind(K4-, Hprime)", [&](Exec m) { return exact_density(hp, k4m, DKind::IND, m); });

  Theon tu = builtin_theon("turan:3");
  Structure k4 = make_named_model("K", {"4"});
  bench("exact t_inj(K4, turan(3))", [&](Exec m) { return exact_density(tu, k4, DKind::INJ, m); });

  Theon perm = builtin_theon("standard_permuton:identity:3");
  Structure p321 = make_named_model("perm", {"4321"});
  bench("exact p(4321, permuton)", [&](Exec m) { return exact_density(perm, p321, DKind::P, m); });

  LinSubset a;
  a.n = 8;
  a.bits.assign(256, 0);
  for (uint32_t v = 0; v < 256; ++v) a.bits[v] = (rng::hash(23, {v}) & 1) ? 1 : 0;
  Pattern f;
  f.m = 3;
  f.values = {1, 0, 1, 0, 0, 1, 1};
  bench("lineon exact density (2^24 maps)", [&](Exec m) { return pattern_density_exact(f, a, m); });

  bench("lineon triangle density 2^16", [&](Exec m) { return triangle_mono_exact(a, m); });

  Theory g = builtin_theory("Graph");
  FlagVector k2v = flag_of(g, k2);
  (void)product(k2v, k2v, 5, Exec::Serial);  // warm the basis cache
  bench("flag product K2*K2 at level 5", [&](Exec m) { return product(k2v, k2v, 5, m).coeffs(); });

  return 0;
}
