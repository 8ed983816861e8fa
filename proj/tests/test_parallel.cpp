#include "doctest.h"

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/flags.hpp"
#include "theon/lineons.hpp"
#include "theon/rng.hpp"
#include "theon/theons.hpp"

using namespace theon;

// The OpenMP kernels must agree bit-for-bit with the serial reference paths:
// all reductions are exact rational or integer sums.

TEST_CASE("densities: serial and parallel kernels agree") {
  Structure n(builtin_theory("Graph").language, 9);
  for (int i = 1; i <= 9; ++i)
    for (int j = i + 1; j <= 9; ++j)
      if (rng::hash(7, {static_cast<uint64_t>(i), static_cast<uint64_t>(j)}) & 1) {
        n.add("E", {i, j});
        n.add("E", {j, i});
      }
  for (const auto& cls : enumerate_models(builtin_theory("Graph"), 3)) {
    for (auto kind : {DensityKind::P, DensityKind::IND, DensityKind::INJ})
      CHECK(density(kind, cls.canonical, n, Exec::Serial) == density(kind, cls.canonical, n, Exec::Parallel));
  }
  auto K2 = make_named_model("K", {"2"});
  auto P3 = make_named_model("P", {"3"});
  CHECK(multi_density({K2, P3}, n, Exec::Serial) == multi_density({K2, P3}, n, Exec::Parallel));
}

TEST_CASE("theon exact kernel: serial and parallel agree") {
  Theon w = builtin_theon("turan:3");
  for (const auto& cls : enumerate_models(builtin_theory("Graph"), 4)) {
    CHECK(exact_density(w, cls.canonical, DKind::IND, Exec::Serial) ==
          exact_density(w, cls.canonical, DKind::IND, Exec::Parallel));
  }
  Theon perm = builtin_theon("standard_permuton:identity:3");
  Structure p231 = make_named_model("perm", {"231"});
  CHECK(exact_density(perm, p231, DKind::P, Exec::Serial) ==
        exact_density(perm, p231, DKind::P, Exec::Parallel));
}

TEST_CASE("lineon kernels: serial and parallel agree") {
  LinSubset a;
  a.n = 5;
  a.bits.assign(32, 0);
  for (uint32_t v = 0; v < 32; ++v) a.bits[v] = (rng::hash(13, {v}) & 1) ? 1 : 0;
  Pattern f;
  f.m = 2;
  f.values = {1, 0, 1};
  CHECK(pattern_density_exact(f, a, Exec::Serial) == pattern_density_exact(f, a, Exec::Parallel));
  CHECK(triangle_mono_exact(a, Exec::Serial) == triangle_mono_exact(a, Exec::Parallel));
  CHECK(pattern_density_sampled(f, a, 5000, 3, Exec::Serial) ==
        pattern_density_sampled(f, a, 5000, 3, Exec::Parallel));
}

TEST_CASE("flag product: serial and parallel agree") {
  Theory g = builtin_theory("Graph");
  FlagVector k2 = flag_of(g, make_named_model("K", {"2"}));
  FlagVector a = product(k2, k2, 4, Exec::Serial);
  FlagVector b = product(k2, k2, 4, Exec::Parallel);
  CHECK(a.coeffs() == b.coeffs());
}

TEST_CASE("enumeration is scheduling independent") {
  Exec saved = exec_mode();
  exec_mode() = Exec::Serial;
  auto a = enumerate_models(builtin_theory("Tournament"), 5);
  exec_mode() = Exec::Parallel;
  auto b = enumerate_models(builtin_theory("Tournament"), 5);
  exec_mode() = saved;
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].key == b[i].key);
}
