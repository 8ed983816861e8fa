#include "theon/densities.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace theon {

namespace {

// Unrank the i-th injection [m] -> [n] (0-based rank, factorial-number
// style); output is 1-based vertices.
void unrank_injection(uint64_t rank, int m, int n, std::vector<int>& out) {
  out.clear();
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  uint64_t radix = static_cast<uint64_t>(n);
  for (int i = 0; i < m; ++i) {
    uint64_t idx = rank % radix;
    rank /= radix;
    out.push_back(pool[static_cast<size_t>(idx)]);
    pool.erase(pool.begin() + static_cast<long>(idx));
    --radix;
  }
}

uint64_t falling_factorial(int n, int m) {
  uint64_t f = 1;
  for (int i = 0; i < m; ++i) f *= static_cast<uint64_t>(n - i);
  return f;
}

struct AtomCheck {
  int pred;
  Tuple m_tuple;   // over V(M)
  bool present;    // in R_{P,M}
};

std::vector<AtomCheck> compile_checks(const Structure& m, bool induced) {
  std::vector<AtomCheck> checks;
  for (int p = 0; p < m.language.size(); ++p) {
    for (const auto& t : Structure::distinct_tuples(m.n, m.language.arity(p))) {
      bool present = m.has(p, t);
      if (present || induced) checks.push_back({p, t, present});
    }
  }
  return checks;
}

}  // namespace

uint64_t embedding_count(const Structure& m, const Structure& n, bool induced, Exec mode) {
  if (!(m.language == n.language)) throw std::invalid_argument("embedding_count: language mismatch");
  if (m.n > n.n) return 0;
  auto checks = compile_checks(m, induced);
  uint64_t total = falling_factorial(n.n, m.n);

  auto ok = [&](uint64_t rank) {
    std::vector<int> alpha;
    unrank_injection(rank, m.n, n.n, alpha);
    Tuple mapped;
    for (const auto& c : checks) {
      mapped.clear();
      for (int v : c.m_tuple) mapped.push_back(alpha[static_cast<size_t>(v - 1)]);
      // induced mode carries both polarities; positive mode only present atoms
      if (n.has(c.pred, mapped) != c.present) return false;
    }
    return true;
  };
  return count_u64(total, ok, mode);
}

Rat density(DensityKind kind, const Structure& m, const Structure& n, Exec mode) {
  if (!(m.language == n.language)) throw std::invalid_argument("density: language mismatch");
  if (m.n > n.n) return 0;
  uint64_t total = falling_factorial(n.n, m.n);
  if (total == 0) return 0;
  switch (kind) {
    case DensityKind::IND: {
      uint64_t cnt = embedding_count(m, n, /*induced=*/true, mode);
      Rat r(static_cast<long>(cnt), 1);
      return r / Rat(static_cast<long>(total), 1);
    }
    case DensityKind::INJ: {
      uint64_t cnt = embedding_count(m, n, /*induced=*/false, mode);
      return Rat(static_cast<long>(cnt), 1) / Rat(static_cast<long>(total), 1);
    }
    case DensityKind::P: {
      // p = (m!/|Aut(M)|) * t_ind, sharing the injection kernel
      uint64_t cnt = embedding_count(m, n, /*induced=*/true, mode);
      uint64_t aut = aut_count(m);
      Rat tind = Rat(static_cast<long>(cnt), 1) / Rat(static_cast<long>(total), 1);
      return tind * Rat(static_cast<long>(factorial_u64(static_cast<unsigned>(m.n))), 1) /
             Rat(static_cast<long>(aut), 1);
    }
  }
  return 0;
}

Rat multi_density(const std::vector<Structure>& ms, const Structure& n, Exec mode) {
  int total_m = 0;
  for (const auto& m : ms) {
    if (!(m.language == n.language)) throw std::invalid_argument("multi_density: language mismatch");
    total_m += m.n;
  }
  if (total_m > n.n) return 0;  // size overflow convention
  if (ms.empty()) return 1;

  std::vector<std::string> want;
  want.reserve(ms.size());
  for (const auto& m : ms) want.push_back(canonical_form(m).key);

  // Enumerate ordered tuples of pairwise-disjoint subsets; parallelize over
  // the choices of the first subset.
  std::vector<std::vector<int>> first_subsets;
  {
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int start, int need) {
      if (need == 0) {
        first_subsets.push_back(cur);
        return;
      }
      for (int v = start; v <= n.n - need + 1; ++v) {
        cur.push_back(v);
        rec(v + 1, need - 1);
        cur.pop_back();
      }
    };
    rec(1, ms[0].n);
  }

  auto count_rest = [&](uint64_t fi) -> Rat {
    const auto& first = first_subsets[static_cast<size_t>(fi)];
    if (canonical_form(induced(n, first)).key != want[0]) return 0;
    // count completions for subsets 2..t among remaining vertices
    std::vector<char> used(static_cast<size_t>(n.n + 1), 0);
    for (int v : first) used[static_cast<size_t>(v)] = 1;
    uint64_t count = 0;
    std::vector<int> cur;
    std::function<void(size_t)> place = [&](size_t mi) {
      if (mi == ms.size()) {
        ++count;
        return;
      }
      int need = ms[mi].n;
      std::vector<int> avail;
      for (int v = 1; v <= n.n; ++v)
        if (!used[static_cast<size_t>(v)]) avail.push_back(v);
      std::vector<int> pick;
      std::function<void(size_t, int)> sub = [&](size_t start, int rem) {
        if (rem == 0) {
          if (canonical_form(induced(n, pick)).key == want[mi]) {
            for (int v : pick) used[static_cast<size_t>(v)] = 1;
            place(mi + 1);
            for (int v : pick) used[static_cast<size_t>(v)] = 0;
          }
          return;
        }
        for (size_t s = start; s + static_cast<size_t>(rem) <= avail.size(); ++s) {
          pick.push_back(avail[s]);
          sub(s + 1, rem - 1);
          pick.pop_back();
        }
      };
      sub(0, need);
    };
    place(1);
    return Rat(static_cast<long>(count), 1);
  };

  Rat hits = reduce_rat(first_subsets.size(), count_rest, mode);

  // total number of ordered tuples of disjoint subsets of these sizes
  Rat total = 1;
  int left = n.n;
  for (const auto& m : ms) {
    // C(left, m.n)
    Rat c = 1;
    for (int i = 0; i < m.n; ++i) c *= rat(left - i, i + 1);
    total *= c;
    left -= m.n;
  }
  return hits / total;
}

std::vector<Structure> supermodels(const Structure& m, const Theory& t) {
  // Missing distinct-entry tuples, grouped for subset enumeration.
  std::vector<std::pair<int, Tuple>> missing;
  for (int p = 0; p < t.language.size(); ++p)
    for (const auto& tup : Structure::distinct_tuples(m.n, t.language.arity(p)))
      if (!m.has(p, tup)) missing.emplace_back(p, tup);

  std::vector<Structure> out;
  size_t k = missing.size();
  if (k > 24) throw GuardExceeded("supermodels: too many free tuples");
  for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
    Structure cand = m;
    for (size_t i = 0; i < k; ++i)
      if (mask & (uint64_t(1) << i)) cand.add(missing[i].first, missing[i].second);
    if (is_model(cand, t)) out.push_back(std::move(cand));
  }
  return out;
}

namespace {

bool subset_of(const Structure& a, const Structure& b) {
  for (size_t p = 0; p < a.relations.size(); ++p)
    for (const auto& t : a.relations[p])
      if (!b.has(static_cast<int>(p), t)) return false;
  return true;
}

Rat mobius_rec(const Structure& a, const Structure& b, const Theory& t,
               std::map<std::string, Rat>& memo) {
  if (a == b) return 1;
  auto key = a.encode() + "|" + b.encode();
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  // interval members: models X with a <= X < b, accumulated as -sum mu(a, X)
  std::vector<std::pair<int, Tuple>> diff;
  for (size_t p = 0; p < b.relations.size(); ++p)
    for (const auto& tup : b.relations[p])
      if (!a.has(static_cast<int>(p), tup)) diff.emplace_back(static_cast<int>(p), tup);
  size_t k = diff.size();
  if (k > 24) throw GuardExceeded("mobius: interval too large");
  Rat acc = 0;
  for (uint64_t mask = 0; mask + 1 < (uint64_t(1) << k); ++mask) {  // skip full mask (X = b)
    Structure x = a;
    for (size_t i = 0; i < k; ++i)
      if (mask & (uint64_t(1) << i)) x.add(diff[i].first, diff[i].second);
    if (is_model(x, t)) acc += mobius_rec(a, x, t, memo);
  }
  Rat val = -acc;
  memo.emplace(key, val);
  return val;
}

}  // namespace

Rat mobius(const Structure& m, const Structure& mprime, const Theory& t) {
  if (m.n != mprime.n) throw std::invalid_argument("mobius: vertex sets differ");
  if (!subset_of(m, mprime)) return 0;
  std::map<std::string, Rat> memo;
  return mobius_rec(m, mprime, t, memo);
}

Rat tinj_from_tind(const Structure& m, const Theory& t, const ClassTable& tind_table) {
  Rat acc = 0;
  for (const auto& sup : supermodels(m, t)) {
    auto key = canonical_form(sup).key;
    auto it = tind_table.find(key);
    if (it == tind_table.end()) throw std::invalid_argument("tinj_from_tind: table misses " + key);
    acc += it->second;
  }
  return acc;
}

Rat tind_from_tinj(const Structure& m, const Theory& t, const ClassTable& tinj_table) {
  Rat acc = 0;
  for (const auto& sup : supermodels(m, t)) {
    auto key = canonical_form(sup).key;
    auto it = tinj_table.find(key);
    if (it == tinj_table.end()) throw std::invalid_argument("tind_from_tinj: table misses " + key);
    acc += mobius(m, sup, t) * it->second;
  }
  return acc;
}

}  // namespace theon
