#include "theon/lineons.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>

#include "theon/rng.hpp"

namespace theon {

uint64_t LinSubset::count() const {
  uint64_t c = 0;
  for (char b : bits) c += b ? 1 : 0;
  return c;
}

namespace {

Language lin_language(int max_arity) {
  std::vector<PredicateSymbol> syms;
  for (int k = 1; k <= max_arity; ++k) syms.push_back({"E" + std::to_string(k), k});
  return Language(std::move(syms));
}

}  // namespace

Structure model_from_subset(const LinSubset& a, int max_arity) {
  if (max_arity > a.n) throw std::invalid_argument("model_from_subset: arity exceeds dimension");
  uint32_t size = 1u << a.n;
  if (size > 512) throw GuardExceeded("model_from_subset: 2^n vertex guard exceeded");
  Structure m(lin_language(max_arity), static_cast<int>(size));
  for (int k = 1; k <= max_arity; ++k) {
    int pred = k - 1;
    std::vector<uint32_t> tuple(static_cast<size_t>(k));
    std::function<void(int, uint32_t)> rec = [&](int depth, uint32_t acc) {
      if (depth == k) {
        if (a.has(acc)) {
          Tuple t;
          for (uint32_t v : tuple) t.push_back(static_cast<int>(v) + 1);
          m.add(pred, t);
        }
        return;
      }
      for (uint32_t v = 0; v < size; ++v) {
        bool dup = false;
        for (int i = 0; i < depth; ++i)
          if (tuple[static_cast<size_t>(i)] == v) dup = true;
        if (dup) continue;
        tuple[static_cast<size_t>(depth)] = v;
        rec(depth + 1, acc ^ v);
      }
    };
    rec(0, 0);
  }
  return m;
}

Structure pattern_model(const Pattern& f) {
  // vertices are the basis vectors e_1..e_m; the k-ary relation holds on a
  // distinct tuple iff f is 1 on the sum of the corresponding basis vectors
  int m = f.m;
  Structure out(lin_language(m), m);
  for (int k = 1; k <= m; ++k) {
    int pred = k - 1;
    std::vector<int> tuple(static_cast<size_t>(k));
    std::function<void(int, uint32_t)> rec = [&](int depth, uint32_t acc) {
      if (depth == k) {
        if (f.at(acc)) {
          Tuple t(tuple.begin(), tuple.end());
          out.add(pred, t);
        }
        return;
      }
      for (int v = 1; v <= m; ++v) {
        bool dup = false;
        for (int i = 0; i < depth; ++i)
          if (tuple[static_cast<size_t>(i)] == v) dup = true;
        if (dup) continue;
        tuple[static_cast<size_t>(depth)] = v;
        rec(depth + 1, acc ^ (1u << (v - 1)));
      }
    };
    rec(0, 0);
  }
  return out;
}

namespace {

bool matrix_matches(const Pattern& f, const LinSubset& a, const std::vector<uint32_t>& cols) {
  // alpha(x) = xor of columns selected by x; check all nonzero x
  uint32_t top = 1u << f.m;
  for (uint32_t x = 1; x < top; ++x) {
    uint32_t img = 0;
    for (int i = 0; i < f.m; ++i)
      if (x & (1u << i)) img ^= cols[static_cast<size_t>(i)];
    if (a.has(img) != f.at(x)) return false;
  }
  return true;
}

}  // namespace

Rat pattern_density_exact(const Pattern& f, const LinSubset& a, Exec mode) {
  int m = f.m, n = a.n;
  if (m * n > 24) throw GuardExceeded("pattern_density_exact: 2^(mn) guard exceeded");
  uint64_t total = uint64_t(1) << (m * n);
  uint64_t hits = count_u64(
      total,
      [&](uint64_t idx) {
        std::vector<uint32_t> cols(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
          cols[static_cast<size_t>(i)] = static_cast<uint32_t>((idx >> (i * n)) & ((uint64_t(1) << n) - 1));
        return matrix_matches(f, a, cols);
      },
      mode);
  return Rat(static_cast<long>(hits)) / Rat(static_cast<long>(total));
}

Rat pattern_density_sampled(const Pattern& f, const LinSubset& a, uint64_t samples, uint64_t seed,
                            Exec mode) {
  int m = f.m, n = a.n;
  uint64_t hits = count_u64(
      samples,
      [&](uint64_t s) {
        std::vector<uint32_t> cols(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
          cols[static_cast<size_t>(i)] = static_cast<uint32_t>(
              rng::hash(seed, {s, static_cast<uint64_t>(i)}) & ((uint64_t(1) << n) - 1));
        return matrix_matches(f, a, cols);
      },
      mode);
  return Rat(static_cast<long>(hits)) / Rat(static_cast<long>(samples));
}

LinSubset blowup(const LinSubset& a, int t) {
  if (a.n + t > 24) throw GuardExceeded("blowup: dimension guard exceeded");
  LinSubset out;
  out.n = a.n + t;
  out.bits.assign(size_t(1) << out.n, 0);
  for (uint32_t v = 0; v < (1u << out.n); ++v)
    out.bits[v] = a.bits[v & ((1u << a.n) - 1)];
  return out;
}

Rat triangle_mono_exact(const LinSubset& coloring, Exec mode) {
  int n = coloring.n;
  if (2 * n > 26) throw GuardExceeded("triangle_mono_exact: 2^(2n) guard exceeded");
  uint64_t side = uint64_t(1) << n;
  uint64_t total = side * side;
  uint64_t hits = count_u64(
      total,
      [&](uint64_t idx) {
        uint32_t x = static_cast<uint32_t>(idx & (side - 1));
        uint32_t y = static_cast<uint32_t>(idx >> n);
        bool cx = coloring.has(x), cy = coloring.has(y), cz = coloring.has(x ^ y);
        return cx == cy && cy == cz;
      },
      mode);
  return Rat(static_cast<long>(hits)) / Rat(static_cast<long>(total));
}

Rat triangle_mono_sampled(const LinSubset& coloring, uint64_t samples, uint64_t seed, Exec mode) {
  int n = coloring.n;
  uint64_t hits = count_u64(
      samples,
      [&](uint64_t s) {
        uint32_t x = static_cast<uint32_t>(rng::hash(seed, {s, 0}) & ((uint64_t(1) << n) - 1));
        uint32_t y = static_cast<uint32_t>(rng::hash(seed, {s, 1}) & ((uint64_t(1) << n) - 1));
        bool cx = coloring.has(x), cy = coloring.has(y), cz = coloring.has(x ^ y);
        return cx == cy && cy == cz;
      },
      mode);
  return Rat(static_cast<long>(hits)) / Rat(static_cast<long>(samples));
}

namespace {

std::vector<char> parse_hex_bits(const std::string& hex, size_t nbits) {
  std::vector<char> bits(nbits, 0);
  // hex is big-endian: the last hex digit holds bits 0..3
  size_t bit = 0;
  for (size_t i = hex.size(); i-- > 0 && bit < nbits;) {
    char c = hex[i];
    int v;
    if (c >= '0' && c <= '9')
      v = c - '0';
    else if (c >= 'a' && c <= 'f')
      v = 10 + c - 'a';
    else if (c >= 'A' && c <= 'F')
      v = 10 + c - 'A';
    else
      throw std::invalid_argument("bad hex digit in bitstring");
    for (int j = 0; j < 4 && bit < nbits; ++j, ++bit)
      if (v & (1 << j)) bits[bit] = 1;
  }
  return bits;
}

std::string print_hex_bits(const std::vector<char>& bits) {
  std::string hex;
  for (size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (size_t j = 0; j < 4 && i + j < bits.size(); ++j)
      if (bits[i + j]) v |= 1 << j;
    hex += "0123456789abcdef"[v];
  }
  std::reverse(hex.begin(), hex.end());
  return hex;
}

std::string grab_field(const std::string& text, const std::string& key) {
  size_t k = text.find(key + "=");
  if (k == std::string::npos) throw std::invalid_argument("missing " + key + "=");
  size_t b = k + key.size() + 1, e = b;
  while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e])) && text[e] != '}') ++e;
  return text.substr(b, e - b);
}

}  // namespace

LinSubset parse_linsubset(const std::string& text) {
  LinSubset a;
  a.n = std::stoi(grab_field(text, "n"));
  a.bits = parse_hex_bits(grab_field(text, "bits"), size_t(1) << a.n);
  return a;
}

std::string print_linsubset(const LinSubset& a) {
  return "linsubset { n=" + std::to_string(a.n) + " bits=" + print_hex_bits(a.bits) + " }";
}

Pattern parse_pattern(const std::string& text) {
  Pattern f;
  f.m = std::stoi(grab_field(text, "m"));
  f.values = parse_hex_bits(grab_field(text, "bits"), (size_t(1) << f.m) - 1);
  return f;
}

std::string print_pattern(const Pattern& f) {
  return "pattern { m=" + std::to_string(f.m) + " bits=" + print_hex_bits(f.values) + " }";
}

}  // namespace theon
