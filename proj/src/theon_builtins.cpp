#include <algorithm>
#include <cmath>
#include <functional>

#include "theon/models.hpp"
#include <sstream>

#include "theon/builtins.hpp"
#include "theon/theons.hpp"

namespace theon {

namespace {

constexpr CoordMask M1 = 0b001, M2 = 0b010, M12 = 0b011;

Theon constant_graphon(const Rat& p) {
  Theon t;
  t.theory = builtin_theory("Graph");
  int m = static_cast<int>(p.get_den().get_ui());
  if (m < 1) m = 1;
  t.grid = GroundGrid::uniform(m);
  t.peons = {pe_axis_le(M12, p, 0, /*strict=*/false)};
  return t;
}

Theon hypergraphon_hp(const Rat& p) {
  Theon t;
  t.theory = builtin_theory("kHypergraph:3");
  t.grid = GroundGrid::uniform(static_cast<int>(p.get_den().get_ui()));
  t.peons = {pe_axis_le(0b111, p, 0, false)};
  return t;
}

Theon hypergraphon_hprime(const Rat& p) {
  Theon t;
  t.theory = builtin_theory("kHypergraph:3");
  t.grid = GroundGrid::uniform(static_cast<int>(p.get_den().get_ui()));
  t.peons = {pe_and({pe_axis_le(0b011, p, 0, false), pe_axis_le(0b101, p, 0, false),
                     pe_axis_le(0b110, p, 0, false)})};
  return t;
}

// Turan graphon 1 - W_l: edge iff the endpoints land in different parts.
Theon turan_theon(int l) {
  Theon t;
  t.theory = builtin_theory("Graph");
  t.grid = GroundGrid::uniform(l);
  std::vector<CoordMask> coords = coord_index(2, 2);  // {1},{2},{1,2}
  size_t size = static_cast<size_t>(l) * static_cast<size_t>(l) * static_cast<size_t>(l);
  auto bits = std::make_shared<std::vector<char>>(size, 0);
  for (int c1 = 0; c1 < l; ++c1)
    for (int c2 = 0; c2 < l; ++c2)
      for (int c12 = 0; c12 < l; ++c12)
        if (c1 != c2)
          (*bits)[static_cast<size_t>(c1) + static_cast<size_t>(l) * (static_cast<size_t>(c2) +
                                                                     static_cast<size_t>(l) * static_cast<size_t>(c12))] = 1;
  t.peons = {pe_table(bits, coords)};
  return t;
}

Theon linorder_std() {
  Theon t;
  t.theory = builtin_theory("LinOrder");
  t.grid = GroundGrid::uniform(1);
  t.peons = {pe_axis_cmp(M1, M2, 0)};
  return t;
}

Theon linorder_mod(int k) {
  Theon t;
  t.theory = builtin_theory("LinOrder");
  t.grid = GroundGrid::uniform(k);
  t.peons = {pe_frac_cmp(M1, M2, 0)};
  return t;
}

PeonExprPtr lex_less(int first_axis) {
  int other = 1 - first_axis;
  return pe_or({pe_axis_cmp(M1, M2, first_axis),
                pe_and({pe_axis_eq(M1, M2, first_axis), pe_axis_cmp(M1, M2, other)})});
}

}  // namespace

Theon standard_permuton(const PlanarGrid& mu) {
  // Both marginals must be Lebesgue: row and column sums equal 1/g.
  Rat unit = rat(1, mu.g);
  for (int i = 0; i < mu.g; ++i) {
    Rat row = 0, col = 0;
    for (int j = 0; j < mu.g; ++j) {
      row += mu.w[static_cast<size_t>(i)][static_cast<size_t>(j)];
      col += mu.w[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    if (row != unit || col != unit)
      throw std::invalid_argument("standard_permuton: marginals are not uniform");
  }
  Theon t;
  t.theory = builtin_theory("Perm");
  t.grid = GroundGrid::planar(mu.g, mu.w);
  t.grid.comonotone = true;  // diagonal weights mean diagonal mass
  t.grid.validate();
  t.peons = {lex_less(0), lex_less(1)};
  return t;
}

Theon interval_theon(const GroundGrid& grid) {
  for (const auto& cell : grid.cells)
    if (cell.weight > 0 && cell.hi[1] < cell.lo[0])
      throw std::invalid_argument("interval_theon: right endpoints must dominate left endpoints");
  Theon t;
  t.theory = builtin_theory("IntervalGraph");
  t.grid = grid;
  t.grid.validate();
  // intervals [pi1(x), pi2(x)] and [pi1(y), pi2(y)] intersect
  t.peons = {pe_and({pe_not(pe_axis_cmp2(M1, 1, M2, 0)), pe_not(pe_axis_cmp2(M2, 1, M1, 0))})};
  return t;
}

Theon poseton_from_w(const StepKernel& w) {
  int g = w.g;
  // poseton laws on cells: support on strictly increasing columns,
  // cellwise transitivity 0/1
  auto col = [&](int c) { return c / g; };
  for (int c1 = 0; c1 < g * g; ++c1)
    for (int c2 = 0; c2 < g * g; ++c2) {
      const Rat& v = w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)];
      if (v < 0 || v > 1) throw std::invalid_argument("poseton_from_w: kernel values must be in [0,1]");
      if (v > 0 && col(c1) >= col(c2))
        throw std::invalid_argument("poseton_from_w: kernel must vanish unless the first column is smaller");
    }
  for (int c1 = 0; c1 < g * g; ++c1)
    for (int c2 = 0; c2 < g * g; ++c2)
      for (int c3 = 0; c3 < g * g; ++c3)
        if (w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] > 0 &&
            w.w[static_cast<size_t>(c2)][static_cast<size_t>(c3)] > 0 &&
            w.w[static_cast<size_t>(c1)][static_cast<size_t>(c3)] != 1)
          throw std::invalid_argument("poseton_from_w: cellwise transitivity 0/1 law violated");

  std::vector<std::vector<Rat>> uniform(static_cast<size_t>(g),
                                        std::vector<Rat>(static_cast<size_t>(g), rat(1, g * g)));
  Theon t;
  t.theory = builtin_theory("ExtendedOrder");
  t.grid = GroundGrid::planar(g, uniform);

  // lt2: pi_1(z_{1,2}) below the kernel value of the endpoint cells
  std::vector<PeonExprPtr> branches;
  for (int c1 = 0; c1 < g * g; ++c1)
    for (int c2 = 0; c2 < g * g; ++c2) {
      const Rat& v = w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)];
      if (v == 0) continue;
      std::vector<char> s1(static_cast<size_t>(g * g), 0), s2(static_cast<size_t>(g * g), 0);
      s1[static_cast<size_t>(c1)] = 1;
      s2[static_cast<size_t>(c2)] = 1;
      branches.push_back(pe_and({pe_cell_in(M1, s1), pe_cell_in(M2, s2),
                                 pe_axis_le(M12, v, 0, /*strict=*/true)}));
    }
  int lt1 = t.theory.language.require("lt1");
  int lt2 = t.theory.language.require("lt2");
  t.peons.resize(2);
  t.peons[static_cast<size_t>(lt1)] = lex_less(0);
  t.peons[static_cast<size_t>(lt2)] = pe_or(std::move(branches));
  return t;
}

namespace {

// Section endpoints on one axis: measure of the order-i section of a pinned
// cell at offset 0 and 1, with an affineness cross-check at 1/2.
struct SectionInterval {
  Rat lo, hi;
};

SectionInterval section_interval(const Theon& t, int pred, int axis, int cell) {
  auto measure_at = [&](const Rat& o) {
    PinMap pins;
    PinValue pv;
    pv.cell = cell;
    pv.off[0] = o;
    pv.off[1] = o;
    pins[M2] = pv;
    return measure_condition(t, t.peon(pred), &pins, Exec::Serial, nullptr);
  };
  (void)axis;
  SectionInterval s{measure_at(Rat(0)), measure_at(Rat(1))};
  Rat mid = measure_at(rat(1, 2));
  if (mid * 2 != s.lo + s.hi)
    throw std::invalid_argument("permuton_extract: section is not affine in the cell offset");
  return s;
}

}  // namespace

PlanarGrid permuton_extract(const Theon& perm_theon) {
  const Theory& t = perm_theon.theory;
  int lt1 = t.language.require("lt1");
  int lt2 = t.language.require("lt2");

  bool flat = true;
  for (const auto& cell : perm_theon.grid.cells)
    if (cell.lo[1] != 0 || cell.hi[1] != 1) flat = false;
  if (!perm_theon.grid.comonotone && !flat)
    throw std::invalid_argument("permuton_extract: planar input must use a comonotone grid");

  int C = perm_theon.grid.size();
  // target resolution: all endpoints must align to multiples of 1/g
  std::vector<SectionInterval> s1(static_cast<size_t>(C)), s2(static_cast<size_t>(C));
  for (int c = 0; c < C; ++c) {
    if (perm_theon.grid.cells[static_cast<size_t>(c)].weight == 0) continue;
    s1[static_cast<size_t>(c)] = section_interval(perm_theon, lt1, 0, c);
    s2[static_cast<size_t>(c)] = section_interval(perm_theon, lt2, 1, c);
  }

  // find g: common denominator of the endpoints
  mpz_class den = 1;
  for (int c = 0; c < C; ++c) {
    if (perm_theon.grid.cells[static_cast<size_t>(c)].weight == 0) continue;
    den = lcm(den, s1[static_cast<size_t>(c)].lo.get_den());
    den = lcm(den, s1[static_cast<size_t>(c)].hi.get_den());
    den = lcm(den, s2[static_cast<size_t>(c)].lo.get_den());
    den = lcm(den, s2[static_cast<size_t>(c)].hi.get_den());
  }
  int g = static_cast<int>(den.get_ui());
  if (g < 1) g = 1;

  PlanarGrid out;
  out.g = g;
  out.w.assign(static_cast<size_t>(g), std::vector<Rat>(static_cast<size_t>(g), Rat(0)));
  for (int c = 0; c < C; ++c) {
    if (perm_theon.grid.cells[static_cast<size_t>(c)].weight == 0) continue;
    // the image rectangle must be a union of whole target cells; per-cell
    // weights distribute uniformly (the pushforward of a uniform cell
    // through an affine map is uniform on the rectangle)
    Rat a0 = s1[static_cast<size_t>(c)].lo, b0 = s1[static_cast<size_t>(c)].hi;
    Rat a1 = s2[static_cast<size_t>(c)].lo, b1 = s2[static_cast<size_t>(c)].hi;
    if (b0 < a0 || b1 < a1) throw std::invalid_argument("permuton_extract: inverted section interval");
    Rat area = (b0 - a0) * (b1 - a1);
    if (area == 0) throw std::invalid_argument("permuton_extract: degenerate section image");
    const Rat& wc = perm_theon.grid.cells[static_cast<size_t>(c)].weight;
    auto scaled_int = [&](const Rat& v) {
      Rat s = v * g;
      if (s.get_den() != 1) throw std::invalid_argument("permuton_extract: image rectangle not grid aligned");
      return s.get_num().get_si();
    };
    long i0 = scaled_int(a0), i1 = scaled_int(b0), j0 = scaled_int(a1), j1 = scaled_int(b1);
    for (long i = i0; i < i1; ++i)
      for (long j = j0; j < j1; ++j) {
        Rat cell_area = rat(1, g * g);
        out.w[static_cast<size_t>(i)][static_cast<size_t>(j)] += wc * cell_area / area;
      }
  }

  // marginal assertion: a failure signals a non-weak input
  Rat unit = rat(1, g);
  for (int i = 0; i < g; ++i) {
    Rat row = 0, col = 0;
    for (int j = 0; j < g; ++j) {
      row += out.w[static_cast<size_t>(i)][static_cast<size_t>(j)];
      col += out.w[static_cast<size_t>(j)][static_cast<size_t>(i)];
    }
    if (row != unit || col != unit)
      throw std::invalid_argument("permuton_extract: extracted measure has non-uniform marginals");
  }

  // The section maps can couple through a shared within-cell offset in ways
  // no grid represents (sloped line images); catch that by insisting the
  // extracted grid reproduces every pattern density up to size 3.
  Theon check = standard_permuton(out);
  for (const char* pat : {"12", "21", "123", "132", "213", "231", "312", "321"}) {
    Structure sigma = make_named_model("perm", {pat});
    if (exact_density(perm_theon, sigma, DKind::P) != exact_density(check, sigma, DKind::P))
      throw std::invalid_argument("permuton_extract: input is not representable on a finite grid");
  }
  return out;
}

StepKernel poseton_extract(const Theon& ext) {
  const Theory& t = ext.theory;
  int lt1 = t.language.require("lt1");
  int lt2 = t.language.require("lt2");
  int C = ext.grid.size();

  // input shape: lt1 must be the first-coordinate order up to ties
  {
    PeonExprPtr strictly_below = pe_axis_cmp(M1, M2, 0);
    Rat missing = measure_condition(ext, pe_and({strictly_below, pe_not(ext.peon(lt1))}), nullptr,
                                    Exec::Serial, nullptr);
    Rat excess = measure_condition(ext, pe_and({ext.peon(lt1), pe_axis_cmp(M2, M1, 0)}), nullptr,
                                   Exec::Serial, nullptr);
    if (missing != 0 || excess != 0)
      throw std::invalid_argument("poseton_extract: lt1 is not the first-coordinate order");
  }

  int g = 0;
  {
    // planar grid expected: uniform g x g cells
    double side = std::sqrt(static_cast<double>(C));
    g = static_cast<int>(side + 0.5);
    if (g * g != C) throw std::invalid_argument("poseton_extract: grid is not planar");
  }

  auto w_at = [&](int c1, int c2, const Rat& o) {
    PinMap pins;
    PinValue p1, p2;
    p1.cell = c1;
    p1.off[0] = o;
    p1.off[1] = o;
    p2.cell = c2;
    p2.off[0] = 1 - o;
    p2.off[1] = 1 - o;
    pins[M1] = p1;
    pins[M2] = p2;
    return measure_condition(ext, ext.peon(lt2), &pins, Exec::Serial, nullptr);
  };

  StepKernel out;
  out.g = g;
  out.w.assign(static_cast<size_t>(C), std::vector<Rat>(static_cast<size_t>(C), Rat(0)));
  auto col = [&](int c) { return c / g; };
  for (int c1 = 0; c1 < C; ++c1)
    for (int c2 = 0; c2 < C; ++c2) {
      if (col(c1) >= col(c2)) continue;  // asymmetry guard of the kernel
      Rat v = w_at(c1, c2, rat(1, 2));
      if (v != w_at(c1, c2, rat(1, 4)) || v != w_at(c1, c2, rat(3, 4)))
        throw std::invalid_argument("poseton_extract: section depends on within-cell position");
      out.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] = v;
    }

  // cellwise transitivity 0/1 law
  for (int c1 = 0; c1 < C; ++c1)
    for (int c2 = 0; c2 < C; ++c2)
      for (int c3 = 0; c3 < C; ++c3)
        if (out.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] > 0 &&
            out.w[static_cast<size_t>(c2)][static_cast<size_t>(c3)] > 0 &&
            out.w[static_cast<size_t>(c1)][static_cast<size_t>(c3)] != 1)
          throw std::invalid_argument("poseton_extract: transitivity 0/1 law fails on cells");
  return out;
}

namespace {

PlanarGrid identity_permuton_grid(int g) {
  PlanarGrid mu;
  mu.g = g;
  mu.w.assign(static_cast<size_t>(g), std::vector<Rat>(static_cast<size_t>(g), Rat(0)));
  for (int i = 0; i < g; ++i) mu.w[static_cast<size_t>(i)][static_cast<size_t>(i)] = rat(1, g);
  return mu;
}



StepKernel example_kernel(int g) {
  // strict column order with full weight: the cellwise chain
  StepKernel w;
  w.g = g;
  w.w.assign(static_cast<size_t>(g * g), std::vector<Rat>(static_cast<size_t>(g * g), Rat(0)));
  for (int c1 = 0; c1 < g * g; ++c1)
    for (int c2 = 0; c2 < g * g; ++c2)
      if (c1 / g < c2 / g) w.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)] = 1;
  return w;
}

}  // namespace

Theon builtin_theon(const std::string& name, const std::vector<std::string>& params) {
  auto p0 = [&](const char* def = nullptr) {
    if (!params.empty()) return params[0];
    if (def) return std::string(def);
    throw std::invalid_argument("builtin theon " + name + ": missing parameter");
  };
  if (name == "constant_graphon") return constant_graphon(rat_parse(p0()));
  if (name == "hypergraphon_Hp") return hypergraphon_hp(rat_parse(p0()));
  if (name == "hypergraphon_Hprime") return hypergraphon_hprime(rat_parse(p0()));
  if (name == "turan") return turan_theon(std::stoi(p0()));
  if (name == "linorder_std") return linorder_std();
  if (name == "linorder_mod") return linorder_mod(std::stoi(p0()));
  if (name == "standard_permuton") {
    // "identity" or "identity:g"
    int g = params.size() > 1 ? std::stoi(params[1]) : 2;
    if (!params.empty() && params[0] != "identity")
      throw std::invalid_argument("builtin standard_permuton: only identity:<g> is built in");
    return standard_permuton(identity_permuton_grid(g));
  }
  if (name == "poseton_chain") return poseton_from_w(example_kernel(params.empty() ? 2 : std::stoi(p0())));
  if (name == "interval_example") {
    // interval start uniform, interval end pinned to the top of its column:
    // the sampled graphs are disjoint unions of g cliques
    int g = params.empty() ? 3 : std::stoi(p0());
    GroundGrid grid;
    for (int i = 0; i < g; ++i) {
      GroundCell cell;
      cell.weight = rat(1, g);
      cell.lo[0] = rat(i, g);
      cell.hi[0] = rat(i + 1, g);
      cell.lo[1] = rat(i + 1, g);
      cell.hi[1] = rat(i + 1, g);  // degenerate: b is the column top
      grid.cells.push_back(cell);
    }
    return interval_theon(grid);
  }
  throw std::invalid_argument("unknown builtin theon " + name);
}

Theon builtin_theon(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else
      cur += c;
  }
  parts.push_back(cur);
  size_t base = 0;
  if (parts[0] == "builtin") base = 1;
  if (base >= parts.size()) throw std::invalid_argument("bad theon spec " + spec);
  std::string name = parts[base];
  std::vector<std::string> params(parts.begin() + static_cast<long>(base) + 1, parts.end());
  return builtin_theon(name, params);
}

}  // namespace theon
