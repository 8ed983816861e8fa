#include "theon/theons.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "theon/builtins.hpp"
#include "theon/interpret.hpp"
#include "theon/rng.hpp"

namespace theon {

std::vector<int> mask_elements(CoordMask a) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (a & (1u << i)) out.push_back(i + 1);
  return out;
}

bool coord_order_less(CoordMask a, CoordMask b) {
  int ca = __builtin_popcount(a), cb = __builtin_popcount(b);
  if (ca != cb) return ca < cb;
  return mask_elements(a) < mask_elements(b);
}

std::vector<CoordMask> coord_index(int n, int max_size) {
  std::vector<CoordMask> out;
  for (CoordMask m = 1; m < (1u << n); ++m)
    if (__builtin_popcount(m) <= max_size) out.push_back(m);
  std::sort(out.begin(), out.end(), coord_order_less);
  return out;
}

void GroundGrid::validate() const {
  Rat total = 0;
  for (const auto& c : cells) {
    if (c.weight < 0) throw std::invalid_argument("grid: negative cell weight");
    total += c.weight;
  }
  if (total != 1) throw std::invalid_argument("grid: weights must sum to 1");
}

GroundGrid GroundGrid::uniform(int m) {
  GroundGrid g;
  for (int c = 0; c < m; ++c) {
    GroundCell cell;
    cell.weight = rat(1, m);
    cell.lo[0] = rat(c, m);
    cell.hi[0] = rat(c + 1, m);
    g.cells.push_back(cell);
  }
  return g;
}

GroundGrid GroundGrid::planar(int g_, const std::vector<std::vector<Rat>>& w) {
  GroundGrid g;
  for (int i = 0; i < g_; ++i)
    for (int j = 0; j < g_; ++j) {
      GroundCell cell;
      cell.weight = w[static_cast<size_t>(i)][static_cast<size_t>(j)];
      cell.lo[0] = rat(i, g_);
      cell.hi[0] = rat(i + 1, g_);
      cell.lo[1] = rat(j, g_);
      cell.hi[1] = rat(j + 1, g_);
      g.cells.push_back(cell);
    }
  return g;
}

const Coord& TheonPoint::at(CoordMask m) const {
  for (size_t i = 0; i < masks.size(); ++i)
    if (masks[i] == m) return coords[i];
  throw std::invalid_argument("TheonPoint: coordinate not present");
}

namespace {

PeonExprPtr mk(PeonExpr e) { return std::make_shared<PeonExpr>(std::move(e)); }

}  // namespace

PeonExprPtr pe_const(bool v) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::Const;
  e.value = v;
  return mk(std::move(e));
}

PeonExprPtr pe_not(PeonExprPtr a) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::Not;
  e.kids = {std::move(a)};
  return mk(std::move(e));
}

PeonExprPtr pe_and(std::vector<PeonExprPtr> kids) {
  if (kids.empty()) return pe_const(true);
  if (kids.size() == 1) return kids[0];
  PeonExpr e;
  e.kind = PeonExpr::Kind::And;
  e.kids = std::move(kids);
  return mk(std::move(e));
}

PeonExprPtr pe_or(std::vector<PeonExprPtr> kids) {
  if (kids.empty()) return pe_const(false);
  if (kids.size() == 1) return kids[0];
  PeonExpr e;
  e.kind = PeonExpr::Kind::Or;
  e.kids = std::move(kids);
  return mk(std::move(e));
}

PeonExprPtr pe_cell_in(CoordMask a, std::vector<char> cells) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::CellIn;
  e.a = a;
  e.cells = std::move(cells);
  return mk(std::move(e));
}

PeonExprPtr pe_table(std::shared_ptr<std::vector<char>> bits, std::vector<CoordMask> coords) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::Table;
  e.table = std::move(bits);
  e.table_coords = std::move(coords);
  return mk(std::move(e));
}

PeonExprPtr pe_axis_cmp(CoordMask a, CoordMask b, int axis) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::AxisCmp;
  e.a = a;
  e.b = b;
  e.axis = axis;
  e.axis_b = axis;
  return mk(std::move(e));
}

PeonExprPtr pe_axis_cmp2(CoordMask a, int axis_a, CoordMask b, int axis_b) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::AxisCmp;
  e.a = a;
  e.b = b;
  e.axis = axis_a;
  e.axis_b = axis_b;
  return mk(std::move(e));
}

PeonExprPtr pe_axis_eq(CoordMask a, CoordMask b, int axis) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::AxisEq;
  e.a = a;
  e.b = b;
  e.axis = axis;
  e.axis_b = axis;
  return mk(std::move(e));
}

PeonExprPtr pe_axis_le(CoordMask a, Rat q, int axis, bool strict) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::AxisLE;
  e.a = a;
  e.q = std::move(q);
  e.axis = axis;
  e.strict = strict;
  return mk(std::move(e));
}

PeonExprPtr pe_frac_cmp(CoordMask a, CoordMask b, int axis) {
  PeonExpr e;
  e.kind = PeonExpr::Kind::FracCmp;
  e.a = a;
  e.b = b;
  e.axis = axis;
  return mk(std::move(e));
}

static CoordMask remap_mask(CoordMask m, const std::vector<int>& alpha) {
  CoordMask out = 0;
  for (int i = 0; i < 32; ++i)
    if (m & (1u << i)) {
      int img = alpha[static_cast<size_t>(i)];  // alpha maps 0-based position i to 1-based vertex
      out |= (1u << (img - 1));
    }
  return out;
}

PeonExprPtr pe_remap(const PeonExprPtr& e, const std::vector<int>& alpha) {
  PeonExpr out = *e;
  if (out.a) out.a = remap_mask(out.a, alpha);
  if (out.b) out.b = remap_mask(out.b, alpha);
  for (auto& c : out.table_coords) c = remap_mask(c, alpha);
  out.kids.clear();
  for (const auto& k : e->kids) out.kids.push_back(pe_remap(k, alpha));
  return mk(std::move(out));
}

int Theon::max_arity() const {
  int k = 1;
  for (const auto& s : theory.language.symbols()) k = std::max(k, s.arity);
  return k;
}

// ---------------------------------------------------------------- pointwise

namespace {

Rat coord_pos(const GroundGrid& grid, const Coord& c, int axis) {
  const auto& cell = grid.cells[static_cast<size_t>(c.cell)];
  int off_axis = grid.comonotone ? 0 : axis;
  return cell.lo[axis] + dyadic64(c.off[off_axis]) * (cell.hi[axis] - cell.lo[axis]);
}

size_t table_index(const PeonExpr& e, const std::function<int(CoordMask)>& cell_of, int n_cells) {
  size_t idx = 0, mult = 1;
  for (CoordMask m : e.table_coords) {
    idx += mult * static_cast<size_t>(cell_of(m));
    mult *= static_cast<size_t>(n_cells);
  }
  return idx;
}

}  // namespace

namespace {

// Exact position comparison with integer fast paths: identical axis
// intervals compare by offset words, disjoint intervals are decided by the
// interval order, everything else falls back to rational arithmetic.
int cmp_pos(const GroundGrid& grid, const Coord& ca, int axis_a, const Coord& cb, int axis_b) {
  const auto& cella = grid.cells[static_cast<size_t>(ca.cell)];
  const auto& cellb = grid.cells[static_cast<size_t>(cb.cell)];
  int off_a_axis = grid.comonotone ? 0 : axis_a;
  int off_b_axis = grid.comonotone ? 0 : axis_b;
  if (cella.lo[axis_a] == cellb.lo[axis_b] && cella.hi[axis_a] == cellb.hi[axis_b]) {
    if (cella.lo[axis_a] == cella.hi[axis_a]) return 0;  // degenerate: equal positions
    uint64_t oa = ca.off[off_a_axis], ob = cb.off[off_b_axis];
    return oa < ob ? -1 : (oa > ob ? 1 : 0);
  }
  if (cella.hi[axis_a] <= cellb.lo[axis_b]) {
    // a's interval is left of b's; only a boundary point can tie
    Rat pa = coord_pos(grid, ca, axis_a), pb = coord_pos(grid, cb, axis_b);
    return pa == pb ? 0 : -1;
  }
  if (cellb.hi[axis_b] <= cella.lo[axis_a]) {
    Rat pa = coord_pos(grid, ca, axis_a), pb = coord_pos(grid, cb, axis_b);
    return pa == pb ? 0 : 1;
  }
  Rat pa = coord_pos(grid, ca, axis_a), pb = coord_pos(grid, cb, axis_b);
  return pa < pb ? -1 : (pa > pb ? 1 : 0);
}

}  // namespace

bool eval_point(const PeonExpr& e, const GroundGrid& grid, const TheonPoint& point) {
  switch (e.kind) {
    case PeonExpr::Kind::Const:
      return e.value;
    case PeonExpr::Kind::Not:
      return !eval_point(*e.kids[0], grid, point);
    case PeonExpr::Kind::And:
      for (const auto& k : e.kids)
        if (!eval_point(*k, grid, point)) return false;
      return true;
    case PeonExpr::Kind::Or:
      for (const auto& k : e.kids)
        if (eval_point(*k, grid, point)) return true;
      return false;
    case PeonExpr::Kind::CellIn:
      return e.cells[static_cast<size_t>(point.at(e.a).cell)] != 0;
    case PeonExpr::Kind::Table: {
      size_t idx = table_index(e, [&](CoordMask m) { return point.at(m).cell; }, grid.size());
      return (*e.table)[idx] != 0;
    }
    case PeonExpr::Kind::AxisCmp:
      return cmp_pos(grid, point.at(e.a), e.axis, point.at(e.b), e.axis_b < 0 ? e.axis : e.axis_b) < 0;
    case PeonExpr::Kind::AxisEq:
      return cmp_pos(grid, point.at(e.a), e.axis, point.at(e.b), e.axis_b < 0 ? e.axis : e.axis_b) == 0;
    case PeonExpr::Kind::AxisLE: {
      const auto& cell = grid.cells[static_cast<size_t>(point.at(e.a).cell)];
      if (e.q <= cell.lo[e.axis]) return !e.strict && e.q == cell.lo[e.axis] && point.at(e.a).off[grid.comonotone ? 0 : e.axis] == 0;
      if (e.q >= cell.hi[e.axis] && cell.lo[e.axis] != cell.hi[e.axis]) return true;
      Rat p = coord_pos(grid, point.at(e.a), e.axis);
      return e.strict ? p < e.q : p <= e.q;
    }
    case PeonExpr::Kind::FracCmp:
      return point.at(e.a).off[e.axis] < point.at(e.b).off[e.axis];
  }
  return false;
}

bool TheonPointOracle::member(int pred, const TheonPoint& point) const {
  return eval_point(*theon_.peon(pred), theon_.grid, point);
}

// ---------------------------------------------------------------- sampling

namespace {

Coord draw_coord(const GroundGrid& grid, uint64_t seed, uint64_t sample_key, CoordMask mask) {
  Coord c;
  uint64_t u = rng::hash(seed, {sample_key, static_cast<uint64_t>(mask), 0});
  Rat ur = dyadic64(u);
  Rat acc = 0;
  c.cell = grid.size() - 1;
  for (int i = 0; i < grid.size(); ++i) {
    acc += grid.cells[static_cast<size_t>(i)].weight;
    if (ur < acc) {
      c.cell = i;
      break;
    }
  }
  c.off[0] = rng::hash(seed, {sample_key, static_cast<uint64_t>(mask), 1});
  c.off[1] = grid.comonotone ? c.off[0] : rng::hash(seed, {sample_key, static_cast<uint64_t>(mask), 2});
  return c;
}

}  // namespace

Structure sample_model(const TheonOracle& oracle, int n, uint64_t seed) {
  const Theory& t = oracle.oracle_theory();
  const GroundGrid& grid = oracle.ground();
  int maxk = 1;
  for (const auto& s : t.language.symbols()) maxk = std::max(maxk, s.arity);

  std::vector<CoordMask> masks = coord_index(n, maxk);
  std::map<CoordMask, Coord> xi;
  for (CoordMask m : masks) xi[m] = draw_coord(grid, seed, 0, m);

  Structure out(t.language, n);
  for (int p = 0; p < t.language.size(); ++p) {
    int k = t.language.arity(p);
    if (k > n) continue;
    // all injections [k] -> [n]
    std::vector<int> alpha(static_cast<size_t>(k));
    std::vector<char> used(static_cast<size_t>(n + 1), 0);
    std::function<void(int)> rec = [&](int depth) {
      if (depth == k) {
        TheonPoint pt;
        for (CoordMask m = 1; m < (1u << k); ++m) {
          pt.masks.push_back(m);
          pt.coords.push_back(xi.at(remap_mask(m, alpha)));
        }
        if (oracle.member(p, pt)) {
          Tuple tup(alpha.begin(), alpha.end());
          out.add(p, tup);
        }
        return;
      }
      for (int v = 1; v <= n; ++v) {
        if (used[static_cast<size_t>(v)]) continue;
        used[static_cast<size_t>(v)] = 1;
        alpha[static_cast<size_t>(depth)] = v;
        rec(depth + 1);
        used[static_cast<size_t>(v)] = 0;
      }
    };
    rec(0);
  }
  return out;
}

Structure sample_model(const Theon& theon, int n, uint64_t seed) {
  TheonPointOracle o(theon);
  return sample_model(o, n, seed);
}

// ------------------------------------------------------- exact measure kernel

namespace {

// Offset variable: a (coordinate, axis) pair.
struct OffVar {
  CoordMask coord;
  int axis;
  bool operator<(const OffVar& o) const {
    if (coord != o.coord) return coord < o.coord;
    return axis < o.axis;
  }
  bool operator==(const OffVar& o) const { return coord == o.coord && axis == o.axis; }
};

// Residual condition after cells are fixed: a tree whose leaves are either
// constants, var-vs-var offset comparisons, or var-vs-threshold atoms.
struct Resid {
  enum class Kind { Const, Not, And, Or, VarVar, VarConst };
  Kind kind;
  bool value = false;
  std::vector<int> kids;
  int va = -1, vb = -1;  // VarVar: off[va] < off[vb]
  Rat t;                 // VarConst: off[va] < t (strictness irrelevant for measure)
};

struct ResidProblem {
  std::vector<Resid> nodes;
  int root = -1;
  std::vector<OffVar> vars;

  int var_id(OffVar v) {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return static_cast<int>(i);
    vars.push_back(v);
    return static_cast<int>(vars.size() - 1);
  }
  int push(Resid r) {
    nodes.push_back(std::move(r));
    return static_cast<int>(nodes.size() - 1);
  }
};

struct KernelCtx {
  const GroundGrid* grid;
  const std::vector<CoordMask>* free_masks;        // enumerated coords
  const std::vector<int>* cell_assign;             // per free mask
  const PinMap* pins;
  int off_axis(int axis) const { return grid->comonotone ? 0 : axis; }
  int cell_of(CoordMask m) const {
    if (pins) {
      auto it = pins->find(m);
      if (it != pins->end()) return it->second.cell;
    }
    for (size_t i = 0; i < free_masks->size(); ++i)
      if ((*free_masks)[i] == m) return (*cell_assign)[i];
    throw std::invalid_argument("kernel: unassigned coordinate");
  }
  const Rat* pinned_off(CoordMask m, int axis) const {
    if (!pins) return nullptr;
    auto it = pins->find(m);
    if (it == pins->end()) return nullptr;
    return &it->second.off[off_axis(axis)];
  }
};

// Interval of a coordinate's position on an axis given its cell.
void cell_interval(const GroundGrid& grid, int cell, int axis, Rat& lo, Rat& hi) {
  lo = grid.cells[static_cast<size_t>(cell)].lo[axis];
  hi = grid.cells[static_cast<size_t>(cell)].hi[axis];
}

// Build the residual for one atom; returns node id.
int partial_atom(const PeonExpr& e, const KernelCtx& ctx, ResidProblem& rp) {
  const GroundGrid& grid = *ctx.grid;
  switch (e.kind) {
    case PeonExpr::Kind::CellIn:
      return rp.push({Resid::Kind::Const, e.cells[static_cast<size_t>(ctx.cell_of(e.a))] != 0, {}, -1, -1, Rat()});
    case PeonExpr::Kind::Table: {
      size_t idx = table_index(e, [&](CoordMask m) { return ctx.cell_of(m); }, grid.size());
      return rp.push({Resid::Kind::Const, (*e.table)[idx] != 0, {}, -1, -1, Rat()});
    }
    case PeonExpr::Kind::AxisCmp:
    case PeonExpr::Kind::AxisEq: {
      bool eq = e.kind == PeonExpr::Kind::AxisEq;
      int axis_b = e.axis_b < 0 ? e.axis : e.axis_b;
      int ca = ctx.cell_of(e.a), cb = ctx.cell_of(e.b);
      Rat la, ha, lb, hb;
      cell_interval(grid, ca, e.axis, la, ha);
      cell_interval(grid, cb, axis_b, lb, hb);
      const Rat* pa = ctx.pinned_off(e.a, e.axis);
      const Rat* pb = ctx.pinned_off(e.b, axis_b);
      // zero-width intervals behave like pinned constants
      Rat fixed_a, fixed_b;
      if (!pa && ha == la) {
        fixed_a = 0;
        pa = &fixed_a;
      }
      if (!pb && hb == lb) {
        fixed_b = 0;
        pb = &fixed_b;
      }
      if (pa && pb) {
        Rat va = la + *pa * (ha - la), vb = lb + *pb * (hb - lb);
        bool v = eq ? (va == vb) : (va < vb);
        return rp.push({Resid::Kind::Const, v, {}, -1, -1, Rat()});
      }
      if (eq) {
        // positive-measure-free; with at least one free uniform offset the
        // equality holds with probability zero
        return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
      }
      if (pa) {
        // pinned < free: value va vs interval [lb, hb): va < lb + off*(hb-lb)
        Rat va = la + *pa * (ha - la);
        if (va < lb) return rp.push({Resid::Kind::Const, true, {}, -1, -1, Rat()});
        if (va >= hb) return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
        // off_b > (va - lb)/(hb - lb): Not(off_b < t), boundary measure zero
        int vb_id = rp.var_id({e.b, ctx.off_axis(axis_b)});
        int leaf = rp.push({Resid::Kind::VarConst, false, {}, vb_id, -1, (va - lb) / (hb - lb)});
        return rp.push({Resid::Kind::Not, false, {leaf}, -1, -1, Rat()});
      }
      if (pb) {
        Rat vb = lb + *pb * (hb - lb);
        if (ha <= vb) return rp.push({Resid::Kind::Const, true, {}, -1, -1, Rat()});
        if (vb <= la) return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
        int va_id = rp.var_id({e.a, ctx.off_axis(e.axis)});
        return rp.push({Resid::Kind::VarConst, false, {}, va_id, -1, (vb - la) / (ha - la)});
      }
      // both free
      if (ha <= lb) return rp.push({Resid::Kind::Const, true, {}, -1, -1, Rat()});
      if (hb <= la) return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
      if (la == lb && ha == hb) {
        int va_id = rp.var_id({e.a, ctx.off_axis(e.axis)});
        int vb_id = rp.var_id({e.b, ctx.off_axis(axis_b)});
        return rp.push({Resid::Kind::VarVar, false, {}, va_id, vb_id, Rat()});
      }
      throw std::invalid_argument("kernel: partially overlapping axis intervals are not supported");
    }
    case PeonExpr::Kind::AxisLE: {
      int ca = ctx.cell_of(e.a);
      Rat la, ha;
      cell_interval(grid, ca, e.axis, la, ha);
      const Rat* pa = ctx.pinned_off(e.a, e.axis);
      Rat fixed_a;
      if (!pa && ha == la) {
        fixed_a = 0;
        pa = &fixed_a;
      }
      if (pa) {
        Rat va = la + *pa * (ha - la);
        bool v = e.strict ? va < e.q : va <= e.q;
        return rp.push({Resid::Kind::Const, v, {}, -1, -1, Rat()});
      }
      if (e.q <= la) return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
      if (e.q >= ha) return rp.push({Resid::Kind::Const, true, {}, -1, -1, Rat()});
      int va_id = rp.var_id({e.a, ctx.off_axis(e.axis)});
      return rp.push({Resid::Kind::VarConst, false, {}, va_id, -1, (e.q - la) / (ha - la)});
    }
    case PeonExpr::Kind::FracCmp: {
      const Rat* pa = ctx.pinned_off(e.a, e.axis);
      const Rat* pb = ctx.pinned_off(e.b, e.axis);
      if (pa && pb)
        return rp.push({Resid::Kind::Const, *pa < *pb, {}, -1, -1, Rat()});
      if (pa) {
        if (*pa >= 1) return rp.push({Resid::Kind::Const, false, {}, -1, -1, Rat()});
        int vb_id = rp.var_id({e.b, ctx.off_axis(e.axis)});
        int leaf = rp.push({Resid::Kind::VarConst, false, {}, vb_id, -1, *pa});
        return rp.push({Resid::Kind::Not, false, {leaf}, -1, -1, Rat()});
      }
      if (pb) {
        int va_id = rp.var_id({e.a, ctx.off_axis(e.axis)});
        return rp.push({Resid::Kind::VarConst, false, {}, va_id, -1, *pb});
      }
      int va_id = rp.var_id({e.a, ctx.off_axis(e.axis)});
      int vb_id = rp.var_id({e.b, ctx.off_axis(e.axis)});
      return rp.push({Resid::Kind::VarVar, false, {}, va_id, vb_id, Rat()});
    }
    default:
      throw std::logic_error("partial_atom: not an atom");
  }
}

int partial_eval(const PeonExpr& e, const KernelCtx& ctx, ResidProblem& rp) {
  switch (e.kind) {
    case PeonExpr::Kind::Const:
      return rp.push({Resid::Kind::Const, e.value, {}, -1, -1, Rat()});
    case PeonExpr::Kind::Not: {
      int a = partial_eval(*e.kids[0], ctx, rp);
      if (rp.nodes[static_cast<size_t>(a)].kind == Resid::Kind::Const) {
        rp.nodes[static_cast<size_t>(a)].value = !rp.nodes[static_cast<size_t>(a)].value;
        return a;
      }
      return rp.push({Resid::Kind::Not, false, {a}, -1, -1, Rat()});
    }
    case PeonExpr::Kind::And:
    case PeonExpr::Kind::Or: {
      bool is_and = e.kind == PeonExpr::Kind::And;
      std::vector<int> kids;
      for (const auto& k : e.kids) {
        int id = partial_eval(*k, ctx, rp);
        const auto& node = rp.nodes[static_cast<size_t>(id)];
        if (node.kind == Resid::Kind::Const) {
          if (node.value != is_and)  // absorbing element
            return rp.push({Resid::Kind::Const, !is_and, {}, -1, -1, Rat()});
          continue;  // neutral
        }
        kids.push_back(id);
      }
      if (kids.empty()) return rp.push({Resid::Kind::Const, is_and, {}, -1, -1, Rat()});
      if (kids.size() == 1) return kids[0];
      return rp.push({is_and ? Resid::Kind::And : Resid::Kind::Or, false, std::move(kids), -1, -1, Rat()});
    }
    default:
      return partial_atom(e, ctx, rp);
  }
}

bool resid_eval(const ResidProblem& rp, int node, const std::vector<char>& atom_vals) {
  const auto& n = rp.nodes[static_cast<size_t>(node)];
  switch (n.kind) {
    case Resid::Kind::Const:
      return n.value;
    case Resid::Kind::Not:
      return !resid_eval(rp, n.kids[0], atom_vals);
    case Resid::Kind::And:
      for (int k : n.kids)
        if (!resid_eval(rp, k, atom_vals)) return false;
      return true;
    case Resid::Kind::Or:
      for (int k : n.kids)
        if (resid_eval(rp, k, atom_vals)) return true;
      return false;
    case Resid::Kind::VarVar:
    case Resid::Kind::VarConst:
      return atom_vals[static_cast<size_t>(node)] != 0;
  }
  return false;
}

// Exact probability over independent uniform offsets that the residual is
// true: union-find clusters over comparison edges, per-cluster breakpoint
// segments from thresholds, order refinement within equal segments.
Rat solve_resid(const ResidProblem& rp, GuardCounter& guard) {
  if (rp.nodes.empty()) return 0;
  size_t nv = rp.vars.size();
  if (nv == 0) {
    std::vector<char> none;
    return resid_eval(rp, rp.root, none) ? 1 : 0;
  }
  if (nv > 16) throw GuardExceeded("offset solver: too many offset variables");

  // union-find over VarVar edges
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[static_cast<size_t>(x)] == x ? x : parent[static_cast<size_t>(x)] = find(parent[static_cast<size_t>(x)]); };
  for (const auto& n : rp.nodes)
    if (n.kind == Resid::Kind::VarVar) parent[static_cast<size_t>(find(n.va))] = find(n.vb);

  // cluster -> vars, breakpoints
  std::map<int, std::vector<int>> clusters;
  for (size_t v = 0; v < nv; ++v) clusters[find(static_cast<int>(v))].push_back(static_cast<int>(v));
  std::map<int, std::vector<Rat>> breaks;
  for (auto& [root, vars] : clusters) breaks[root] = {Rat(0), Rat(1)};
  for (const auto& n : rp.nodes)
    if (n.kind == Resid::Kind::VarConst) {
      Rat t = n.t;
      if (t < 0) t = 0;
      if (t > 1) t = 1;
      breaks[find(n.va)].push_back(t);
    }
  for (auto& [root, bs] : breaks) {
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
  }

  struct ClusterState {
    std::vector<int> vars;
    std::vector<Rat> bs;           // breakpoints
    std::vector<int> seg;          // per var: segment index [0, bs.size()-2]
    std::vector<int> rank;         // per var: rank among same-segment vars
  };
  std::vector<ClusterState> cs;
  for (auto& [root, vars] : clusters) {
    ClusterState c;
    c.vars = vars;
    c.bs = breaks[root];
    c.seg.assign(vars.size(), 0);
    c.rank.assign(vars.size(), 0);
    if (c.bs.size() < 2) throw std::logic_error("cluster without segments");
    cs.push_back(std::move(c));
  }

  // var -> (cluster idx, position in cluster)
  std::vector<std::pair<int, int>> where(nv);
  for (size_t ci = 0; ci < cs.size(); ++ci)
    for (size_t vi = 0; vi < cs[ci].vars.size(); ++vi)
      where[static_cast<size_t>(cs[ci].vars[vi])] = {static_cast<int>(ci), static_cast<int>(vi)};

  std::vector<char> atom_vals(rp.nodes.size(), 0);
  Rat total = 0;

  // evaluate all atoms under the current configuration
  auto eval_atoms = [&]() {
    for (size_t i = 0; i < rp.nodes.size(); ++i) {
      const auto& n = rp.nodes[i];
      if (n.kind == Resid::Kind::VarConst) {
        auto [ci, vi] = where[static_cast<size_t>(n.va)];
        const auto& c = cs[static_cast<size_t>(ci)];
        Rat t = n.t;
        if (t < 0) t = 0;
        if (t > 1) t = 1;
        // u in [bs[seg], bs[seg+1]): u < t iff bs[seg+1] <= t
        atom_vals[i] = c.bs[static_cast<size_t>(c.seg[static_cast<size_t>(vi)] + 1)] <= t ? 1 : 0;
      } else if (n.kind == Resid::Kind::VarVar) {
        auto [ca, va] = where[static_cast<size_t>(n.va)];
        auto [cb, vb] = where[static_cast<size_t>(n.vb)];
        if (ca != cb) throw std::logic_error("cross-cluster comparison");
        const auto& c = cs[static_cast<size_t>(ca)];
        int sa = c.seg[static_cast<size_t>(va)], sb = c.seg[static_cast<size_t>(vb)];
        if (sa != sb)
          atom_vals[i] = sa < sb ? 1 : 0;
        else
          atom_vals[i] = c.rank[static_cast<size_t>(va)] < c.rank[static_cast<size_t>(vb)] ? 1 : 0;
      }
    }
  };

  // weight of the current configuration
  auto config_weight = [&]() {
    Rat w = 1;
    for (const auto& c : cs) {
      std::map<int, int> group_size;
      for (size_t vi = 0; vi < c.vars.size(); ++vi) {
        int s = c.seg[vi];
        w *= c.bs[static_cast<size_t>(s + 1)] - c.bs[static_cast<size_t>(s)];
        group_size[s]++;
      }
      for (auto& [s, g] : group_size) w /= Rat(static_cast<long>(factorial_u64(static_cast<unsigned>(g))));
    }
    return w;
  };

  // enumerate per-cluster segment assignments and same-segment rankings
  std::function<void(size_t)> enum_cluster = [&](size_t ci) {
    if (ci == cs.size()) {
      guard.spend(1);
      eval_atoms();
      if (resid_eval(rp, rp.root, atom_vals)) total += config_weight();
      return;
    }
    auto& c = cs[ci];
    size_t t = c.vars.size();
    if (t > 8) throw GuardExceeded("offset solver: cluster larger than 8 variables");
    size_t q = c.bs.size() - 1;
    // segment assignment loop (mixed radix)
    std::vector<int>& seg = c.seg;
    std::fill(seg.begin(), seg.end(), 0);
    for (;;) {
      // rankings: permutations within each same-segment group; enumerate by
      // assigning ranks via permutations of each group's var list
      std::map<int, std::vector<int>> groups;  // segment -> var positions
      for (size_t vi = 0; vi < t; ++vi) groups[seg[vi]].push_back(static_cast<int>(vi));
      std::vector<std::vector<int>> group_list;
      for (auto& [s, g] : groups) group_list.push_back(g);
      // per group, iterate permutations; ranks = position in permutation
      std::function<void(size_t)> perm_rec = [&](size_t gi) {
        if (gi == group_list.size()) {
          enum_cluster(ci + 1);
          return;
        }
        std::vector<int> order = group_list[gi];
        std::sort(order.begin(), order.end());
        do {
          for (size_t r = 0; r < order.size(); ++r) c.rank[static_cast<size_t>(order[r])] = static_cast<int>(r);
          perm_rec(gi + 1);
        } while (std::next_permutation(order.begin(), order.end()));
      };
      perm_rec(0);
      // advance mixed radix
      size_t i = 0;
      while (i < t && seg[i] == static_cast<int>(q) - 1) {
        seg[i] = 0;
        ++i;
      }
      if (i == t) break;
      ++seg[i];
    }
    return;
  };
  enum_cluster(0);
  return total;
}

}  // namespace

// Measure of an instantiated ground condition over E_n; pins fix selected
// coordinates to exact (cell, offset) values and are excluded from both the
// cell enumeration and the offset integration.
Rat measure_condition(const Theon& theon, const PeonExprPtr& cond, const PinMap* pins, Exec mode,
                      GuardCounter* guard_in) {
  GuardCounter local;
  GuardCounter& guard = guard_in ? *guard_in : local;

  // coordinates used by the condition
  std::set<CoordMask> used;
  std::function<void(const PeonExpr&)> scan = [&](const PeonExpr& e) {
    if (e.a) used.insert(e.a);
    if (e.b) used.insert(e.b);
    for (CoordMask m : e.table_coords) used.insert(m);
    for (const auto& k : e.kids) scan(*k);
  };
  scan(*cond);
  std::vector<CoordMask> free_masks;
  for (CoordMask m : used)
    if (!pins || !pins->count(m)) free_masks.push_back(m);
  std::sort(free_masks.begin(), free_masks.end(), coord_order_less);

  int C = theon.grid.size();
  size_t nfree = free_masks.size();
  uint64_t combos = 1;
  for (size_t i = 0; i < nfree; ++i) {
    if (combos > guard.limit) throw GuardExceeded("cell enumeration too large");
    combos *= static_cast<uint64_t>(C);
  }

  auto eval_combo = [&](uint64_t rank, GuardCounter& g) -> Rat {
    std::vector<int> assign(nfree);
    uint64_t r = rank;
    for (size_t i = 0; i < nfree; ++i) {
      assign[i] = static_cast<int>(r % static_cast<uint64_t>(C));
      r /= static_cast<uint64_t>(C);
    }
    Rat w = 1;
    for (size_t i = 0; i < nfree; ++i) w *= theon.grid.cells[static_cast<size_t>(assign[i])].weight;

    KernelCtx ctx{&theon.grid, &free_masks, &assign, pins};
    ResidProblem rp;
    rp.root = partial_eval(*cond, ctx, rp);
    g.spend(1);
    Rat p = solve_resid(rp, g);
    return w * p;
  };

  if (mode == Exec::Serial || combos < 64) {
    Rat acc = 0;
    for (uint64_t i = 0; i < combos; ++i) acc += eval_combo(i, guard);
    return acc;
  }
  // parallel: per-thread guards, budget split is approximate but bounded
  Rat acc = reduce_rat(
      combos,
      [&](uint64_t i) {
        GuardCounter g(guard.limit);
        return eval_combo(i, g);
      },
      mode);
  guard.spend(combos);
  return acc;
}

namespace {

// Instantiate an open formula into a ground condition over E_n: predicate
// atoms with distinct variables become remapped peon expressions, repeated
// variables and inter-variable equalities become constants.
PeonExprPtr instantiate_formula(const FormulaPtr& f, const Theon& theon,
                                const std::map<std::string, int>& var_index) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      int p = theon.theory.language.require(f->pred);
      std::vector<int> alpha;
      std::set<int> seen;
      bool distinct = true;
      for (const auto& v : f->vars) {
        int idx = var_index.at(v);
        if (!seen.insert(idx).second) distinct = false;
        alpha.push_back(idx);
      }
      if (!distinct) return pe_const(false);
      return pe_remap(theon.peon(p), alpha);
    }
    case Formula::Kind::Equal: {
      int a = var_index.at(f->vars[0]), b = var_index.at(f->vars[1]);
      return pe_const(a == b);
    }
    case Formula::Kind::Const:
      return pe_const(f->value);
    case Formula::Kind::Not:
      return pe_not(instantiate_formula(f->kids[0], theon, var_index));
    case Formula::Kind::And:
      return pe_and({instantiate_formula(f->kids[0], theon, var_index),
                     instantiate_formula(f->kids[1], theon, var_index)});
    case Formula::Kind::Or:
      return pe_or({instantiate_formula(f->kids[0], theon, var_index),
                    instantiate_formula(f->kids[1], theon, var_index)});
    case Formula::Kind::Implies:
      return pe_or({pe_not(instantiate_formula(f->kids[0], theon, var_index)),
                    instantiate_formula(f->kids[1], theon, var_index)});
    case Formula::Kind::Iff: {
      PeonExprPtr a = instantiate_formula(f->kids[0], theon, var_index);
      PeonExprPtr b = instantiate_formula(f->kids[1], theon, var_index);
      return pe_or({pe_and({a, b}), pe_and({pe_not(a), pe_not(b)})});
    }
  }
  return pe_const(false);
}

}  // namespace

Rat truth_measure(const FormulaPtr& f, const Theon& theon, Exec mode) {
  std::vector<std::string> vars = formula_vars(f);
  std::map<std::string, int> var_index;
  for (size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = static_cast<int>(i + 1);
  PeonExprPtr cond = instantiate_formula(f, theon, var_index);
  return measure_condition(theon, cond, nullptr, mode, nullptr);
}

Rat exact_density(const Theon& theon, const Structure& m, DKind kind, Exec mode) {
  if (!(m.language == theon.theory.language))
    throw std::invalid_argument("exact_density: language mismatch");
  bool positive = kind == DKind::INJ;
  FormulaPtr diag = diagram(m, theon.theory.language, positive);
  Rat t = truth_measure(diag, theon, mode);
  if (kind == DKind::P) {
    uint64_t aut = aut_count(m);
    return t * Rat(static_cast<long>(factorial_u64(static_cast<unsigned>(m.n)))) /
           Rat(static_cast<long>(aut));
  }
  return t;
}

WeakCheckReport weak_check(const Theon& theon, const Theory& t, Exec mode) {
  WeakCheckReport report;
  for (const auto& ax : t.axioms) {
    Rat mu = truth_measure(ax, theon, mode);
    report.entries.push_back({print_formula(ax), mu, mu == 1});
  }
  return report;
}

namespace {

// Pointwise truth of an open formula at a sampled point of E_n.
bool point_truth(const FormulaPtr& f, const TheonOracle& oracle,
                 const std::map<std::string, int>& var_index,
                 const std::map<CoordMask, Coord>& xi) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      int p = oracle.oracle_theory().language.require(f->pred);
      std::vector<int> alpha;
      std::set<int> seen;
      for (const auto& v : f->vars) {
        int idx = var_index.at(v);
        if (!seen.insert(idx).second) return false;  // repeated variables: empty region
        alpha.push_back(idx);
      }
      int k = static_cast<int>(alpha.size());
      TheonPoint pt;
      for (CoordMask msk = 1; msk < (1u << k); ++msk) {
        pt.masks.push_back(msk);
        pt.coords.push_back(xi.at(remap_mask(msk, alpha)));
      }
      return oracle.member(p, pt);
    }
    case Formula::Kind::Equal:
      return var_index.at(f->vars[0]) == var_index.at(f->vars[1]);
    case Formula::Kind::Const:
      return f->value;
    case Formula::Kind::Not:
      return !point_truth(f->kids[0], oracle, var_index, xi);
    case Formula::Kind::And:
      return point_truth(f->kids[0], oracle, var_index, xi) &&
             point_truth(f->kids[1], oracle, var_index, xi);
    case Formula::Kind::Or:
      return point_truth(f->kids[0], oracle, var_index, xi) ||
             point_truth(f->kids[1], oracle, var_index, xi);
    case Formula::Kind::Implies:
      return !point_truth(f->kids[0], oracle, var_index, xi) ||
             point_truth(f->kids[1], oracle, var_index, xi);
    case Formula::Kind::Iff:
      return point_truth(f->kids[0], oracle, var_index, xi) ==
             point_truth(f->kids[1], oracle, var_index, xi);
  }
  return false;
}

}  // namespace

StrongCheckResult strong_check_sampled(const TheonOracle& oracle, const Theory& t, uint64_t trials,
                                       uint64_t seed) {
  StrongCheckResult res;
  int maxk = 1;
  for (const auto& s : t.language.symbols()) maxk = std::max(maxk, s.arity);
  for (uint64_t trial = 0; trial < trials; ++trial) {
    for (size_t ai = 0; ai < t.axioms.size(); ++ai) {
      const auto& ax = t.axioms[ai];
      std::vector<std::string> vars = formula_vars(ax);
      int n = static_cast<int>(vars.size());
      if (n == 0) continue;
      std::map<std::string, int> var_index;
      for (size_t i = 0; i < vars.size(); ++i) var_index[vars[i]] = static_cast<int>(i + 1);

      uint64_t key = rng::hash(seed, {trial, static_cast<uint64_t>(ai)});
      std::map<CoordMask, Coord> xi;
      bool collision = false;
      for (CoordMask m : coord_index(n, maxk)) xi[m] = draw_coord(oracle.ground(), key, 1, m);
      for (int i = 1; i <= n && !collision; ++i)
        for (int j = i + 1; j <= n && !collision; ++j)
          if (xi[1u << (i - 1)] == xi[1u << (j - 1)]) collision = true;
      if (collision) continue;  // off-diagonal sampling rejects singleton collisions

      if (!point_truth(ax, oracle, var_index, xi)) {
        res.pass = false;
        res.axiom = print_formula(ax);
        res.trial = trial;
        return res;
      }
    }
  }
  return res;
}

Theon interpret_theon(const Translation& i, const Theory& source_theory, const Theon& theon) {
  Theon out;
  out.theory = source_theory;
  out.grid = theon.grid;
  for (int p = 0; p < source_theory.language.size(); ++p) {
    int k = source_theory.language.arity(p);
    std::map<std::string, int> var_index;
    auto xs = canonical_vars(k);
    for (int v = 0; v < k; ++v) var_index[xs[static_cast<size_t>(v)]] = v + 1;
    out.peons.push_back(instantiate_formula(i.image(p), theon, var_index));
  }
  return out;
}

// ---------------------------------------------------------------- file io

namespace {

struct TonLexer {
  const std::string& s;
  size_t pos = 0;
  explicit TonLexer(const std::string& text) : s(text) {}
  void skip() {
    while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '#')) {
      if (s[pos] == '#')
        while (pos < s.size() && s[pos] != '\n') ++pos;
      else
        ++pos;
    }
  }
  bool accept(const std::string& tok) {
    skip();
    if (s.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) throw std::invalid_argument("theon parse: expected '" + tok + "' near " + s.substr(pos, 20));
  }
  std::string ident() {
    skip();
    size_t b = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' ||
                              s[pos] == '(' || s[pos] == ')' || s[pos] == ':'))
      ++pos;
    if (b == pos) throw std::invalid_argument("theon parse: expected identifier");
    return s.substr(b, pos - b);
  }
  std::string number() {  // integer or rational a/b
    skip();
    size_t b = pos;
    while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/' || s[pos] == '-'))
      ++pos;
    if (b == pos) throw std::invalid_argument("theon parse: expected number");
    return s.substr(b, pos - b);
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
};

// Comparison-theon formula grammar over atoms:
//   x{A} < x{B} | x{A} <= q | x{A} < q | frac(x{A}) < frac(x{B})
// with !, &, | and parentheses; A a comma list of vertex indices.
struct CmpFormulaParser {
  TonLexer& lex;
  int m;  // resolution, thresholds are multiples of 1/m

  CoordMask coord() {
    lex.expect("x{");
    CoordMask mask = 0;
    for (;;) {
      std::string num = lex.number();
      mask |= 1u << (std::stoi(num) - 1);
      if (lex.accept(",")) continue;
      break;
    }
    lex.expect("}");
    return mask;
  }

  PeonExprPtr atom() {
    if (lex.accept("(")) {
      PeonExprPtr f = orx();
      lex.expect(")");
      return f;
    }
    if (lex.accept("!")) return pe_not(atom());
    if (lex.accept("frac")) {
      lex.expect("(");
      CoordMask a = coord();
      lex.expect(")");
      lex.expect("<");
      lex.expect("frac");
      lex.expect("(");
      CoordMask b = coord();
      lex.expect(")");
      return pe_frac_cmp(a, b, 0);
    }
    CoordMask a = coord();
    if (lex.accept("<=")) {
      Rat q = rat_parse(lex.number());
      return pe_axis_le(a, q, 0, /*strict=*/false);
    }
    lex.expect("<");
    lex.skip();
    if (lex.pos < lex.s.size() && (std::isdigit(static_cast<unsigned char>(lex.s[lex.pos])))) {
      Rat q = rat_parse(lex.number());
      return pe_axis_le(a, q, 0, /*strict=*/true);
    }
    CoordMask b = coord();
    return pe_axis_cmp(a, b, 0);
  }

  PeonExprPtr andx() {
    std::vector<PeonExprPtr> kids{atom()};
    while (lex.accept("&")) kids.push_back(atom());
    return pe_and(std::move(kids));
  }

  PeonExprPtr orx() {
    std::vector<PeonExprPtr> kids{andx()};
    while (lex.accept("|")) kids.push_back(andx());
    return pe_or(std::move(kids));
  }
};

}  // namespace

Theon parse_theon(const std::string& text) {
  TonLexer lex(text);
  lex.skip();
  bool step = lex.accept("steptheon");
  if (!step) lex.expect("cmptheon");
  lex.expect("{");

  Theon out;
  int cells = 0, m = 0, planar = 0;
  std::vector<Rat> weights;
  std::vector<std::pair<std::string, PeonExprPtr>> peons;
  std::vector<std::pair<std::string, std::vector<std::string>>> step_tables;

  for (;;) {
    lex.skip();
    if (lex.accept("}")) break;
    if (lex.accept("theory=")) {
      out.theory = builtin_theory(lex.ident());
      continue;
    }
    if (lex.accept("cells=")) {
      cells = std::stoi(lex.number());
      continue;
    }
    if (lex.accept("planar=")) {
      planar = std::stoi(lex.number());
      continue;
    }
    if (lex.accept("m=")) {
      m = std::stoi(lex.number());
      continue;
    }
    if (lex.accept("weights=")) {
      for (;;) {
        weights.push_back(rat_parse(lex.number()));
        if (!lex.accept(",")) break;
      }
      continue;
    }
    if (lex.accept("peon")) {
      std::string pred = lex.ident();
      if (step) {
        lex.expect("{");
        std::vector<std::string> tuples;
        while (!lex.accept("}")) {
          lex.expect("(");
          std::string tup;
          for (;;) {
            lex.skip();
            if (lex.accept("*")) {
              tup += "*";
            } else {
              tup += lex.number();
            }
            if (lex.accept(",")) {
              tup += ",";
              continue;
            }
            break;
          }
          lex.expect(")");
          tuples.push_back(tup);
        }
        step_tables.emplace_back(pred, std::move(tuples));
      } else {
        lex.expect(":=");
        CmpFormulaParser fp{lex, m};
        peons.emplace_back(pred, fp.orx());
      }
      continue;
    }
    throw std::invalid_argument("theon parse: unexpected input near " + text.substr(lex.pos, 24));
  }

  if (out.theory.language.size() == 0 && out.theory.name.empty())
    throw std::invalid_argument("theon parse: missing theory");

  if (step) {
    int C = cells > 0 ? cells : planar * planar;
    if (planar > 0) {
      std::vector<std::vector<Rat>> w(static_cast<size_t>(planar),
                                      std::vector<Rat>(static_cast<size_t>(planar)));
      for (int i = 0; i < planar; ++i)
        for (int j = 0; j < planar; ++j)
          w[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              weights.empty() ? rat(1, planar * planar)
                              : weights[static_cast<size_t>(i * planar + j)];
      out.grid = GroundGrid::planar(planar, w);
    } else {
      if (weights.empty()) {
        out.grid = GroundGrid::uniform(C);
      } else {
        out.grid = GroundGrid::uniform(C);
        for (int i = 0; i < C; ++i) out.grid.cells[static_cast<size_t>(i)].weight = weights[static_cast<size_t>(i)];
      }
    }
    out.grid.validate();

    out.peons.resize(static_cast<size_t>(out.theory.language.size()), pe_const(false));
    for (auto& [pred, tuples] : step_tables) {
      int p = out.theory.language.require(pred);
      int k = out.theory.language.arity(p);
      std::vector<CoordMask> coords = coord_index(k, k);
      size_t dims = coords.size();
      size_t size = 1;
      for (size_t i = 0; i < dims; ++i) size *= static_cast<size_t>(C);
      auto bits = std::make_shared<std::vector<char>>(size, 0);
      for (const auto& tup : tuples) {
        // split by commas; '*' expands over all cells of that coordinate
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : tup) {
          if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
          } else
            cur += ch;
        }
        parts.push_back(cur);
        if (parts.size() != dims) throw std::invalid_argument("steptheon: tuple arity mismatch");
        std::function<void(size_t, size_t)> fill = [&](size_t dim, size_t idx) {
          if (dim == dims) {
            (*bits)[idx] = 1;
            return;
          }
          size_t mult = 1;
          for (size_t i = 0; i < dim; ++i) mult *= static_cast<size_t>(C);
          if (parts[dim] == "*") {
            for (int c = 0; c < C; ++c) fill(dim + 1, idx + mult * static_cast<size_t>(c));
          } else {
            fill(dim + 1, idx + mult * static_cast<size_t>(std::stoi(parts[dim])));
          }
        };
        fill(0, 0);
      }
      out.peons[static_cast<size_t>(p)] = pe_table(bits, coords);
    }
  } else {
    out.grid = GroundGrid::uniform(m);
    out.peons.resize(static_cast<size_t>(out.theory.language.size()), pe_const(false));
    for (auto& [pred, expr] : peons) out.peons[static_cast<size_t>(out.theory.language.require(pred))] = expr;
  }
  return out;
}

namespace {

void print_expr(const PeonExpr& e, std::ostream& os) {
  switch (e.kind) {
    case PeonExpr::Kind::Const:
      os << (e.value ? "1 <= 1" : "!(1 <= 1)");
      break;
    case PeonExpr::Kind::Not:
      os << "!(";
      print_expr(*e.kids[0], os);
      os << ")";
      break;
    case PeonExpr::Kind::And:
    case PeonExpr::Kind::Or: {
      const char* op = e.kind == PeonExpr::Kind::And ? " & " : " | ";
      os << "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) os << op;
        print_expr(*e.kids[i], os);
      }
      os << ")";
      break;
    }
    case PeonExpr::Kind::AxisCmp: {
      auto ea = mask_elements(e.a), eb = mask_elements(e.b);
      os << "x{";
      for (size_t i = 0; i < ea.size(); ++i) os << (i ? "," : "") << ea[i];
      os << "} < x{";
      for (size_t i = 0; i < eb.size(); ++i) os << (i ? "," : "") << eb[i];
      os << "}";
      break;
    }
    case PeonExpr::Kind::AxisLE: {
      auto ea = mask_elements(e.a);
      os << "x{";
      for (size_t i = 0; i < ea.size(); ++i) os << (i ? "," : "") << ea[i];
      os << "} " << (e.strict ? "<" : "<=") << " " << rat_str(e.q);
      break;
    }
    case PeonExpr::Kind::FracCmp: {
      auto ea = mask_elements(e.a), eb = mask_elements(e.b);
      os << "frac(x{";
      for (size_t i = 0; i < ea.size(); ++i) os << (i ? "," : "") << ea[i];
      os << "}) < frac(x{";
      for (size_t i = 0; i < eb.size(); ++i) os << (i ? "," : "") << eb[i];
      os << "})";
      break;
    }
    default:
      os << "<table>";
  }
}

}  // namespace

std::string print_theon(const Theon& theon) {
  std::ostringstream os;
  bool all_tables = true;
  for (const auto& p : theon.peons)
    if (p->kind != PeonExpr::Kind::Table && p->kind != PeonExpr::Kind::Const) all_tables = false;
  if (all_tables) {
    os << "steptheon { theory=" << theon.theory.name << " cells=" << theon.grid.size() << " weights=";
    for (int i = 0; i < theon.grid.size(); ++i)
      os << (i ? "," : "") << rat_str(theon.grid.cells[static_cast<size_t>(i)].weight);
    os << "\n";
    for (int p = 0; p < theon.theory.language.size(); ++p) {
      os << "  peon " << theon.theory.language.symbol(p).name << " {";
      const auto& e = *theon.peon(p);
      if (e.kind == PeonExpr::Kind::Table) {
        size_t dims = e.table_coords.size();
        int C = theon.grid.size();
        for (size_t idx = 0; idx < e.table->size(); ++idx) {
          if (!(*e.table)[idx]) continue;
          os << " (";
          size_t r = idx;
          for (size_t d = 0; d < dims; ++d) {
            os << (d ? "," : "") << (r % static_cast<size_t>(C));
            r /= static_cast<size_t>(C);
          }
          os << ")";
        }
      }
      os << " }\n";
    }
    os << "}\n";
  } else {
    os << "cmptheon { theory=" << theon.theory.name << " m=" << theon.grid.size() << "\n";
    for (int p = 0; p < theon.theory.language.size(); ++p) {
      os << "  peon " << theon.theory.language.symbol(p).name << " := ";
      print_expr(*theon.peon(p), os);
      os << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace theon
