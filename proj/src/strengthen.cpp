#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "theon/theons.hpp"

namespace theon {

namespace {

constexpr CoordMask M1 = 0b001, M2 = 0b010;

bool cell_level_only(const PeonExpr& e) {
  switch (e.kind) {
    case PeonExpr::Kind::Const:
    case PeonExpr::Kind::CellIn:
    case PeonExpr::Kind::Table:
      return true;
    case PeonExpr::Kind::Not:
    case PeonExpr::Kind::And:
    case PeonExpr::Kind::Or:
      for (const auto& k : e.kids)
        if (!cell_level_only(*k)) return false;
      return true;
    default:
      return false;
  }
}

bool uniform_1d(const GroundGrid& g) {
  int m = g.size();
  for (int c = 0; c < m; ++c) {
    const auto& cell = g.cells[static_cast<size_t>(c)];
    if (cell.weight != rat(1, m)) return false;
    if (cell.lo[0] != rat(c, m) || cell.hi[0] != rat(c + 1, m)) return false;
    if (cell.lo[1] != 0 || cell.hi[1] != 1) return false;
  }
  return true;
}

// Density points of a finite union of grid boxes under the boundary
// normalized l_inf rule: a point belongs iff every box whose closure
// contains it is in the set (dually for the positive mode).
class HornOracle : public TheonOracle {
 public:
  HornOracle(Theon theon, bool positive) : theon_(std::move(theon)), positive_(positive) {}

  bool member(int pred, const TheonPoint& point) const override {
    // per coordinate: cells whose closure contains the position
    std::vector<std::vector<int>> touching(point.masks.size());
    for (size_t i = 0; i < point.masks.size(); ++i) {
      const Coord& c = point.coords[i];
      touching[i].push_back(c.cell);
      if (c.off[0] == 0 && c.cell > 0) touching[i].push_back(c.cell - 1);
    }
    // evaluate the cell-level peon on every touching combination
    std::vector<int> combo(point.masks.size(), 0);
    bool all = true, any = false;
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == combo.size()) {
        TheonPoint q;
        q.masks = point.masks;
        q.coords.resize(point.coords.size());
        for (size_t j = 0; j < combo.size(); ++j) {
          Coord cc;
          cc.cell = touching[j][static_cast<size_t>(combo[j])];
          cc.off[0] = 1;  // interior representative; cell-level peons ignore offsets
          q.coords[j] = cc;
        }
        bool v = eval_point(*theon_.peon(pred), theon_.grid, q);
        all = all && v;
        any = any || v;
        return;
      }
      for (size_t t = 0; t < touching[i].size(); ++t) {
        combo[i] = static_cast<int>(t);
        rec(i + 1);
      }
    };
    rec(0);
    return positive_ ? any : all;
  }

  const GroundGrid& ground() const override { return theon_.grid; }
  const Theory& oracle_theory() const override { return theon_.theory; }

 private:
  Theon theon_;
  bool positive_;
};

}  // namespace

std::unique_ptr<TheonOracle> strengthen_horn(const Theon& st, bool positive) {
  if (!uniform_1d(st.grid)) throw std::invalid_argument("strengthen_horn: uniform 1-D grid required");
  for (const auto& p : st.peons)
    if (!cell_level_only(*p)) throw std::invalid_argument("strengthen_horn: step (cell table) peons required");
  return std::make_unique<HornOracle>(st, positive);
}

namespace {

// for validation: collect offset-atom shapes of the lt peon
void validate_linorder_expr(const PeonExpr& e) {
  switch (e.kind) {
    case PeonExpr::Kind::Const:
    case PeonExpr::Kind::CellIn:
    case PeonExpr::Kind::Table:
      return;
    case PeonExpr::Kind::Not:
    case PeonExpr::Kind::And:
    case PeonExpr::Kind::Or:
      for (const auto& k : e.kids) validate_linorder_expr(*k);
      return;
    case PeonExpr::Kind::AxisCmp:
    case PeonExpr::Kind::AxisEq:
    case PeonExpr::Kind::FracCmp: {
      bool singles = (e.a == M1 || e.a == M2) && (e.b == M1 || e.b == M2);
      if (!singles)
        throw std::invalid_argument("strengthen_linorder: offset comparisons must involve the two vertices only");
      return;
    }
    case PeonExpr::Kind::AxisLE:
      if (e.a == M1 || e.a == M2)
        throw std::invalid_argument("strengthen_linorder: thresholds on vertex coordinates are unsupported");
      return;
  }
}

PeonExprPtr antisymmetrize(const PeonExprPtr& n) {
  PeonExprPtr ns = pe_remap(n, {2, 1});  // swap the two vertices
  // (N minus N.sigma) union (outside the symmetric difference, ordered by raw position)
  PeonExprPtr agree = pe_or({pe_and({n, ns}), pe_and({pe_not(n), pe_not(ns)})});
  return pe_or({pe_and({n, pe_not(ns)}), pe_and({agree, pe_axis_cmp(M1, M2, 0)})});
}

struct LinOrderPipeline : TheonOracle {
  Theon base;            // grid + theory of the input
  PeonExprPtr strong;    // stage-2 output, antisymmetrized (E2*-measurable)
  PeonExprPtr trans_expr;    // transitivity over {1},{2},{3}
  PeonExprPtr witness_expr;  // (x1, y) in N and (y, x2) in N with y -> {3}
  int lt_pred;
  mutable std::vector<char> cell_good;  // 0 unknown, 1 good everywhere, 2 mixed
  mutable std::map<std::tuple<int, uint64_t, uint64_t>, bool> good_cache;

  void compile() {
    PeonExprPtr n12 = pe_remap(strong, {1, 2});
    PeonExprPtr n23 = pe_remap(strong, {2, 3});
    PeonExprPtr n13 = pe_remap(strong, {1, 3});
    trans_expr = pe_or({pe_not(pe_and({n12, n23})), n13});
    witness_expr = pe_and({pe_remap(strong, {1, 3}), pe_remap(strong, {3, 2})});
    cell_good.assign(static_cast<size_t>(base.grid.size()), 0);
  }

  bool good_exact(int cell, const Rat& o0, const Rat& o1) const {
    // lambda(T(transitivity, N)_i(x)) == 1 for all three section positions
    for (int pos = 1; pos <= 3; ++pos) {
      PinMap pins;
      PinValue pv;
      pv.cell = cell;
      pv.off[0] = o0;
      pv.off[1] = o1;
      pins[1u << (pos - 1)] = pv;
      if (measure_condition(base, trans_expr, &pins, Exec::Serial, nullptr) != 1) return false;
    }
    return true;
  }

  bool good(const Coord& x) const {
    // The section measures are polynomials of degree at most 2 in the pinned
    // offset on (0,1) (one pinned variable, two free ones, no thresholds in
    // the expression class), so agreement with 1 at four interior points
    // forces agreement on the whole open cell.
    if (cell_good[static_cast<size_t>(x.cell)] == 0) {
      bool all = true;
      for (long k = 1; k <= 4; ++k) all = all && good_exact(x.cell, rat(k, 5), rat(k, 5));
      cell_good[static_cast<size_t>(x.cell)] = all ? 1 : 2;
    }
    if (cell_good[static_cast<size_t>(x.cell)] == 1 && x.off[0] != 0 && x.off[1] != 0) return true;
    auto key = std::make_tuple(x.cell, x.off[0], x.off[1]);
    auto it = good_cache.find(key);
    if (it != good_cache.end()) return it->second;
    bool ok = good_exact(x.cell, dyadic64(x.off[0]), dyadic64(x.off[1]));
    if (good_cache.size() > 100000) good_cache.clear();
    good_cache.emplace(key, ok);
    return ok;
  }

  Rat witness_measure(const Coord& x1, const Coord& x2) const {
    PinMap pins;
    PinValue p1, p2;
    p1.cell = x1.cell;
    p1.off[0] = dyadic64(x1.off[0]);
    p1.off[1] = dyadic64(x1.off[1]);
    p2.cell = x2.cell;
    p2.off[0] = dyadic64(x2.off[0]);
    p2.off[1] = dyadic64(x2.off[1]);
    pins[M1] = p1;
    pins[M2] = p2;
    return measure_condition(base, witness_expr, &pins, Exec::Serial, nullptr);
  }

  Rat raw_pos(const Coord& c) const {
    const auto& cell = base.grid.cells[static_cast<size_t>(c.cell)];
    return cell.lo[0] + dyadic64(c.off[0]) * (cell.hi[0] - cell.lo[0]);
  }

  bool member(int pred, const TheonPoint& point) const override {
    if (pred != lt_pred) throw std::invalid_argument("linorder oracle: unknown predicate");
    const Coord& x1 = point.at(M1);
    const Coord& x2 = point.at(M2);
    bool g1 = good(x1), g2 = good(x2);
    if (g1 && g2) {
      if (witness_measure(x1, x2) > 0) return true;
      if (witness_measure(x2, x1) > 0) return false;
      return raw_pos(x1) < raw_pos(x2);
    }
    if (!g1 && g2) return true;
    if (g1 && !g2) return false;
    return raw_pos(x1) < raw_pos(x2);
  }

  const GroundGrid& ground() const override { return base.grid; }
  const Theory& oracle_theory() const override { return base.theory; }
};

}  // namespace

std::unique_ptr<TheonOracle> strengthen_linorder(const Theon& st, Rat* bad_pair_measure) {
  if (st.theory.language.size() != 1 || st.theory.language.arity(0) != 2)
    throw std::invalid_argument("strengthen_linorder: single binary predicate expected");
  validate_linorder_expr(*st.peon(0));
  if (!weak_check(st, st.theory).pass())
    throw std::invalid_argument("strengthen_linorder: input is not a weak linear-order limit");

  // stage 1: antisymmetrize
  PeonExprPtr na = antisymmetrize(st.peon(0));

  // stage 2: classify sections A(x,y) per (cell pair, offset orientation) as
  // vanishing / full / bad, exactly
  int C = st.grid.size();
  Rat bad = 0;
  std::vector<PeonExprPtr> branches;
  for (int c1 = 0; c1 < C; ++c1) {
    for (int c2 = 0; c2 < C; ++c2) {
      for (int orient = 0; orient < 2; ++orient) {
        PinMap pins;
        PinValue p1, p2;
        p1.cell = c1;
        p1.off[0] = orient == 0 ? rat(1, 3) : rat(2, 3);
        p1.off[1] = p1.off[0];
        p2.cell = c2;
        p2.off[0] = orient == 0 ? rat(2, 3) : rat(1, 3);
        p2.off[1] = p2.off[0];
        pins[M1] = p1;
        pins[M2] = p2;
        Rat mu = measure_condition(st, na, &pins, Exec::Serial, nullptr);
        if (mu == 1) {
          std::vector<char> s1(static_cast<size_t>(C), 0), s2(static_cast<size_t>(C), 0);
          s1[static_cast<size_t>(c1)] = 1;
          s2[static_cast<size_t>(c2)] = 1;
          PeonExprPtr ord = orient == 0 ? pe_frac_cmp(M1, M2, 0) : pe_frac_cmp(M2, M1, 0);
          branches.push_back(pe_and({pe_cell_in(M1, s1), pe_cell_in(M2, s2), ord}));
        } else if (mu != 0) {
          bad += st.grid.cells[static_cast<size_t>(c1)].weight *
                 st.grid.cells[static_cast<size_t>(c2)].weight * rat(1, 2);
        }
      }
    }
  }
  if (bad_pair_measure) *bad_pair_measure = bad;

  // orientation via raw offsets is only sound when positions and offsets
  // order the same way within equal cells; re-antisymmetrize to restore the
  // tournament property exactly
  PeonExprPtr nb = pe_or(std::move(branches));
  PeonExprPtr nc = antisymmetrize(nb);

  auto pipe = std::make_unique<LinOrderPipeline>();
  pipe->base = st;
  pipe->strong = nc;
  pipe->lt_pred = 0;
  pipe->compile();
  return pipe;
}

}  // namespace theon
