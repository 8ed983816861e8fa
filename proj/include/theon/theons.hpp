#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "theon/exec.hpp"
#include "theon/logic.hpp"
#include "theon/models.hpp"
#include "theon/rat.hpp"

namespace theon {

// Coordinate subsets of [n] are bitmasks (bit i-1 = vertex i). The Def-EV
// order sorts by size, ties by ascending sorted element tuple; for k=3 that
// is {1},{2},{3},{1,2},{1,3},{2,3},{1,2,3}.
using CoordMask = uint32_t;

std::vector<CoordMask> coord_index(int n, int max_size);  // Def-EV order, sizes 1..max_size
std::vector<int> mask_elements(CoordMask a);              // ascending, 1-based
bool coord_order_less(CoordMask a, CoordMask b);          // Def-EV precedence

// One ground cell: a weight plus per-axis intervals. 1-D grids leave axis 1
// at [0,1]; planar grids use genuine sub-squares of [0,1]^2.
struct GroundCell {
  Rat weight;
  Rat lo[2] = {Rat(0), Rat(0)};
  Rat hi[2] = {Rat(1), Rat(1)};
};

struct GroundGrid {
  std::vector<GroundCell> cells;
  // comonotone grids couple the two axes within each cell (one shared
  // uniform offset); permuton grids use this so that diagonal weights mean
  // diagonal mass
  bool comonotone = false;
  int size() const { return static_cast<int>(cells.size()); }
  void validate() const;  // positive weights summing to 1

  static GroundGrid uniform(int m);                                  // m cells of width 1/m on axis 0
  static GroundGrid planar(int g, const std::vector<std::vector<Rat>>& w);  // cell (i,j) -> index i*g+j
};

// A sampled or queried position of one coordinate: the cell plus dyadic
// offsets within the cell per axis.
struct Coord {
  int cell = 0;
  uint64_t off[2] = {0, 0};
  bool operator==(const Coord& o) const {
    return cell == o.cell && off[0] == o.off[0] && off[1] == o.off[1];
  }
};

// A point of E_V restricted to the coordinates a peon can read.
struct TheonPoint {
  std::vector<CoordMask> masks;  // Def-EV order
  std::vector<Coord> coords;
  const Coord& at(CoordMask m) const;
};

// Peon expressions: boolean combinations of cell and offset atoms over
// named coordinate subsets. Used both for peon definitions (masks over [k])
// and for instantiated ground conditions (masks over [n]).
struct PeonExpr;
using PeonExprPtr = std::shared_ptr<const PeonExpr>;

struct PeonExpr {
  enum class Kind {
    Const,     // value
    Not,       // kids[0]
    And, Or,   // kids
    CellIn,    // coord a in cell set `cells`
    Table,     // dense bit table over `table_coords` (mixed radix, first coord least significant)
    AxisCmp,   // pos_axis(a) < pos_axis(b)
    AxisEq,    // pos_axis(a) == pos_axis(b)   (measure zero; point semantics exact)
    AxisLE,    // pos_axis(a) <= / < q
    FracCmp,   // off_axis(a) < off_axis(b)    (within-cell offsets)
  };
  Kind kind;
  bool value = false;
  std::vector<PeonExprPtr> kids;
  CoordMask a = 0, b = 0;
  int axis = 0;
  int axis_b = -1;                     // AxisCmp/AxisEq: axis of b (defaults to axis)
  bool strict = true;                  // AxisLE
  Rat q;                               // AxisLE threshold
  std::vector<char> cells;             // CellIn membership bitmap
  std::shared_ptr<std::vector<char>> table;  // Table bits
  std::vector<CoordMask> table_coords;       // Table coords, Def-EV order
};

PeonExprPtr pe_const(bool v);
PeonExprPtr pe_not(PeonExprPtr a);
PeonExprPtr pe_and(std::vector<PeonExprPtr> kids);
PeonExprPtr pe_or(std::vector<PeonExprPtr> kids);
PeonExprPtr pe_cell_in(CoordMask a, std::vector<char> cells);
PeonExprPtr pe_table(std::shared_ptr<std::vector<char>> bits, std::vector<CoordMask> coords);
PeonExprPtr pe_axis_cmp(CoordMask a, CoordMask b, int axis);
PeonExprPtr pe_axis_cmp2(CoordMask a, int axis_a, CoordMask b, int axis_b);
PeonExprPtr pe_axis_eq(CoordMask a, CoordMask b, int axis);
PeonExprPtr pe_axis_le(CoordMask a, Rat q, int axis, bool strict);
PeonExprPtr pe_frac_cmp(CoordMask a, CoordMask b, int axis);

// Remap every coordinate mask through an injection [k] -> [n].
PeonExprPtr pe_remap(const PeonExprPtr& e, const std::vector<int>& alpha);

// Limit object: ground grid plus one peon expression per predicate symbol.
// Step theons use Table peons; comparison theons use formula peons over a
// uniform grid; the two file formats load into this one representation.
struct Theon {
  Theory theory;
  GroundGrid grid;
  std::vector<PeonExprPtr> peons;  // per symbol

  const PeonExprPtr& peon(int pred) const { return peons[static_cast<size_t>(pred)]; }
  int max_arity() const;
};

// Membership interface: deterministic on off-diagonal points. Implemented by
// Theon itself (pointwise semantics) and by the strengthened oracles.
class TheonOracle {
 public:
  virtual ~TheonOracle() = default;
  virtual bool member(int pred, const TheonPoint& point) const = 0;
  virtual const GroundGrid& ground() const = 0;
  virtual const Theory& oracle_theory() const = 0;
};

// Pointwise view of a theon (exact dyadic evaluation of its peon exprs).
class TheonPointOracle : public TheonOracle {
 public:
  explicit TheonPointOracle(Theon theon) : theon_(std::move(theon)) {}
  bool member(int pred, const TheonPoint& point) const override;
  const GroundGrid& ground() const override { return theon_.grid; }
  const Theory& oracle_theory() const override { return theon_.theory; }
  const Theon& theon() const { return theon_; }

 private:
  Theon theon_;
};

bool eval_point(const PeonExpr& e, const GroundGrid& grid, const TheonPoint& point);

// Pinned coordinates: fixed cell plus exact rational offsets per axis,
// excluded from cell enumeration and offset integration.
struct PinValue {
  int cell = 0;
  Rat off[2] = {Rat(0), Rat(0)};
};
using PinMap = std::map<CoordMask, PinValue>;

// Exact measure of an instantiated ground condition over the free
// coordinates, integrating offsets by breakpoint segments and order
// refinement (jointly ordered groups are capped at 8 variables).
Rat measure_condition(const Theon& theon, const PeonExprPtr& cond, const PinMap* pins = nullptr,
                      Exec mode = exec_mode(), GuardCounter* guard = nullptr);

// Exchangeable-array sampling: one ground draw per non-empty subset of [n]
// (sizes up to the max arity), then alpha in R_P iff the projected point is
// in the peon, over all injections alpha.
Structure sample_model(const TheonOracle& oracle, int n, uint64_t seed);
Structure sample_model(const Theon& theon, int n, uint64_t seed);

// Exact Lebesgue measure of the truth region T(F, N) of an open formula.
Rat truth_measure(const FormulaPtr& f, const Theon& theon, Exec mode = exec_mode());

enum class DKind { P, IND, INJ };
Rat exact_density(const Theon& theon, const Structure& m, DKind kind, Exec mode = exec_mode());

struct WeakCheckEntry {
  std::string axiom;
  Rat measure;
  bool pass;
};
struct WeakCheckReport {
  std::vector<WeakCheckEntry> entries;
  bool pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};
WeakCheckReport weak_check(const Theon& theon, const Theory& t, Exec mode = exec_mode());

struct StrongCheckResult {
  bool pass = true;
  std::string axiom;
  uint64_t trial = 0;
};
// Falsification only: samples off-diagonal points and evaluates each axiom's
// truth region pointwise.
StrongCheckResult strong_check_sampled(const TheonOracle& oracle, const Theory& t, uint64_t trials,
                                       uint64_t seed);

struct Translation;  // interpret.hpp

// Truth-region peons of the translated predicates (interpretation action on
// theons); output lives on the same grid and stays in the same expr class.
Theon interpret_theon(const Translation& i, const Theory& source_theory, const Theon& theon);

// ---- strengthenings ----

// Lebesgue-density-point strengthening for almost Horn theories (caller
// asserts the theory is almost Horn); positive=true applies the dual rule.
// Requires Table peons over a uniform 1-D grid.
std::unique_ptr<TheonOracle> strengthen_horn(const Theon& st, bool positive = false);

// Constructive linear-order strengthening; exact cell computations, returns
// a strong pairwise-comparison oracle. Also exposes the exact bad-pair
// measure of the antisymmetrized input.
std::unique_ptr<TheonOracle> strengthen_linorder(const Theon& st, Rat* bad_pair_measure = nullptr);

// ---- permutons / posetons ----

struct PlanarGrid {
  int g = 0;
  std::vector<std::vector<Rat>> w;  // w[i][j], axis-0 index i, axis-1 index j
  bool operator==(const PlanarGrid& o) const { return g == o.g && w == o.w; }
};

// Step kernel W on pairs of planar cells (poseton data).
struct StepKernel {
  int g = 0;
  std::vector<std::vector<Rat>> w;  // w[cell][cell'], cells indexed i*g+j
};

Theon standard_permuton(const PlanarGrid& mu);
PlanarGrid permuton_extract(const Theon& perm_theon);

Theon poseton_from_w(const StepKernel& w);
StepKernel poseton_extract(const Theon& ext_order_theon);

// Standard interval-graph theon over a ground grid of interval endpoint
// pairs (axis 0 the left endpoint, axis 1 the right endpoint; the right
// endpoint must dominate the left one on every cell).
Theon interval_theon(const GroundGrid& grid);

// ---- builtins ----
// constant_graphon(p), hypergraphon_Hp(p), hypergraphon_Hprime(p), turan(l),
// linorder_std, linorder_mod(k), standard_permuton(g: identity), poseton
// builders. Parameters are rationals or small integers in string form.
Theon builtin_theon(const std::string& name, const std::vector<std::string>& params);
Theon builtin_theon(const std::string& spec);  // "builtin:name:p1:p2" or "name:p1"

// ---- file formats ----
// steptheon { theory=Graph cells=2 [weights=1/2,1/2] peon E { (0,0,*) ... } }
// cmptheon  { theory=LinOrder m=2 peon lt := frac(x{1}) < frac(x{2}) }
Theon parse_theon(const std::string& text);
std::string print_theon(const Theon& theon);

}  // namespace theon
