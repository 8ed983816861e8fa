#include "theon/models.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace theon {

Structure::Structure(Language lang, int n_) : language(std::move(lang)), n(n_) {
  relations.resize(static_cast<size_t>(language.size()));
}

void Structure::add(const std::string& pred, const Tuple& t) { add(language.require(pred), t); }

void Structure::add(int pred_idx, const Tuple& t) {
  if (static_cast<int>(t.size()) != language.arity(pred_idx))
    throw std::invalid_argument("tuple arity mismatch for " + language.symbol(pred_idx).name);
  for (int v : t)
    if (v < 1 || v > n) throw std::out_of_range("vertex out of range in tuple");
  auto& rel = relations[static_cast<size_t>(pred_idx)];
  auto it = std::lower_bound(rel.begin(), rel.end(), t);
  if (it == rel.end() || *it != t) rel.insert(it, t);
}

bool Structure::has(int pred_idx, const Tuple& t) const {
  const auto& rel = relations[static_cast<size_t>(pred_idx)];
  return std::binary_search(rel.begin(), rel.end(), t);
}

void Structure::normalize() {
  for (auto& rel : relations) {
    std::sort(rel.begin(), rel.end());
    rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  }
}

std::vector<Tuple> Structure::all_tuples(int n, int arity) {
  std::vector<Tuple> out;
  if (n == 0) return out;
  Tuple t(static_cast<size_t>(arity), 1);
  for (;;) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && t[static_cast<size_t>(i)] == n) {
      t[static_cast<size_t>(i)] = 1;
      --i;
    }
    if (i < 0) break;
    ++t[static_cast<size_t>(i)];
  }
  return out;
}

std::vector<Tuple> Structure::distinct_tuples(int n, int arity) {
  std::vector<Tuple> out;
  for (auto& t : all_tuples(n, arity)) {
    std::set<int> s(t.begin(), t.end());
    if (static_cast<int>(s.size()) == arity) out.push_back(t);
  }
  return out;
}

std::string Structure::encode() const {
  std::ostringstream os;
  os << "n=" << n;
  for (int p = 0; p < language.size(); ++p) {
    os << ";" << language.symbol(p).name << ":";
    for (const auto& t : relations[static_cast<size_t>(p)]) {
      os << "(";
      for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ")";
    }
  }
  return os.str();
}

bool Structure::operator==(const Structure& o) const {
  return n == o.n && language == o.language && relations == o.relations;
}

bool Structure::operator<(const Structure& o) const {
  if (n != o.n) return n < o.n;
  return relations < o.relations;
}

static bool sat_rec(const Structure& m, const FormulaPtr& f, const std::map<std::string, int>& sigma) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      Tuple t;
      t.reserve(f->vars.size());
      for (const auto& v : f->vars) {
        auto it = sigma.find(v);
        if (it == sigma.end()) throw std::invalid_argument("assignment misses variable " + v);
        t.push_back(it->second);
      }
      return m.has(m.language.require(f->pred), t);
    }
    case Formula::Kind::Equal:
      return sigma.at(f->vars[0]) == sigma.at(f->vars[1]);
    case Formula::Kind::Const:
      return f->value;
    case Formula::Kind::Not:
      return !sat_rec(m, f->kids[0], sigma);
    case Formula::Kind::And:
      return sat_rec(m, f->kids[0], sigma) && sat_rec(m, f->kids[1], sigma);
    case Formula::Kind::Or:
      return sat_rec(m, f->kids[0], sigma) || sat_rec(m, f->kids[1], sigma);
    case Formula::Kind::Implies:
      return !sat_rec(m, f->kids[0], sigma) || sat_rec(m, f->kids[1], sigma);
    case Formula::Kind::Iff:
      return sat_rec(m, f->kids[0], sigma) == sat_rec(m, f->kids[1], sigma);
  }
  return false;
}

bool satisfies(const Structure& m, const FormulaPtr& f, const std::map<std::string, int>& sigma) {
  return sat_rec(m, f, sigma);
}

bool satisfies(const Structure& m, const FormulaPtr& f, const Assignment& sigma) {
  std::vector<std::string> vars = formula_vars(f);
  if (sigma.size() < vars.size()) throw std::invalid_argument("assignment too short");
  std::map<std::string, int> s;
  for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = sigma[i];
  return sat_rec(m, f, s);
}

bool is_model(const Structure& m, const Theory& t) {
  for (const auto& a : t.axioms) {
    std::vector<std::string> vars = formula_vars(a);
    int k = static_cast<int>(vars.size());
    if (k == 0) {
      std::map<std::string, int> empty;
      if (!sat_rec(m, a, empty)) return false;
      continue;
    }
    if (m.n == 0) continue;  // vacuous
    Assignment sigma(static_cast<size_t>(k), 1);
    std::map<std::string, int> s;
    for (;;) {
      for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = sigma[i];
      if (!sat_rec(m, a, s)) return false;
      int i = k - 1;
      while (i >= 0 && sigma[static_cast<size_t>(i)] == m.n) {
        sigma[static_cast<size_t>(i)] = 1;
        --i;
      }
      if (i < 0) break;
      ++sigma[static_cast<size_t>(i)];
    }
  }
  return true;
}

Structure induced(const Structure& nstr, const std::vector<int>& verts) {
  std::vector<int> sorted = verts;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v : sorted)
    if (v < 1 || v > nstr.n) throw std::out_of_range("induced: vertex out of range");
  std::vector<int> relabel(static_cast<size_t>(nstr.n + 1), 0);
  for (size_t i = 0; i < sorted.size(); ++i) relabel[static_cast<size_t>(sorted[i])] = static_cast<int>(i + 1);

  Structure out(nstr.language, static_cast<int>(sorted.size()));
  for (int p = 0; p < nstr.language.size(); ++p) {
    for (const auto& t : nstr.relations[static_cast<size_t>(p)]) {
      Tuple mapped;
      mapped.reserve(t.size());
      bool inside = true;
      for (int v : t) {
        if (relabel[static_cast<size_t>(v)] == 0) {
          inside = false;
          break;
        }
        mapped.push_back(relabel[static_cast<size_t>(v)]);
      }
      if (inside) out.add(p, mapped);
    }
  }
  return out;
}

namespace {

// Relations of a structure on [n] encoded as a bitset over a fixed slot
// space (per predicate, all tuples in mixed-radix order). Relabeling is a
// slot permutation computed arithmetically per set bit, so the n! sweep
// touches only the occupied slots.
struct SlotSpace {
  int n;
  std::vector<int> base;     // per predicate, first slot index
  std::vector<int> arity;    // per predicate
  int total = 0;
  std::vector<std::pair<int, Tuple>> slot_tuple;  // slot -> (pred, tuple)

  int slot_of(int pred, const Tuple& t) const {
    int idx = 0;
    for (int v : t) idx = idx * n + (v - 1);
    return base[static_cast<size_t>(pred)] + idx;
  }
};

const SlotSpace& slot_space(const Language& lang, int n) {
  static std::mutex mu;
  static std::map<std::pair<std::string, int>, SlotSpace> cache;
  std::string sig;
  for (const auto& s : lang.symbols()) sig += s.name + "/" + std::to_string(s.arity) + ";";
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(sig, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  SlotSpace ss;
  ss.n = n;
  for (int p = 0; p < lang.size(); ++p) {
    ss.base.push_back(ss.total);
    ss.arity.push_back(lang.arity(p));
    int count = 1;
    for (int i = 0; i < lang.arity(p); ++i) count *= n;
    for (const auto& t : Structure::all_tuples(n, lang.arity(p))) ss.slot_tuple.emplace_back(p, t);
    ss.total += count;
  }
  return cache.emplace(key, std::move(ss)).first->second;
}

using Words = std::vector<uint64_t>;

Words encode_bits(const Structure& m, const SlotSpace& ss) {
  Words w(static_cast<size_t>((ss.total + 63) / 64), 0);
  for (int p = 0; p < static_cast<int>(m.relations.size()); ++p)
    for (const auto& t : m.relations[static_cast<size_t>(p)]) {
      int s = ss.slot_of(p, t);
      w[static_cast<size_t>(s >> 6)] |= uint64_t(1) << (s & 63);
    }
  return w;
}

}  // namespace

IsoClass canonical_form(const Structure& m) {
  if (m.n > 9) throw std::invalid_argument("canonical_form: n > 9 not supported");
  IsoClass cls;
  if (m.n == 0) {
    cls.canonical = m;
    cls.aut_count = 1;
    cls.key = m.encode();
    return cls;
  }
  const SlotSpace& ss = slot_space(m.language, m.n);
  Words orig = encode_bits(m, ss);

  // occupied slots of the original, decoded once
  std::vector<std::pair<int, Tuple>> occupied;
  for (int s = 0; s < ss.total; ++s)
    if (orig[static_cast<size_t>(s >> 6)] & (uint64_t(1) << (s & 63)))
      occupied.push_back(ss.slot_tuple[static_cast<size_t>(s)]);

  std::vector<int> p(static_cast<size_t>(m.n));
  std::iota(p.begin(), p.end(), 1);
  Words best;
  bool first = true;
  uint64_t aut = 0;
  Words cur(orig.size());
  Tuple mapped;
  do {
    std::fill(cur.begin(), cur.end(), 0);
    for (const auto& [pred, t] : occupied) {
      mapped.clear();
      for (int v : t) mapped.push_back(p[static_cast<size_t>(v - 1)]);
      int s = ss.slot_of(pred, mapped);
      cur[static_cast<size_t>(s >> 6)] |= uint64_t(1) << (s & 63);
    }
    if (cur == orig) ++aut;
    if (first || cur < best) {
      best = cur;
      first = false;
    }
  } while (std::next_permutation(p.begin(), p.end()));

  cls.canonical = Structure(m.language, m.n);
  for (int s = 0; s < ss.total; ++s)
    if (best[static_cast<size_t>(s >> 6)] & (uint64_t(1) << (s & 63))) {
      const auto& [pred, t] = ss.slot_tuple[static_cast<size_t>(s)];
      cls.canonical.relations[static_cast<size_t>(pred)].push_back(t);
    }
  cls.canonical.normalize();
  cls.aut_count = aut;
  cls.key = cls.canonical.encode();
  return cls;
}

uint64_t aut_count(const Structure& m) { return canonical_form(m).aut_count; }

bool isomorphic(const Structure& a, const Structure& b) {
  if (a.n != b.n || !(a.language == b.language)) return false;
  return canonical_form(a).key == canonical_form(b).key;
}

namespace {

struct Slot {
  int pred;
  Tuple tuple;
};

using SlotIndex = std::map<std::pair<int, Tuple>, int>;

// An axiom instance translated to slot indices: atoms on new-vertex tuples
// become slot references, everything else is folded to a constant.
struct Inst {
  enum class Op : uint8_t { SlotRef, Const, Not, And, Or, Implies, Iff };
  struct Node {
    Op op;
    int a = -1, b = -1;  // child node indices
    int slot = -1;
    bool value = false;
  };
  std::vector<Node> nodes;
  int root = -1;
  std::vector<int> slots;  // sorted, deduplicated
};

// three-valued: 0 false, 1 true, 2 unknown
inline int tv_not(int a) { return a == 2 ? 2 : 1 - a; }
inline int tv_and(int a, int b) {
  if (a == 0 || b == 0) return 0;
  if (a == 1 && b == 1) return 1;
  return 2;
}
inline int tv_or(int a, int b) { return tv_not(tv_and(tv_not(a), tv_not(b))); }
inline int tv_iff(int a, int b) {
  if (a == 2 || b == 2) return 2;
  return a == b ? 1 : 0;
}

int inst_compile(const Formula* f, const std::map<std::string, int>& sigma, const Language& lang,
                 const SlotIndex& slot_index, const Structure& base, Inst& out) {
  auto push = [&](Inst::Node n) {
    out.nodes.push_back(n);
    return static_cast<int>(out.nodes.size() - 1);
  };
  switch (f->kind) {
    case Formula::Kind::Atom: {
      Tuple t;
      for (const auto& v : f->vars) t.push_back(sigma.at(v));
      int pi = lang.require(f->pred);
      auto it = slot_index.find({pi, t});
      if (it == slot_index.end())
        return push({Inst::Op::Const, -1, -1, -1, base.has(pi, t)});
      out.slots.push_back(it->second);
      return push({Inst::Op::SlotRef, -1, -1, it->second, false});
    }
    case Formula::Kind::Equal:
      return push({Inst::Op::Const, -1, -1, -1, sigma.at(f->vars[0]) == sigma.at(f->vars[1])});
    case Formula::Kind::Const:
      return push({Inst::Op::Const, -1, -1, -1, f->value});
    case Formula::Kind::Not: {
      int a = inst_compile(f->kids[0].get(), sigma, lang, slot_index, base, out);
      return push({Inst::Op::Not, a, -1, -1, false});
    }
    default: {
      int a = inst_compile(f->kids[0].get(), sigma, lang, slot_index, base, out);
      int b = inst_compile(f->kids[1].get(), sigma, lang, slot_index, base, out);
      Inst::Op op = f->kind == Formula::Kind::And     ? Inst::Op::And
                    : f->kind == Formula::Kind::Or    ? Inst::Op::Or
                    : f->kind == Formula::Kind::Implies ? Inst::Op::Implies
                                                        : Inst::Op::Iff;
      return push({op, a, b, -1, false});
    }
  }
}

// val entries: 0 false, 1 true, 2 undecided
int inst_eval(const Inst& inst, int node, const std::vector<char>& val) {
  const auto& n = inst.nodes[static_cast<size_t>(node)];
  switch (n.op) {
    case Inst::Op::SlotRef:
      return val[static_cast<size_t>(n.slot)];
    case Inst::Op::Const:
      return n.value ? 1 : 0;
    case Inst::Op::Not:
      return tv_not(inst_eval(inst, n.a, val));
    case Inst::Op::And:
      return tv_and(inst_eval(inst, n.a, val), inst_eval(inst, n.b, val));
    case Inst::Op::Or:
      return tv_or(inst_eval(inst, n.a, val), inst_eval(inst, n.b, val));
    case Inst::Op::Implies:
      return tv_or(tv_not(inst_eval(inst, n.a, val)), inst_eval(inst, n.b, val));
    case Inst::Op::Iff:
      return tv_iff(inst_eval(inst, n.a, val), inst_eval(inst, n.b, val));
  }
  return 2;
}

// Shared over threads; spending never throws, callers poll exceeded().
struct SharedGuard {
  std::atomic<uint64_t> used{0};
  uint64_t limit;
  explicit SharedGuard(uint64_t lim) : limit(lim) {}
  bool spend(uint64_t n) { return used.fetch_add(n, std::memory_order_relaxed) + n <= limit; }
  bool exceeded() const { return used.load(std::memory_order_relaxed) > limit; }
};

// Emits every one-vertex extension of `base` (a model on n-1 vertices) to
// size n that survives axiom pruning. Only assignments touching the new
// vertex need checking: the rest were validated for the parent and relations
// on old vertices are unchanged.
void extensions(const Theory& t, const Structure& base, int n, SharedGuard& guard,
                const std::function<void(Structure&&)>& emit) {
  // Slots cover ALL tuples (repeated entries included) so that the
  // enumeration is exact for non-canonical theories; canonical theories'
  // axioms prune the repeated-entry slots immediately.
  const Language& lang = t.language;
  std::vector<Slot> slots;
  SlotIndex slot_index;
  for (int p = 0; p < lang.size(); ++p) {
    for (const auto& tup : Structure::all_tuples(n, lang.arity(p))) {
      if (std::find(tup.begin(), tup.end(), n) == tup.end()) continue;
      slot_index[{p, tup}] = static_cast<int>(slots.size());
      slots.push_back({p, tup});
    }
  }

  // Compile all axiom instances whose image touches vertex n; watch every
  // instance at each of its slots so it prunes as soon as Kleene evaluation
  // settles on false.
  std::vector<Inst> insts;
  std::vector<std::vector<int>> watch(slots.size());
  for (const auto& ax : t.axioms) {
    std::vector<std::string> vars = formula_vars(ax);
    int k = static_cast<int>(vars.size());
    if (k == 0) continue;
    Assignment sigma(static_cast<size_t>(k), 1);
    std::map<std::string, int> s;
    for (;;) {
      if (std::find(sigma.begin(), sigma.end(), n) != sigma.end()) {
        s.clear();
        for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = sigma[i];
        Inst inst;
        inst.root = inst_compile(ax.get(), s, lang, slot_index, base, inst);
        std::sort(inst.slots.begin(), inst.slots.end());
        inst.slots.erase(std::unique(inst.slots.begin(), inst.slots.end()), inst.slots.end());
        if (inst.slots.empty()) {
          std::vector<char> noval;
          if (inst_eval(inst, inst.root, noval) == 0) return;  // no extension possible
        } else {
          int id = static_cast<int>(insts.size());
          for (int sl : inst.slots) watch[static_cast<size_t>(sl)].push_back(id);
          insts.push_back(std::move(inst));
        }
      }
      int i = k - 1;
      while (i >= 0 && sigma[static_cast<size_t>(i)] == n) {
        sigma[static_cast<size_t>(i)] = 1;
        --i;
      }
      if (i < 0) break;
      ++sigma[static_cast<size_t>(i)];
    }
  }

  std::vector<char> val(slots.size(), 2);
  std::function<void(size_t)> rec = [&](size_t depth) {
    if (!guard.spend(1)) return;
    if (depth == slots.size()) {
      Structure ext(lang, n);
      for (int p = 0; p < lang.size(); ++p) {
        ext.relations[static_cast<size_t>(p)] = base.relations[static_cast<size_t>(p)];
        for (size_t i = 0; i < slots.size(); ++i)
          if (val[i] == 1 && slots[i].pred == p) ext.relations[static_cast<size_t>(p)].push_back(slots[i].tuple);
        std::sort(ext.relations[static_cast<size_t>(p)].begin(), ext.relations[static_cast<size_t>(p)].end());
      }
      emit(std::move(ext));
      return;
    }
    for (char b : {char(0), char(1)}) {
      val[depth] = b;
      bool ok = true;
      for (int id : watch[depth]) {
        if (inst_eval(insts[static_cast<size_t>(id)], insts[static_cast<size_t>(id)].root, val) == 0) {
          ok = false;
          break;
        }
      }
      if (ok) rec(depth + 1);
    }
    val[depth] = 2;
  };
  rec(0);
}

}  // namespace

std::vector<IsoClass> enumerate_models(const Theory& t, int n, GuardCounter* guard_in) {
  SharedGuard guard(guard_in ? guard_in->limit : guard_limit());

  std::vector<Structure> level;
  Structure empty(t.language, 0);
  if (is_model(empty, t)) level.push_back(empty);

  for (int sz = 1; sz <= n && !level.empty(); ++sz) {
    std::map<std::string, Structure> next;
#ifdef _OPENMP
    if (exec_mode() == Exec::Parallel && level.size() > 4) {
      std::vector<std::map<std::string, Structure>> parts(level.size());
#pragma omp parallel for schedule(dynamic)
      for (int64_t i = 0; i < static_cast<int64_t>(level.size()); ++i) {
        if (guard.exceeded()) continue;
        extensions(t, level[static_cast<size_t>(i)], sz, guard, [&](Structure&& ext) {
          IsoClass cls = canonical_form(ext);
          parts[static_cast<size_t>(i)].emplace(cls.key, std::move(cls.canonical));
        });
      }
      for (auto& part : parts)
        for (auto& kv : part) next.emplace(kv.first, std::move(kv.second));
    } else
#endif
    {
      for (const auto& base : level) {
        extensions(t, base, sz, guard, [&](Structure&& ext) {
          IsoClass cls = canonical_form(ext);
          next.emplace(cls.key, std::move(cls.canonical));
        });
      }
    }
    level.clear();
    for (auto& kv : next) level.push_back(std::move(kv.second));
  }
  if (guard.exceeded()) throw GuardExceeded("enumerate_models: guard exceeded");
  if (guard_in) guard_in->spend(guard.used.load());

  std::vector<IsoClass> out;
  out.reserve(level.size());
  for (const auto& m : level) out.push_back(canonical_form(m));
  std::sort(out.begin(), out.end(), [](const IsoClass& a, const IsoClass& b) { return a.key < b.key; });
  return out;
}

}  // namespace theon
