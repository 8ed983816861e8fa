#include <set>

#include "theon/logic.hpp"
#include "theon/models.hpp"

namespace theon {

// Validity of a universal formula with n variables reduces to models of size
// <= n via the induced-submodel property of universal theories.
bool entails_finite(const Theory& t, const FormulaPtr& f) {
  std::vector<std::string> vars = formula_vars(f);
  int nv = static_cast<int>(vars.size());
  for (int sz = 0; sz <= nv; ++sz) {
    for (const auto& cls : enumerate_models(t, sz)) {
      const Structure& m = cls.canonical;
      if (nv == 0) {
        std::map<std::string, int> empty;
        if (!satisfies(m, f, empty)) return false;
        continue;
      }
      if (m.n == 0) continue;
      Assignment sigma(static_cast<size_t>(nv), 1);
      std::map<std::string, int> s;
      for (;;) {
        for (size_t i = 0; i < vars.size(); ++i) s[vars[i]] = sigma[i];
        if (!satisfies(m, f, s)) return false;
        int i = nv - 1;
        while (i >= 0 && sigma[static_cast<size_t>(i)] == m.n) {
          sigma[static_cast<size_t>(i)] = 1;
          --i;
        }
        if (i < 0) break;
        ++sigma[static_cast<size_t>(i)];
      }
    }
  }
  return true;
}

CanonicityReport check_canonical(const Theory& t) {
  CanonicityReport report;
  for (int p = 0; p < t.language.size(); ++p) {
    const auto& sym = t.language.symbol(p);
    std::vector<std::string> xs;
    for (int i = 1; i <= sym.arity; ++i) xs.push_back("x" + std::to_string(i));
    for (int i = 0; i < sym.arity; ++i)
      for (int j = i + 1; j < sym.arity; ++j) {
        FormulaPtr inst = f_implies(f_equal(xs[static_cast<size_t>(i)], xs[static_cast<size_t>(j)]),
                                    f_not(f_atom(sym.name, xs)));
        report.entries.push_back({sym.name, i + 1, j + 1, entails_finite(t, inst)});
      }
  }
  return report;
}

FormulaPtr diagram(const Structure& m, const Language& lang, bool positive) {
  std::vector<FormulaPtr> conj;
  std::vector<std::string> xs;
  for (int i = 1; i <= m.n; ++i) xs.push_back("x" + std::to_string(i));
  for (int i = 0; i < m.n; ++i)
    for (int j = i + 1; j < m.n; ++j)
      conj.push_back(f_not(f_equal(xs[static_cast<size_t>(i)], xs[static_cast<size_t>(j)])));
  for (int p = 0; p < lang.size(); ++p) {
    for (const auto& t : Structure::distinct_tuples(m.n, lang.arity(p))) {
      std::vector<std::string> args;
      for (int v : t) args.push_back(xs[static_cast<size_t>(v - 1)]);
      if (m.has(p, t))
        conj.push_back(f_atom(lang.symbol(p).name, args));
      else if (!positive)
        conj.push_back(f_not(f_atom(lang.symbol(p).name, args)));
    }
  }
  return f_and_all(conj);
}

Theory forbid(const Theory& t, const std::vector<Structure>& ms, bool induced) {
  Theory out = t;
  for (const auto& m : ms) {
    if (!(m.language == t.language)) throw std::invalid_argument("forbid: structure over wrong language");
    out.axioms.push_back(f_not(diagram(m, t.language, /*positive=*/!induced)));
  }
  out.name = t.name + "Forb";
  out.validate();
  return out;
}

}  // namespace theon
