#include "theon/interpret.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "theon/builtins.hpp"

namespace theon {

std::vector<std::string> canonical_vars(int k) {
  std::vector<std::string> xs;
  for (int i = 1; i <= k; ++i) xs.push_back("x" + std::to_string(i));
  return xs;
}

void Translation::validate() const {
  if (static_cast<int>(images.size()) != source.size())
    throw std::invalid_argument("translation: image count mismatch");
  for (int p = 0; p < source.size(); ++p) {
    const auto& img = images[static_cast<size_t>(p)];
    std::set<std::string> allowed;
    for (const auto& v : canonical_vars(source.arity(p))) allowed.insert(v);
    for (const auto& v : formula_vars(img))
      if (!allowed.count(v))
        throw std::invalid_argument("translation image of " + source.symbol(p).name + " uses stray variable " + v);
    // image must be over the target language
    std::function<void(const FormulaPtr&)> chk = [&](const FormulaPtr& f) {
      if (f->kind == Formula::Kind::Atom) {
        int idx = target.require(f->pred);
        if (target.arity(idx) != static_cast<int>(f->vars.size()))
          throw std::invalid_argument("translation image arity mismatch at " + f->pred);
      }
      for (const auto& k : f->kids) chk(k);
    };
    chk(img);
  }
}

Translation identity_translation(const Language& lang, std::string name) {
  Translation t;
  t.name = std::move(name);
  t.source = lang;
  t.target = lang;
  for (int p = 0; p < lang.size(); ++p) t.images.push_back(f_atom(lang.symbol(p).name, canonical_vars(lang.arity(p))));
  return t;
}

FormulaPtr translate_formula(const Translation& i, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      int p = i.source.require(f->pred);
      std::map<std::string, std::string> sub;
      auto xs = canonical_vars(i.source.arity(p));
      for (size_t k = 0; k < xs.size(); ++k) sub[xs[k]] = f->vars[k];
      return rename_vars(i.image(p), sub);
    }
    case Formula::Kind::Equal:
    case Formula::Kind::Const:
      return f;
    default: {
      auto g = std::make_shared<Formula>(*f);
      g->kids.clear();
      for (const auto& k : f->kids) g->kids.push_back(translate_formula(i, k));
      return g;
    }
  }
}

Structure apply_model(const Translation& i, const Structure& n) {
  Structure out(i.source, n.n);
  for (int p = 0; p < i.source.size(); ++p) {
    int k = i.source.arity(p);
    const FormulaPtr& img = i.image(p);
    auto xs = canonical_vars(k);
    for (const auto& t : Structure::all_tuples(n.n, k)) {
      std::map<std::string, int> sigma;
      for (int j = 0; j < k; ++j) sigma[xs[static_cast<size_t>(j)]] = t[static_cast<size_t>(j)];
      if (satisfies(n, img, sigma)) out.add(p, t);
    }
  }
  return out;
}

VerifyResult verify_interpretation(const Translation& i, const Theory& t1, const Theory& t2) {
  VerifyResult res;
  for (const auto& ax : t1.axioms) {
    FormulaPtr tf = translate_formula(i, ax);
    std::vector<std::string> vars = formula_vars(tf);
    // also count variables of the original axiom: translation can drop them
    for (const auto& v : formula_vars(ax))
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
    int nv = static_cast<int>(vars.size());
    for (int sz = 0; sz <= nv; ++sz) {
      for (const auto& cls : enumerate_models(t2, sz)) {
        const Structure& m = cls.canonical;
        if (m.n == 0 || nv == 0) {
          if (nv == 0) {
            std::map<std::string, int> empty;
            if (!satisfies(m, tf, empty)) {
              res.pass = false;
              res.axiom = ax;
              res.countermodel = m;
              return res;
            }
          }
          continue;
        }
        Assignment sigma(static_cast<size_t>(nv), 1);
        std::map<std::string, int> s;
        for (;;) {
          for (size_t vi = 0; vi < vars.size(); ++vi) s[vars[vi]] = sigma[vi];
          if (!satisfies(m, tf, s)) {
            res.pass = false;
            res.axiom = ax;
            res.countermodel = m;
            res.assignment = sigma;
            return res;
          }
          int ii = nv - 1;
          while (ii >= 0 && sigma[static_cast<size_t>(ii)] == m.n) {
            sigma[static_cast<size_t>(ii)] = 1;
            --ii;
          }
          if (ii < 0) break;
          ++sigma[static_cast<size_t>(ii)];
        }
      }
    }
  }
  return res;
}

Translation compose(const Translation& i, const Translation& j) {
  if (!(i.target == j.source)) throw std::invalid_argument("compose: language mismatch");
  Translation out;
  out.name = j.name + "." + i.name;
  out.source = i.source;
  out.target = j.target;
  for (int p = 0; p < i.source.size(); ++p) out.images.push_back(translate_formula(j, i.image(p)));
  out.validate();
  return out;
}

bool equivalent(const Translation& i1, const Translation& i2, const Theory& t2) {
  if (!(i1.source == i2.source)) return false;
  for (int p = 0; p < i1.source.size(); ++p) {
    FormulaPtr bi = f_iff(i1.image(p), i2.image(p));
    if (!entails_finite(t2, bi)) return false;
  }
  return true;
}

Amalgam amalgamate(const Translation& i1, const Theory& t, const Theory& t1, const Translation& i2,
                   const Theory& t2) {
  Theory hat = union_theory(t1, t2, t1.name + "_" + t2.name);
  // union_theory keeps T1 symbol names; T2 symbols may have been suffixed.
  std::map<std::string, std::string> rename2;
  {
    int off = t1.language.size();
    for (int p = 0; p < t2.language.size(); ++p)
      rename2[t2.language.symbol(p).name] = hat.language.symbol(off + p).name;
  }
  auto embed2 = [&](const FormulaPtr& f) {
    std::function<FormulaPtr(const FormulaPtr&)> rec = [&](const FormulaPtr& g) -> FormulaPtr {
      auto h = std::make_shared<Formula>(*g);
      if (h->kind == Formula::Kind::Atom) h->pred = rename2.at(h->pred);
      h->kids.clear();
      for (const auto& k : g->kids) h->kids.push_back(rec(k));
      return h;
    };
    return rec(f);
  };

  Translation hat1;
  hat1.name = "into1";
  hat1.source = t1.language;
  hat1.target = hat.language;
  for (int p = 0; p < t1.language.size(); ++p)
    hat1.images.push_back(f_atom(t1.language.symbol(p).name, canonical_vars(t1.language.arity(p))));

  Translation hat2;
  hat2.name = "into2";
  hat2.source = t2.language;
  hat2.target = hat.language;
  for (int p = 0; p < t2.language.size(); ++p)
    hat2.images.push_back(
        f_atom(rename2.at(t2.language.symbol(p).name), canonical_vars(t2.language.arity(p))));

  // bridge axioms: I1(P) <-> I2(P) per symbol P of T
  for (int p = 0; p < t.language.size(); ++p)
    hat.axioms.push_back(f_iff(i1.image(p), embed2(i2.image(p))));
  hat.validate();
  return {hat, hat1, hat2};
}

namespace {

// Equivalence relations of [k] as restricted-growth strings; classes ordered
// by minimum element, representatives are the minima.
std::vector<std::vector<int>> rgs_all(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(static_cast<size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int i, int maxv) {
    if (i == k) {
      out.push_back(rgs);
      return;
    }
    for (int v = 0; v <= maxv + 1 && v <= i; ++v) {
      rgs[static_cast<size_t>(i)] = v;
      rec(i + 1, std::max(maxv, v));
    }
  };
  rec(0, -1);
  return out;
}

std::string rgs_name(const std::string& base, const std::vector<int>& rgs) {
  std::string s = base + "_";
  for (int v : rgs) s += static_cast<char>('0' + v);
  return s;
}

}  // namespace

CanonicalizeResult canonicalize(const Theory& t) {
  std::vector<PredicateSymbol> syms;
  struct Entry {
    int src_pred;
    std::vector<int> rgs;
    int classes;
  };
  std::vector<Entry> entries;
  for (int p = 0; p < t.language.size(); ++p) {
    int k = t.language.arity(p);
    for (const auto& rgs : rgs_all(k)) {
      int classes = 1 + *std::max_element(rgs.begin(), rgs.end());
      syms.push_back({rgs_name(t.language.symbol(p).name, rgs), classes});
      entries.push_back({p, rgs, classes});
    }
  }
  Language lang_prime(syms);

  // I : T -> T'   I(P)(x1..xk) = OR_approx ( D_approx(x) & P_approx(reps) )
  Translation to_prime;
  to_prime.name = "canon";
  to_prime.source = t.language;
  to_prime.target = lang_prime;
  to_prime.images.resize(static_cast<size_t>(t.language.size()));
  for (int p = 0; p < t.language.size(); ++p) {
    int k = t.language.arity(p);
    auto xs = canonical_vars(k);
    std::vector<FormulaPtr> disjuncts;
    for (size_t e = 0; e < entries.size(); ++e) {
      if (entries[e].src_pred != p) continue;
      const auto& rgs = entries[e].rgs;
      std::vector<FormulaPtr> conj;
      for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
          if (rgs[static_cast<size_t>(i)] == rgs[static_cast<size_t>(j)])
            conj.push_back(f_equal(xs[static_cast<size_t>(i)], xs[static_cast<size_t>(j)]));
          else
            conj.push_back(f_not(f_equal(xs[static_cast<size_t>(i)], xs[static_cast<size_t>(j)])));
        }
      // representatives: first occurrence of each class value
      std::vector<std::string> reps;
      for (int c = 0; c < entries[e].classes; ++c) {
        for (int i = 0; i < k; ++i)
          if (rgs[static_cast<size_t>(i)] == c) {
            reps.push_back(xs[static_cast<size_t>(i)]);
            break;
          }
      }
      conj.push_back(f_atom(lang_prime.symbol(static_cast<int>(e)).name, reps));
      disjuncts.push_back(f_and_all(conj));
    }
    to_prime.images[static_cast<size_t>(p)] = f_or_all(disjuncts);
  }

  // J : T' -> T   J(P_approx)(y1..yl) = AND_{nu<mu} y_nu != y_mu  &  P(y_{class(i)})
  Translation from_prime;
  from_prime.name = "uncanon";
  from_prime.source = lang_prime;
  from_prime.target = t.language;
  for (size_t e = 0; e < entries.size(); ++e) {
    int k = t.language.arity(entries[e].src_pred);
    int l = entries[e].classes;
    auto ys = canonical_vars(l);
    std::vector<FormulaPtr> conj;
    for (int a = 0; a < l; ++a)
      for (int b = a + 1; b < l; ++b)
        conj.push_back(f_not(f_equal(ys[static_cast<size_t>(a)], ys[static_cast<size_t>(b)])));
    std::vector<std::string> args;
    for (int i = 0; i < k; ++i) args.push_back(ys[static_cast<size_t>(entries[e].rgs[static_cast<size_t>(i)])]);
    conj.push_back(f_atom(t.language.symbol(entries[e].src_pred).name, args));
    from_prime.images.push_back(f_and_all(conj));
  }

  Theory prime;
  prime.name = t.name + "Canon";
  prime.language = lang_prime;
  // canonicity axioms for every new symbol
  for (size_t e = 0; e < entries.size(); ++e) {
    int l = entries[e].classes;
    auto ys = canonical_vars(l);
    for (int a = 0; a < l; ++a)
      for (int b = a + 1; b < l; ++b)
        prime.axioms.push_back(f_implies(f_equal(ys[static_cast<size_t>(a)], ys[static_cast<size_t>(b)]),
                                         f_not(f_atom(lang_prime.symbol(static_cast<int>(e)).name, ys))));
  }
  for (const auto& ax : t.axioms) prime.axioms.push_back(translate_formula(to_prime, ax));
  prime.validate();
  to_prime.validate();
  from_prime.validate();
  return {prime, to_prime, from_prime};
}

namespace {

Translation make_translation(const std::string& name, const Language& src, const Language& tgt,
                             const std::vector<std::pair<std::string, std::string>>& images_text) {
  Translation tr;
  tr.name = name;
  tr.source = src;
  tr.target = tgt;
  tr.images.resize(static_cast<size_t>(src.size()));
  for (const auto& [pred, text] : images_text) {
    int p = src.require(pred);
    tr.images[static_cast<size_t>(p)] = parse_formula(text, tgt);
  }
  for (int p = 0; p < src.size(); ++p)
    if (!tr.images[static_cast<size_t>(p)])
      throw std::invalid_argument("missing image for " + src.symbol(p).name);
  tr.validate();
  return tr;
}

}  // namespace

NamedInterpretation builtin_interpretation(const std::string& name) {
  if (name == "orientation_erasing") {
    Theory g = builtin_theory("Graph"), o = builtin_theory("Orgraph");
    return {make_translation(name, g.language, o.language, {{"E", "E(x1,x2) | E(x2,x1)"}}), g, o};
  }
  if (name == "orientation_erasing_digraph") {
    Theory g = builtin_theory("Graph"), d = builtin_theory("Digraph");
    return {make_translation(name, g.language, d.language, {{"E", "E(x1,x2) | E(x2,x1)"}}), g, d};
  }
  if (name.rfind("color_erasing_vertex", 0) == 0) {
    int c = std::stoi(name.substr(name.find(':') + 1));
    Theory g = builtin_theory("Graph");
    Theory tc = union_theory(builtin_theory("Graph"), builtin_theory("cColoring:" + std::to_string(c)),
                             "Graph" + std::to_string(c));
    return {make_translation(name, g.language, tc.language, {{"E", "E(x1,x2)"}}), g, tc};
  }
  if (name.rfind("color_erasing_edge", 0) == 0) {
    int c = std::stoi(name.substr(name.find(':') + 1));
    Theory g = builtin_theory("Graph");
    Theory tc = builtin_theory("cColoredGraph:" + std::to_string(c));
    std::ostringstream os;
    for (int i = 0; i < c; ++i) os << (i ? " | " : "") << "E" << i << "(x1,x2)";
    return {make_translation(name, g.language, tc.language, {{"E", os.str()}}), g, tc};
  }
  if (name == "order_erasing_graph") {
    Theory g = builtin_theory("Graph"), go = builtin_theory("GraphOrder");
    return {make_translation(name, g.language, go.language, {{"E", "E(x1,x2)"}}), g, go};
  }
  if (name == "order_erasing_perm") {
    Theory lo = builtin_theory("LinOrder"), pm = builtin_theory("Perm");
    return {make_translation(name, lo.language, pm.language, {{"lt", "lt1(x1,x2)"}}), lo, pm};
  }
  if (name == "order_erasing_extorder") {
    Theory o = builtin_theory("Order"), eo = builtin_theory("ExtendedOrder");
    return {make_translation(name, o.language, eo.language, {{"lt", "lt2(x1,x2)"}}), o, eo};
  }
  if (name == "linear_erasing_extorder") {
    Theory lo = builtin_theory("LinOrder"), eo = builtin_theory("ExtendedOrder");
    return {make_translation(name, lo.language, eo.language, {{"lt", "lt1(x1,x2)"}}), lo, eo};
  }
  if (name == "feedback_arc") {
    Theory go = builtin_theory("GraphOrder"), to = builtin_theory("TournamentOrder");
    return {make_translation(name, go.language, to.language,
                             {{"E", "(lt(x1,x2) & E(x2,x1)) | (lt(x2,x1) & E(x1,x2))"},
                              {"lt", "lt(x1,x2)"}}),
            go, to};
  }
  if (name == "feedback_arc_inverse") {
    Theory to = builtin_theory("TournamentOrder"), go = builtin_theory("GraphOrder");
    return {make_translation(name, to.language, go.language,
                             {{"E", "(lt(x2,x1) & E(x1,x2)) | (lt(x1,x2) & !E(x1,x2) & x1 != x2)"},
                              {"lt", "lt(x1,x2)"}}),
            to, go};
  }
  if (name == "triangle") {
    Theory h3 = builtin_theory("kHypergraph:3"), g = builtin_theory("Graph");
    return {make_translation(name, h3.language, g.language,
                             {{"E", "E(x1,x2) & E(x1,x3) & E(x2,x3)"}}),
            h3, g};
  }
  if (name == "fdf") {
    Theory tu = builtin_theory("Turan"), fd = builtin_theory("FDF");
    // a triple forms a 3-edge iff the spanned oriented graph has an isolated
    // vertex or a vertex of out-degree 2
    std::string img =
        "x1 != x2 & x1 != x3 & x2 != x3 & ("
        "(E(x1,x2) & E(x1,x3)) | (E(x2,x3) & E(x2,x1)) | (E(x3,x1) & E(x3,x2))"
        " | (!E(x1,x2) & !E(x1,x3) & !E(x2,x1) & !E(x3,x1))"
        " | (!E(x2,x3) & !E(x2,x1) & !E(x3,x2) & !E(x1,x2))"
        " | (!E(x3,x1) & !E(x3,x2) & !E(x1,x3) & !E(x2,x3)))";
    return {make_translation(name, tu.language, fd.language, {{"E", img}}), tu, fd};
  }
  if (name == "fdf_thresh") {
    Theory fd = builtin_theory("FDF"), th = builtin_theory("ThreshGraph3");
    std::string img =
        "(chi0(x1) & chi2(x2) & !E(x1,x2)) | (chi1(x1) & chi0(x2) & !E(x1,x2)) | (chi2(x1) & chi1(x2) & !E(x1,x2))"
        " | (chi0(x1) & chi1(x2) & E(x1,x2)) | (chi1(x1) & chi2(x2) & E(x1,x2)) | (chi2(x1) & chi0(x2) & E(x1,x2))";
    return {make_translation(name, fd.language, th.language, {{"E", img}}), fd, th};
  }
  throw std::invalid_argument("unknown builtin interpretation " + name);
}

NamedInterpretation parse_interpretation(const std::string& text) {
  // interp { from=NAME to=NAME  P(vars) := formula  [; or newline] ... }
  auto fail = [](const std::string& m) { throw std::invalid_argument("interp parse: " + m); };
  size_t pos = text.find("interp");
  if (pos == std::string::npos) fail("expected 'interp'");
  pos = text.find('{', pos);
  if (pos == std::string::npos) fail("expected '{'");
  size_t end = text.rfind('}');
  if (end == std::string::npos || end <= pos) fail("expected '}'");
  std::string body = text.substr(pos + 1, end - pos - 1);

  auto grab = [&](const std::string& key) {
    size_t k = body.find(key + "=");
    if (k == std::string::npos) fail("missing " + key + "=");
    size_t b = k + key.size() + 1, e = b;
    while (e < body.size() && !std::isspace(static_cast<unsigned char>(body[e]))) ++e;
    return body.substr(b, e - b);
  };
  Theory src = builtin_theory(grab("from"));
  Theory tgt = builtin_theory(grab("to"));

  std::vector<std::pair<std::string, std::string>> images;
  size_t cur = 0;
  for (;;) {
    size_t as = body.find(":=", cur);
    if (as == std::string::npos) break;
    // backtrack to "P(v1,..,vk)"
    size_t close = body.rfind(')', as);
    if (close == std::string::npos) fail("expected P(vars) before ':='");
    size_t open = body.rfind('(', close);
    size_t nb = open;
    while (nb > 0 && (std::isalnum(static_cast<unsigned char>(body[nb - 1])) || body[nb - 1] == '_')) --nb;
    std::string pred = body.substr(nb, open - nb);
    std::string vars = body.substr(open + 1, close - open - 1);
    size_t next = body.find(":=", as + 2);
    size_t stop = body.size();
    if (next != std::string::npos) {
      // formula runs until the head of the next mapping
      size_t pclose = body.rfind(')', next);
      size_t popen = body.rfind('(', pclose);
      size_t pnb = popen;
      while (pnb > 0 && (std::isalnum(static_cast<unsigned char>(body[pnb - 1])) || body[pnb - 1] == '_')) --pnb;
      stop = pnb;
    }
    std::string formula_text = body.substr(as + 2, stop - as - 2);

    // rename declared variables to x1..xk
    std::vector<std::string> declared;
    {
      std::istringstream vs(vars);
      std::string v;
      while (std::getline(vs, v, ',')) {
        v.erase(std::remove_if(v.begin(), v.end(), [](unsigned char ch) { return std::isspace(ch); }), v.end());
        declared.push_back(v);
      }
    }
    FormulaPtr f = parse_formula(formula_text, tgt.language);
    std::map<std::string, std::string> sub;
    for (size_t i = 0; i < declared.size(); ++i) sub[declared[i]] = "x" + std::to_string(i + 1);
    f = rename_vars(f, sub);
    images.emplace_back(pred, print_formula(f));
    cur = as + 2;
  }
  return {make_translation("file", src.language, tgt.language, images), src, tgt};
}

std::string print_interpretation(const NamedInterpretation& ni) {
  std::ostringstream os;
  os << "interp { from=" << ni.source.name << " to=" << ni.target.name << "\n";
  for (int p = 0; p < ni.translation.source.size(); ++p) {
    const auto& sym = ni.translation.source.symbol(p);
    os << "  " << sym.name << "(";
    auto xs = canonical_vars(sym.arity);
    for (size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    os << ") := " << print_formula(ni.translation.image(p)) << "\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace theon
