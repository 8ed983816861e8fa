// theon: exact calculator for universal theories, finite models, flag
// algebras, limit objects, and lineons. All exact output is printed as
// rationals "num/den"; sampled modes require an explicit seed and are
// deterministic given it.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "theon/builtins.hpp"
#include "theon/densities.hpp"
#include "theon/flags.hpp"
#include "theon/interpret.hpp"
#include "theon/lineons.hpp"
#include "theon/theons.hpp"

using namespace theon;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Structure load_model(const std::string& ref, const Language* lang = nullptr) {
  if (ref.rfind("named:", 0) == 0) {
    std::string rest = ref.substr(6);
    auto colon = rest.find(':');
    if (colon == std::string::npos) return make_named_model(rest, {});
    std::vector<std::string> params;
    std::string name = rest.substr(0, colon);
    std::string tail = rest.substr(colon + 1);
    std::string cur;
    for (char c : tail) {
      if (c == ':') {
        params.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    params.push_back(cur);
    return make_named_model(name, params);
  }
  return parse_model(slurp(ref), lang);
}

Theory load_theory(const std::string& ref) {
  if (ref.size() > 4 && ref.substr(ref.size() - 4) == ".thy") return parse_theory(slurp(ref));
  return builtin_theory(ref);
}

Theon load_theon(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return builtin_theon(ref);
  return parse_theon(slurp(ref));
}

NamedInterpretation load_interp(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) return builtin_interpretation(ref.substr(8));
  return parse_interpretation(slurp(ref));
}

struct Output {
  bool as_json = false;
  json j = json::object();
  std::ostringstream tsv;

  void kv(const std::string& key, const std::string& value) {
    if (as_json)
      j[key] = value;
    else
      tsv << key << "\t" << value << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    if (as_json) {
      if (!j.contains("rows")) j["rows"] = json::array();
      j["rows"].push_back(cells);
    } else {
      for (size_t i = 0; i < cells.size(); ++i) tsv << (i ? "\t" : "") << cells[i];
      tsv << "\n";
    }
  }
  void scalar(const std::string& value) {
    if (as_json)
      j["value"] = value;
    else
      tsv << value << "\n";
  }
  void flush() {
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else
      std::cout << tsv.str();
  }
};

DensityKind parse_kind(const std::string& s) {
  if (s == "p") return DensityKind::P;
  if (s == "ind") return DensityKind::IND;
  if (s == "inj") return DensityKind::INJ;
  throw std::invalid_argument("kind must be p, ind or inj");
}

DKind parse_dkind(const std::string& s) {
  if (s == "p") return DKind::P;
  if (s == "ind") return DKind::IND;
  if (s == "inj") return DKind::INJ;
  throw std::invalid_argument("kind must be p, ind or inj");
}

void print_flagvec_rows(Output& out, const FlagVector& v) {
  for (const auto& [key, c] : v.coeffs()) out.row({key, rat_str(c)});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"theon: exact densities, flag algebras, and limit objects"};
  app.require_subcommand(1);
  bool as_json = false;
  int jobs = 0;
  app.add_flag("--json", as_json, "JSON output instead of TSV");
  app.add_option("--jobs", jobs, "worker threads (results are independent of this)");

  Output out;

  // enumerate
  std::string en_theory;
  int en_n = 0;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "models of a theory up to isomorphism");
  enumerate_cmd->add_option("--theory", en_theory)->required();
  enumerate_cmd->add_option("--n", en_n)->required();

  // density
  std::string d_kind = "p", d_m, d_n;
  auto* density_cmd = app.add_subcommand("density", "exact density between finite models");
  density_cmd->add_option("--kind", d_kind);
  density_cmd->add_option("M", d_m)->required();
  density_cmd->add_option("N", d_n)->required();

  // multi-density
  std::vector<std::string> md_ms;
  std::string md_n;
  auto* multi_cmd = app.add_subcommand("multi-density", "disjoint-subset multi-density");
  multi_cmd->add_option("--of", md_ms)->required();
  multi_cmd->add_option("N", md_n)->required();

  // mobius
  std::string mb_theory, mb_m, mb_mp;
  auto* mobius_cmd = app.add_subcommand("mobius", "Mobius function on the supermodel poset");
  mobius_cmd->add_option("--theory", mb_theory)->required();
  mobius_cmd->add_option("M", mb_m)->required();
  mobius_cmd->add_option("Mprime", mb_mp)->required();

  // lift / evaluate / product / pi
  std::string lf_vec;
  int lf_level = 0;
  auto* lift_cmd = app.add_subcommand("lift", "chain-rule expansion to a higher level");
  lift_cmd->add_option("--vec", lf_vec)->required();
  lift_cmd->add_option("--level", lf_level)->required();

  std::string ev_vec, ev_model;
  auto* eval_cmd = app.add_subcommand("evaluate", "apply the p(-,N) functional to a vector");
  eval_cmd->add_option("--vec", ev_vec)->required();
  eval_cmd->add_option("--model", ev_model)->required();

  std::string pr_a, pr_b;
  int pr_level = 0;
  auto* product_cmd = app.add_subcommand("product", "flag algebra product at a level");
  product_cmd->add_option("--left", pr_a)->required();
  product_cmd->add_option("--right", pr_b)->required();
  product_cmd->add_option("--level", pr_level)->required();

  std::string pi_interp, pi_vec;
  auto* pi_cmd = app.add_subcommand("pi", "interpretation-induced algebra map");
  pi_cmd->add_option("--interp", pi_interp)->required();
  pi_cmd->add_option("--vec", pi_vec)->required();

  // interpret check/apply
  auto* interp_cmd = app.add_subcommand("interpret", "open interpretations");
  std::string ic_interp;
  auto* icheck = interp_cmd->add_subcommand("check", "verify the interpretation property");
  icheck->add_option("--interp", ic_interp)->required();
  std::string ia_interp, ia_model;
  auto* iapply = interp_cmd->add_subcommand("apply", "apply to a model of the target theory");
  iapply->add_option("--interp", ia_interp)->required();
  iapply->add_option("--model", ia_model)->required();

  // amalgamate
  std::string am_from, am_i1, am_i2;
  auto* amalg_cmd = app.add_subcommand("amalgamate", "amalgamated sum of two interpretations");
  amalg_cmd->add_option("--from", am_from)->required();
  amalg_cmd->add_option("--i1", am_i1)->required();
  amalg_cmd->add_option("--i2", am_i2)->required();

  // canonicalize
  std::string cn_theory;
  auto* canon_cmd = app.add_subcommand("canonicalize", "canonical companion theory");
  canon_cmd->add_option("--theory", cn_theory)->required();

  // sample
  std::string sm_theon;
  int sm_n = 0;
  uint64_t sm_seed = 0;
  bool sm_has_seed = false;
  auto* sample_cmd = app.add_subcommand("sample", "exchangeable-array sample from a theon");
  sample_cmd->add_option("--theon", sm_theon)->required();
  sample_cmd->add_option("--n", sm_n)->required();
  sample_cmd->add_option("--seed", sm_seed)->each([&](const std::string&) { sm_has_seed = true; });

  // exact
  std::string ex_theon, ex_model, ex_kind = "ind";
  auto* exact_cmd = app.add_subcommand("exact", "exact density of a model in a theon");
  exact_cmd->add_option("--theon", ex_theon)->required();
  exact_cmd->add_option("--model", ex_model)->required();
  exact_cmd->add_option("--kind", ex_kind);

  // check weak/strong
  auto* check_cmd = app.add_subcommand("check", "theon vs theory checks");
  std::string cw_theon, cw_theory;
  auto* cweak = check_cmd->add_subcommand("weak", "exact axiom truth measures");
  cweak->add_option("--theon", cw_theon)->required();
  cweak->add_option("--theory", cw_theory);
  std::string cs_theon, cs_theory;
  uint64_t cs_trials = 10000, cs_seed = 0;
  bool cs_has_seed = false;
  auto* cstrong = check_cmd->add_subcommand("strong", "sampled pointwise falsification");
  cstrong->add_option("--theon", cs_theon)->required();
  cstrong->add_option("--theory", cs_theory);
  cstrong->add_option("--trials", cs_trials);
  cstrong->add_option("--seed", cs_seed)->each([&](const std::string&) { cs_has_seed = true; });

  // strengthen horn/linorder
  auto* str_cmd = app.add_subcommand("strengthen", "removal-lemma strengthenings");
  std::string sh_theon;
  bool sh_positive = false;
  uint64_t sh_trials = 10000, sh_seed = 0;
  bool sh_has_seed = false;
  auto* shorn = str_cmd->add_subcommand("horn", "density-point strengthening (almost Horn)");
  shorn->add_option("--theon", sh_theon)->required();
  shorn->add_flag("--positive", sh_positive);
  shorn->add_option("--trials", sh_trials);
  shorn->add_option("--seed", sh_seed)->each([&](const std::string&) { sh_has_seed = true; });
  std::string sl_theon;
  uint64_t sl_trials = 10000, sl_seed = 0;
  bool sl_has_seed = false;
  auto* slin = str_cmd->add_subcommand("linorder", "constructive linear-order strengthening");
  slin->add_option("--theon", sl_theon)->required();
  slin->add_option("--trials", sl_trials);
  slin->add_option("--seed", sl_seed)->each([&](const std::string&) { sl_has_seed = true; });

  // permuton / poseton extract
  auto* permuton_cmd = app.add_subcommand("permuton", "permuton operations");
  std::string pe_theon;
  auto* pextract = permuton_cmd->add_subcommand("extract", "grid measure of a Perm theon");
  pextract->add_option("--theon", pe_theon)->required();
  auto* poseton_cmd = app.add_subcommand("poseton", "poseton operations");
  std::string po_theon;
  auto* poextract = poseton_cmd->add_subcommand("extract", "step kernel of an ExtendedOrder theon");
  poextract->add_option("--theon", po_theon)->required();

  // lineon
  auto* lineon_cmd = app.add_subcommand("lineon", "limits of subsets of F_2^n");
  std::string ld_pattern, ld_subset, ld_mode = "exact";
  uint64_t ld_samples = 100000, ld_seed = 0;
  bool ld_has_seed = false;
  auto* ldensity = lineon_cmd->add_subcommand("density", "pattern density over random linear maps");
  ldensity->add_option("--pattern", ld_pattern)->required();
  ldensity->add_option("--subset", ld_subset)->required();
  ldensity->add_option("--mode", ld_mode);
  ldensity->add_option("--samples", ld_samples);
  ldensity->add_option("--seed", ld_seed)->each([&](const std::string&) { ld_has_seed = true; });
  std::string lt_subset, lt_mode = "exact";
  uint64_t lt_samples = 100000, lt_seed = 0;
  bool lt_has_seed = false;
  auto* ltriangle = lineon_cmd->add_subcommand("triangle", "monochromatic affine triangle density");
  ltriangle->add_option("--subset", lt_subset)->required();
  ltriangle->add_option("--mode", lt_mode);
  ltriangle->add_option("--samples", lt_samples);
  ltriangle->add_option("--seed", lt_seed)->each([&](const std::string&) { lt_has_seed = true; });
  std::string lb_subset;
  int lb_t = 1;
  auto* lblow = lineon_cmd->add_subcommand("blowup", "cylinder extension A x F_2^t");
  lblow->add_option("--subset", lb_subset)->required();
  lblow->add_option("--t", lb_t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_jobs(jobs > 0 ? jobs : 2);
  out.as_json = as_json;

  try {
    if (*enumerate_cmd) {
      Theory t = load_theory(en_theory);
      for (const auto& cls : enumerate_models(t, en_n))
        out.row({cls.key, std::to_string(cls.aut_count)});
    } else if (*density_cmd) {
      Structure m = load_model(d_m);
      Structure n = load_model(d_n, &m.language);
      out.scalar(rat_str(density(parse_kind(d_kind), m, n)));
    } else if (*multi_cmd) {
      std::vector<Structure> ms;
      Structure n = load_model(md_n);
      for (const auto& ref : md_ms) ms.push_back(load_model(ref, &n.language));
      out.scalar(rat_str(multi_density(ms, n)));
    } else if (*mobius_cmd) {
      Theory t = load_theory(mb_theory);
      Structure m = load_model(mb_m, &t.language);
      Structure mp = load_model(mb_mp, &t.language);
      out.scalar(rat_str(mobius(m, mp, t)));
    } else if (*lift_cmd) {
      FlagVector v = parse_flagvec(slurp(lf_vec));
      print_flagvec_rows(out, lift(v, lf_level));
    } else if (*eval_cmd) {
      FlagVector v = parse_flagvec(slurp(ev_vec));
      Structure n = load_model(ev_model, &v.theory().language);
      out.scalar(rat_str(evaluate(v, n)));
    } else if (*product_cmd) {
      FlagVector a = parse_flagvec(slurp(pr_a));
      FlagVector b = parse_flagvec(slurp(pr_b));
      print_flagvec_rows(out, product(a, b, pr_level));
    } else if (*pi_cmd) {
      auto ni = load_interp(pi_interp);
      FlagVector v = parse_flagvec(slurp(pi_vec));
      print_flagvec_rows(out, pi_map(ni.translation, ni.source, ni.target, v));
    } else if (*icheck) {
      auto ni = load_interp(ic_interp);
      auto res = verify_interpretation(ni.translation, ni.source, ni.target);
      out.kv("verdict", res.pass ? "PASS" : "FAIL");
      if (!res.pass) {
        out.kv("axiom", print_formula(*res.axiom));
        out.kv("countermodel", res.countermodel->encode());
      }
      out.flush();
      return res.pass ? 0 : 1;
    } else if (*iapply) {
      auto ni = load_interp(ia_interp);
      Structure n = load_model(ia_model, &ni.target.language);
      out.scalar(print_model(apply_model(ni.translation, n)));
    } else if (*amalg_cmd) {
      Theory t = load_theory(am_from);
      auto n1 = load_interp(am_i1);
      auto n2 = load_interp(am_i2);
      Amalgam am = amalgamate(n1.translation, t, n1.target, n2.translation, n2.target);
      out.scalar(print_theory(am.theory));
    } else if (*canon_cmd) {
      Theory t = load_theory(cn_theory);
      auto c = canonicalize(t);
      out.kv("theory", print_theory(c.theory));
      out.kv("symbols", std::to_string(c.theory.language.size()));
    } else if (*sample_cmd) {
      if (!sm_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
      Theon t = load_theon(sm_theon);
      out.scalar(print_model(sample_model(t, sm_n, sm_seed)));
    } else if (*exact_cmd) {
      Theon t = load_theon(ex_theon);
      Structure m = load_model(ex_model, &t.theory.language);
      out.scalar(rat_str(exact_density(t, m, parse_dkind(ex_kind))));
    } else if (*cweak) {
      Theon t = load_theon(cw_theon);
      Theory ty = cw_theory.empty() ? t.theory : load_theory(cw_theory);
      auto rep = weak_check(t, ty);
      for (const auto& e : rep.entries)
        out.row({e.pass ? "PASS" : "FAIL", rat_str(e.measure), e.axiom});
      out.flush();
      return rep.pass() ? 0 : 1;
    } else if (*cstrong) {
      if (!cs_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
      Theon t = load_theon(cs_theon);
      Theory ty = cs_theory.empty() ? t.theory : load_theory(cs_theory);
      TheonPointOracle oracle(t);
      auto res = strong_check_sampled(oracle, ty, cs_trials, cs_seed);
      out.kv("verdict", res.pass ? "PASS" : "FAIL");
      if (!res.pass) {
        out.kv("axiom", res.axiom);
        out.kv("trial", std::to_string(res.trial));
      }
      out.flush();
      return res.pass ? 0 : 1;
    } else if (*shorn) {
      if (!sh_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
      Theon t = load_theon(sh_theon);
      auto oracle = strengthen_horn(t, sh_positive);
      auto res = strong_check_sampled(*oracle, t.theory, sh_trials, sh_seed);
      out.kv("strong_check", res.pass ? "PASS" : "FAIL");
      out.flush();
      return res.pass ? 0 : 1;
    } else if (*slin) {
      if (!sl_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
      Theon t = load_theon(sl_theon);
      Rat bad;
      auto oracle = strengthen_linorder(t, &bad);
      auto res = strong_check_sampled(*oracle, t.theory, sl_trials, sl_seed);
      out.kv("bad_pair_measure", rat_str(bad));
      out.kv("strong_check", res.pass ? "PASS" : "FAIL");
      out.flush();
      return res.pass ? 0 : 1;
    } else if (*pextract) {
      Theon t = load_theon(pe_theon);
      PlanarGrid g = permuton_extract(t);
      out.kv("g", std::to_string(g.g));
      for (int i = 0; i < g.g; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < g.g; ++j) row.push_back(rat_str(g.w[static_cast<size_t>(i)][static_cast<size_t>(j)]));
        out.row(row);
      }
    } else if (*poextract) {
      Theon t = load_theon(po_theon);
      StepKernel k = poseton_extract(t);
      out.kv("g", std::to_string(k.g));
      for (int c1 = 0; c1 < k.g * k.g; ++c1) {
        std::vector<std::string> row;
        for (int c2 = 0; c2 < k.g * k.g; ++c2)
          row.push_back(rat_str(k.w[static_cast<size_t>(c1)][static_cast<size_t>(c2)]));
        out.row(row);
      }
    } else if (*ldensity) {
      Pattern f = parse_pattern(slurp(ld_pattern));
      LinSubset a = parse_linsubset(slurp(ld_subset));
      if (ld_mode == "exact") {
        out.scalar(rat_str(pattern_density_exact(f, a)));
      } else {
        if (!ld_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
        out.scalar(rat_str(pattern_density_sampled(f, a, ld_samples, ld_seed)));
      }
    } else if (*ltriangle) {
      LinSubset a = parse_linsubset(slurp(lt_subset));
      if (lt_mode == "exact") {
        out.scalar(rat_str(triangle_mono_exact(a)));
      } else {
        if (!lt_has_seed) throw CLI::ValidationError("--seed is required for sampled modes");
        out.scalar(rat_str(triangle_mono_sampled(a, lt_samples, lt_seed)));
      }
    } else if (*lblow) {
      LinSubset a = parse_linsubset(slurp(lb_subset));
      out.scalar(print_linsubset(blowup(a, lb_t)));
    }
    out.flush();
    return 0;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
