#include "theon/flags.hpp"

#include <mutex>
#include <sstream>

#include "theon/builtins.hpp"

namespace theon {

namespace {

// Basis cache; enumeration at a level is pure so sharing is safe.
std::map<std::pair<std::string, int>, std::vector<IsoClass>>& basis_cache() {
  static std::map<std::pair<std::string, int>, std::vector<IsoClass>> cache;
  return cache;
}
std::mutex basis_mutex;

const std::vector<IsoClass>& level_basis(const Theory& t, int level) {
  std::lock_guard<std::mutex> lock(basis_mutex);
  auto key = std::make_pair(t.name, level);
  auto it = basis_cache().find(key);
  if (it != basis_cache().end()) return it->second;
  auto classes = enumerate_models(t, level);
  return basis_cache().emplace(key, std::move(classes)).first->second;
}

}  // namespace

FlagVector::FlagVector(Theory theory, int level) : theory_(std::move(theory)), level_(level) {}

const std::vector<IsoClass>& FlagVector::basis() const { return level_basis(theory_, level_); }

void FlagVector::set(const Structure& basis_model, const Rat& c) {
  if (basis_model.n != level_) throw std::invalid_argument("FlagVector::set: wrong level");
  coeffs_[canonical_form(basis_model).key] = c;
}

void FlagVector::add(const Structure& basis_model, const Rat& c) {
  if (basis_model.n != level_) throw std::invalid_argument("FlagVector::add: wrong level");
  coeffs_[canonical_form(basis_model).key] += c;
}

Rat FlagVector::coeff(const Structure& m) const {
  auto it = coeffs_.find(canonical_form(m).key);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

FlagVector& FlagVector::operator+=(const FlagVector& o) {
  if (o.level_ != level_) throw std::invalid_argument("FlagVector +=: level mismatch");
  for (const auto& [k, c] : o.coeffs_) coeffs_[k] += c;
  return *this;
}

FlagVector& FlagVector::operator*=(const Rat& c) {
  for (auto& [k, v] : coeffs_) v *= c;
  return *this;
}

FlagVector flag_of(const Theory& t, const Structure& m) {
  FlagVector v(t, m.n);
  v.set(m, 1);
  return v;
}

FlagVector flag_unit(const Theory& t) {
  FlagVector v(t, 0);
  Structure empty(t.language, 0);
  v.set(empty, 1);
  return v;
}

FlagVector lift(const FlagVector& v, int lvl, Exec mode) {
  if (lvl < v.level()) throw std::invalid_argument("lift: target level below vector level");
  if (lvl == v.level()) return v;
  const auto& from = level_basis(v.theory(), v.level());
  const auto& to = level_basis(v.theory(), lvl);
  FlagVector out(v.theory(), lvl);
  for (const auto& target : to) {
    Rat c = 0;
    for (const auto& src : from) {
      auto it = v.coeffs().find(src.key);
      if (it == v.coeffs().end()) continue;
      c += it->second * density(DensityKind::P, src.canonical, target.canonical, mode);
    }
    if (c != 0) out.set(target.canonical, c);
  }
  return out;
}

FlagVector product(const FlagVector& a, const FlagVector& b, int lvl, Exec mode) {
  if (!(a.theory().language == b.theory().language))
    throw std::invalid_argument("product: theory mismatch");
  if (lvl < a.level() + b.level()) throw std::invalid_argument("product: level too small");
  const auto& basis_a = level_basis(a.theory(), a.level());
  const auto& basis_b = level_basis(b.theory(), b.level());
  const auto& basis_n = level_basis(a.theory(), lvl);

  FlagVector out(a.theory(), lvl);
  for (const auto& n : basis_n) {
    Rat c = 0;
    for (const auto& ma : basis_a) {
      auto ita = a.coeffs().find(ma.key);
      if (ita == a.coeffs().end()) continue;
      for (const auto& mb : basis_b) {
        auto itb = b.coeffs().find(mb.key);
        if (itb == b.coeffs().end()) continue;
        c += ita->second * itb->second * multi_density({ma.canonical, mb.canonical}, n.canonical, mode);
      }
    }
    if (c != 0) out.set(n.canonical, c);
  }
  return out;
}

Rat evaluate(const FlagVector& v, const Structure& n, Exec mode) {
  if (n.n < v.level()) throw std::invalid_argument("evaluate: model smaller than level");
  Rat acc = 0;
  for (const auto& cls : level_basis(v.theory(), v.level())) {
    auto it = v.coeffs().find(cls.key);
    if (it == v.coeffs().end()) continue;
    acc += it->second * density(DensityKind::P, cls.canonical, n, mode);
  }
  return acc;
}

FlagVector pi_map(const Translation& i, const Theory& t1, const Theory& t2, const FlagVector& v) {
  if (!(v.theory().language == t1.language)) throw std::invalid_argument("pi_map: vector not over T1");
  FlagVector out(t2, v.level());
  const auto& basis2 = level_basis(t2, v.level());
  for (const auto& m2 : basis2) {
    Structure image = apply_model(i, m2.canonical);
    auto it = v.coeffs().find(canonical_form(image).key);
    if (it != v.coeffs().end() && it->second != 0) out.add(m2.canonical, it->second);
  }
  return out;
}

FlagVector parse_flagvec(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  is >> tok;
  if (tok != "flagvec") throw std::invalid_argument("flagvec parse: expected 'flagvec'");
  is >> tok;
  if (tok != "{") throw std::invalid_argument("flagvec parse: expected '{'");
  std::string theory_name;
  int level = -1;
  std::map<std::string, Rat> coeffs;
  while (is >> tok && tok != "}") {
    if (tok.rfind("theory=", 0) == 0) {
      theory_name = tok.substr(7);
    } else if (tok.rfind("level=", 0) == 0) {
      level = std::stoi(tok.substr(6));
    } else if (tok == "coeff") {
      std::string key;
      char c;
      is >> std::ws >> c;
      if (c != '"') throw std::invalid_argument("flagvec parse: expected quoted key");
      while (is.get(c) && c != '"') key += c;
      is >> tok;  // '='
      std::string val;
      is >> val;
      coeffs[key] = rat_parse(val);
    } else {
      throw std::invalid_argument("flagvec parse: unexpected token " + tok);
    }
  }
  if (theory_name.empty() || level < 0) throw std::invalid_argument("flagvec parse: missing theory/level");
  Theory t = builtin_theory(theory_name);
  FlagVector v(t, level);
  const auto& basis = level_basis(t, level);
  for (const auto& [key, c] : coeffs) {
    const IsoClass* match = nullptr;
    for (const auto& b : basis)
      if (b.key == key) {
        match = &b;
        break;
      }
    if (!match) throw std::invalid_argument("flagvec parse: key not in level basis: " + key);
    v.set(match->canonical, c);
  }
  return v;
}

std::string print_flagvec(const FlagVector& v) {
  std::ostringstream os;
  os << "flagvec { theory=" << v.theory().name << " level=" << v.level() << "\n";
  for (const auto& [k, c] : v.coeffs()) os << "  coeff \"" << k << "\" = " << rat_str(c) << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace theon
