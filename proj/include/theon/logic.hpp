#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace theon {

struct PredicateSymbol {
  std::string name;
  int arity = 1;  // k(P) >= 1
  bool operator==(const PredicateSymbol& o) const { return name == o.name && arity == o.arity; }
};

// Finite ordered set of predicate symbols; names unique.
class Language {
 public:
  Language() = default;
  explicit Language(std::vector<PredicateSymbol> symbols);

  int size() const { return static_cast<int>(symbols_.size()); }
  const PredicateSymbol& symbol(int i) const { return symbols_[static_cast<size_t>(i)]; }
  const std::vector<PredicateSymbol>& symbols() const { return symbols_; }
  std::optional<int> index_of(const std::string& name) const;
  int require(const std::string& name) const;
  int arity(int i) const { return symbols_[static_cast<size_t>(i)].arity; }
  bool operator==(const Language& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<PredicateSymbol> symbols_;
};

// Open-formula AST. Variables are identifiers; atoms carry the symbol name
// (resolved against a Language where needed).
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Atom, Equal, Not, And, Or, Implies, Iff, Const };
  Kind kind;
  std::string pred;               // Atom
  std::vector<std::string> vars;  // Atom (arity many) or Equal (two)
  std::vector<FormulaPtr> kids;
  bool value = false;  // Const
};

FormulaPtr f_atom(std::string pred, std::vector<std::string> vars);
FormulaPtr f_equal(std::string a, std::string b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_const(bool v);
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);  // empty -> true
FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs);   // empty -> false

// Free variables in first-occurrence order (implicit universal closure).
std::vector<std::string> formula_vars(const FormulaPtr& f);

std::string print_formula(const FormulaPtr& f);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

// Universal theory: language + open axioms, universally closed implicitly.
struct Theory {
  std::string name;
  Language language;
  std::vector<FormulaPtr> axioms;

  void validate() const;  // arity/symbol checks on every axiom
};

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Theory DSL (.thy). Grammar:
//   theory  ::= "theory" IDENT "{" "language" "{" (IDENT "/" INT ("," IDENT "/" INT)*)? "}"
//               ("axiom" formula ";")* "}"
//   formula ::= iff ; iff ::= imp ("<->" imp)* ; imp ::= or ("->" or)*  (right assoc)
//   or ::= and ("|" and)* ; and ::= unary ("&" unary)*
//   unary ::= "!" unary | atom | "(" formula ")"
//   atom ::= IDENT "(" VAR ("," VAR)* ")" | VAR "=" VAR | VAR "!=" VAR
Theory parse_theory(const std::string& text);
FormulaPtr parse_formula(const std::string& text, const Language& lang);
std::string print_theory(const Theory& t);

// Partition of variables, given as classes of variable names.
using VarPartition = std::vector<std::vector<std::string>>;

FormulaPtr rename_vars(const FormulaPtr& f, const std::map<std::string, std::string>& sub);

// Replace each variable by its class representative, then rename the class
// representatives to fresh y1..ym in first-occurrence order.
FormulaPtr substitute(const FormulaPtr& f, const VarPartition& classes);

struct Structure;  // models.hpp

// Open diagram of a canonical structure: vertex distinctness clauses,
// positive atoms, and (unless `positive`) negated atoms over distinct tuples.
FormulaPtr diagram(const Structure& m, const Language& lang, bool positive);

// Forb / Forbp: appends !diagram(M, positive = !induced) per M.
Theory forbid(const Theory& t, const std::vector<Structure>& ms, bool induced);

// Exact decision procedures via finite model checking (implemented with the
// models module; size bound = number of variables of the formula).
bool entails_finite(const Theory& t, const FormulaPtr& f);

struct CanonicityReport {
  struct Entry {
    std::string pred;
    int i, j;  // 1-based coordinate pair, i < j
    bool entailed;
  };
  std::vector<Entry> entries;
  bool canonical() const {
    for (const auto& e : entries)
      if (!e.entailed) return false;
    return true;
  }
};
CanonicityReport check_canonical(const Theory& t);

}  // namespace theon
