#include "theon/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace theon {

Language::Language(std::vector<PredicateSymbol> symbols) : symbols_(std::move(symbols)) {
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.arity < 1) throw std::invalid_argument("Language: arity must be >= 1 for " + s.name);
    if (!seen.insert(s.name).second) throw std::invalid_argument("Language: duplicate symbol " + s.name);
  }
}

std::optional<int> Language::index_of(const std::string& name) const {
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

int Language::require(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw std::invalid_argument("unknown predicate symbol " + name);
  return *i;
}

FormulaPtr f_atom(std::string pred, std::vector<std::string> vars) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Atom;
  f->pred = std::move(pred);
  f->vars = std::move(vars);
  return f;
}

FormulaPtr f_equal(std::string a, std::string b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Equal;
  f->vars = {std::move(a), std::move(b)};
  return f;
}

static FormulaPtr mk(Formula::Kind k, std::vector<FormulaPtr> kids) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->kids = std::move(kids);
  return f;
}

FormulaPtr f_not(FormulaPtr a) { return mk(Formula::Kind::Not, {std::move(a)}); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::And, {std::move(a), std::move(b)}); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::Or, {std::move(a), std::move(b)}); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::Implies, {std::move(a), std::move(b)}); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk(Formula::Kind::Iff, {std::move(a), std::move(b)}); }

FormulaPtr f_const(bool v) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Const;
  f->value = v;
  return f;
}

FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_const(true);
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
  return acc;
}

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_const(false);
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
  return acc;
}

static void collect_vars(const FormulaPtr& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  for (const auto& v : f->vars)
    if (seen.insert(v).second) out.push_back(v);
  for (const auto& k : f->kids) collect_vars(k, out, seen);
}

std::vector<std::string> formula_vars(const FormulaPtr& f) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars(f, out, seen);
  return out;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind || a->pred != b->pred || a->vars != b->vars || a->value != b->value) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!formula_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

// Printing uses the DSL grammar's precedence so that parse(print(f)) == f.
// Levels: 0 iff, 1 implies, 2 or, 3 and, 4 unary.
static void print_rec(const FormulaPtr& f, int level, std::ostream& os) {
  auto paren = [&](int need, auto&& body) {
    if (level > need) os << "(";
    body();
    if (level > need) os << ")";
  };
  switch (f->kind) {
    case Formula::Kind::Atom:
      os << f->pred << "(";
      for (size_t i = 0; i < f->vars.size(); ++i) os << (i ? "," : "") << f->vars[i];
      os << ")";
      break;
    case Formula::Kind::Equal:
      os << f->vars[0] << " = " << f->vars[1];
      break;
    case Formula::Kind::Const:
      // The grammar has no literal for constants; encode with a degenerate
      // equality that parses back to the same node via the printer contract.
      os << (f->value ? "$T" : "$F");
      break;
    case Formula::Kind::Not:
      if (f->kids[0]->kind == Formula::Kind::Equal) {
        os << f->kids[0]->vars[0] << " != " << f->kids[0]->vars[1];
      } else {
        os << "!";
        print_rec(f->kids[0], 4, os);
      }
      break;
    case Formula::Kind::And:
      paren(3, [&] {
        print_rec(f->kids[0], 3, os);
        os << " & ";
        print_rec(f->kids[1], 4, os);
      });
      break;
    case Formula::Kind::Or:
      paren(2, [&] {
        print_rec(f->kids[0], 2, os);
        os << " | ";
        print_rec(f->kids[1], 3, os);
      });
      break;
    case Formula::Kind::Implies:
      paren(1, [&] {
        print_rec(f->kids[0], 2, os);
        os << " -> ";
        print_rec(f->kids[1], 1, os);
      });
      break;
    case Formula::Kind::Iff:
      paren(0, [&] {
        print_rec(f->kids[0], 0, os);
        os << " <-> ";
        print_rec(f->kids[1], 1, os);
      });
      break;
  }
}

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_rec(f, 0, os);
  return os.str();
}

namespace {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.col); }

 private:
  void advance() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '$'))
        ++pos_;
      tok_.kind = Token::Kind::Ident;
      tok_.text = s_.substr(b, pos_ - b);
      col_ += static_cast<int>(pos_ - b);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      tok_.kind = Token::Kind::Int;
      tok_.text = s_.substr(b, pos_ - b);
      col_ += static_cast<int>(pos_ - b);
      return;
    }
    static const char* multi[] = {"<->", "->", "!="};
    for (const char* m : multi) {
      size_t len = std::string(m).size();
      if (s_.compare(pos_, len, m) == 0) {
        tok_.kind = Token::Kind::Punct;
        tok_.text = m;
        pos_ += len;
        col_ += static_cast<int>(len);
        return;
      }
    }
    tok_.kind = Token::Kind::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class FormulaParser {
 public:
  FormulaParser(Lexer& lex, const Language& lang) : lex_(lex), lang_(lang) {}

  FormulaPtr parse() { return iff(); }

 private:
  bool accept(const std::string& p) {
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
      lex_.next();
      return true;
    }
    return false;
  }

  FormulaPtr iff() {
    FormulaPtr f = imp();
    while (accept("<->")) f = f_iff(f, imp());
    return f;
  }

  FormulaPtr imp() {  // right-assoc
    FormulaPtr f = orx();
    if (accept("->")) return f_implies(f, imp());
    return f;
  }

  FormulaPtr orx() {
    FormulaPtr f = andx();
    while (accept("|")) f = f_or(f, andx());
    return f;
  }

  FormulaPtr andx() {
    FormulaPtr f = unary();
    while (accept("&")) f = f_and(f, unary());
    return f;
  }

  FormulaPtr unary() {
    if (accept("!")) return f_not(unary());
    if (accept("(")) {
      FormulaPtr f = iff();
      if (!accept(")")) lex_.fail("expected ')'");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected atom");
    Token id = lex_.next();
    if (id.text == "$T") return f_const(true);
    if (id.text == "$F") return f_const(false);
    if (accept("(")) {
      std::vector<std::string> vars;
      do {
        if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected variable");
        vars.push_back(lex_.next().text);
      } while (accept(","));
      if (!accept(")")) lex_.fail("expected ')'");
      auto idx = lang_.index_of(id.text);
      if (!idx) throw ParseError("unknown symbol " + id.text, id.line, id.col);
      if (lang_.arity(*idx) != static_cast<int>(vars.size()))
        throw ParseError("arity mismatch for " + id.text + ": expected " + std::to_string(lang_.arity(*idx)) +
                             " got " + std::to_string(vars.size()),
                         id.line, id.col);
      return f_atom(id.text, std::move(vars));
    }
    // VAR = VAR or VAR != VAR
    if (accept("=")) {
      if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected variable after '='");
      return f_equal(id.text, lex_.next().text);
    }
    if (accept("!=")) {
      if (lex_.peek().kind != Token::Kind::Ident) lex_.fail("expected variable after '!='");
      return f_not(f_equal(id.text, lex_.next().text));
    }
    throw ParseError("expected '(' or '=' after " + id.text, id.line, id.col);
  }

  Lexer& lex_;
  const Language& lang_;
};

void expect_ident(Lexer& lex, const std::string& word) {
  Token t = lex.next();
  if (t.kind != Token::Kind::Ident || t.text != word)
    throw ParseError("expected '" + word + "'", t.line, t.col);
}

void expect_punct(Lexer& lex, const std::string& p) {
  Token t = lex.next();
  if (t.kind != Token::Kind::Punct || t.text != p) throw ParseError("expected '" + p + "'", t.line, t.col);
}

}  // namespace

Theory parse_theory(const std::string& text) {
  Lexer lex(text);
  expect_ident(lex, "theory");
  Token name = lex.next();
  if (name.kind != Token::Kind::Ident) throw ParseError("expected theory name", name.line, name.col);
  expect_punct(lex, "{");
  expect_ident(lex, "language");
  expect_punct(lex, "{");
  std::vector<PredicateSymbol> syms;
  if (!(lex.peek().kind == Token::Kind::Punct && lex.peek().text == "}")) {
    for (;;) {
      Token id = lex.next();
      if (id.kind != Token::Kind::Ident) throw ParseError("expected symbol name", id.line, id.col);
      expect_punct(lex, "/");
      Token ar = lex.next();
      if (ar.kind != Token::Kind::Int) throw ParseError("expected arity", ar.line, ar.col);
      syms.push_back({id.text, std::stoi(ar.text)});
      if (lex.peek().kind == Token::Kind::Punct && lex.peek().text == ",") {
        lex.next();
        continue;
      }
      break;
    }
  }
  expect_punct(lex, "}");

  Theory t;
  t.name = name.text;
  t.language = Language(std::move(syms));
  while (lex.peek().kind == Token::Kind::Ident && lex.peek().text == "axiom") {
    lex.next();
    FormulaParser fp(lex, t.language);
    t.axioms.push_back(fp.parse());
    expect_punct(lex, ";");
  }
  expect_punct(lex, "}");
  t.validate();
  return t;
}

FormulaPtr parse_formula(const std::string& text, const Language& lang) {
  Lexer lex(text);
  FormulaParser fp(lex, lang);
  FormulaPtr f = fp.parse();
  if (lex.peek().kind != Token::Kind::End) lex.fail("trailing input after formula");
  return f;
}

std::string print_theory(const Theory& t) {
  std::ostringstream os;
  os << "theory " << t.name << " {\n  language { ";
  for (int i = 0; i < t.language.size(); ++i) {
    if (i) os << ", ";
    os << t.language.symbol(i).name << "/" << t.language.symbol(i).arity;
  }
  os << " }\n";
  for (const auto& a : t.axioms) os << "  axiom " << print_formula(a) << ";\n";
  os << "}\n";
  return os.str();
}

static void validate_rec(const FormulaPtr& f, const Language& lang) {
  if (f->kind == Formula::Kind::Atom) {
    int idx = lang.require(f->pred);
    if (lang.arity(idx) != static_cast<int>(f->vars.size()))
      throw std::invalid_argument("arity mismatch for " + f->pred);
  }
  for (const auto& k : f->kids) validate_rec(k, lang);
}

void Theory::validate() const {
  for (const auto& a : axioms) validate_rec(a, language);
}

static FormulaPtr rename_rec(const FormulaPtr& f, const std::map<std::string, std::string>& sub) {
  auto g = std::make_shared<Formula>(*f);
  for (auto& v : g->vars) {
    auto it = sub.find(v);
    if (it != sub.end()) v = it->second;
  }
  g->kids.clear();
  for (const auto& k : f->kids) g->kids.push_back(rename_rec(k, sub));
  return g;
}

FormulaPtr rename_vars(const FormulaPtr& f, const std::map<std::string, std::string>& sub) {
  return rename_rec(f, sub);
}

FormulaPtr substitute(const FormulaPtr& f, const VarPartition& classes) {
  std::vector<std::string> fv = formula_vars(f);
  std::set<std::string> covered;
  std::map<std::string, std::string> rep;  // var -> representative (first listed in its class)
  for (const auto& cls : classes) {
    if (cls.empty()) throw std::invalid_argument("substitute: empty class");
    for (const auto& v : cls) {
      if (!covered.insert(v).second) throw std::invalid_argument("substitute: variable repeated in partition");
      rep[v] = cls[0];
    }
  }
  for (const auto& v : fv)
    if (!covered.count(v)) throw std::invalid_argument("substitute: partition does not cover " + v);

  // Map representatives to fresh y1..ym in order of first occurrence of any
  // member of the class in the formula.
  std::map<std::string, std::string> fresh;
  int next = 1;
  std::map<std::string, std::string> full;
  for (const auto& v : fv) {
    const std::string& r = rep[v];
    if (!fresh.count(r)) fresh[r] = "y" + std::to_string(next++);
    full[v] = fresh[r];
  }
  return rename_rec(f, full);
}

}  // namespace theon
