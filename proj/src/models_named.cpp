#include <algorithm>
#include <cctype>
#include <sstream>

#include "theon/models.hpp"

namespace theon {

namespace {

Language graph_lang() { return Language({{"E", 2}}); }
Language hyper3_lang() { return Language({{"E", 3}}); }
Language order_lang() { return Language({{"lt", 2}}); }
Language perm_lang() { return Language({{"lt1", 2}, {"lt2", 2}}); }

void add_edge(Structure& g, int a, int b) {
  g.add("E", {a, b});
  g.add("E", {b, a});
}

Structure complete_graph(int n) {
  Structure g(graph_lang(), n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) add_edge(g, i, j);
  return g;
}

Structure path_graph(int n) {
  Structure g(graph_lang(), n);
  for (int i = 1; i < n; ++i) add_edge(g, i, i + 1);
  return g;
}

Structure cycle_graph(int n) {
  Structure g = path_graph(n);
  if (n >= 3) add_edge(g, n, 1);
  return g;
}

Structure transitive_tournament(int n) {
  Structure g(graph_lang(), n);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) g.add("E", {i, j});
  return g;
}

Structure directed_triangle() {
  Structure g(graph_lang(), 3);
  g.add("E", {1, 2});
  g.add("E", {2, 3});
  g.add("E", {3, 1});
  return g;
}

// Tournament on 4 vertices with outdegree multiset {3,1,1,1}: vertex 1
// beats everybody, 2-3-4 is a directed cycle.
Structure w4_tournament() {
  Structure g(graph_lang(), 4);
  for (int j = 2; j <= 4; ++j) g.add("E", {1, j});
  g.add("E", {2, 3});
  g.add("E", {3, 4});
  g.add("E", {4, 2});
  return g;
}

// Outdegrees {2,2,2,0}: vertex 4 loses to everybody, 1-2-3 is a cycle.
Structure l4_tournament() {
  Structure g(graph_lang(), 4);
  for (int i = 1; i <= 3; ++i) g.add("E", {i, 4});
  g.add("E", {1, 2});
  g.add("E", {2, 3});
  g.add("E", {3, 1});
  return g;
}

void add_hyperedge(Structure& g, int a, int b, int c) {
  int v[3] = {a, b, c};
  std::sort(v, v + 3);
  do {
    g.add("E", {v[0], v[1], v[2]});
  } while (std::next_permutation(v, v + 3));
}

Structure k4_minus() {
  Structure g(hyper3_lang(), 4);
  add_hyperedge(g, 1, 2, 3);
  add_hyperedge(g, 1, 2, 4);
  add_hyperedge(g, 1, 3, 4);
  return g;
}

Structure turan_graph(int n, int parts) {
  Structure g(graph_lang(), n);
  std::vector<int> part(static_cast<size_t>(n + 1));
  for (int v = 1; v <= n; ++v) part[static_cast<size_t>(v)] = (v - 1) % parts;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (part[static_cast<size_t>(i)] != part[static_cast<size_t>(j)]) add_edge(g, i, j);
  return g;
}

Structure star_order(int n) {
  Structure g(order_lang(), n);
  for (int i = 2; i <= n; ++i) g.add("lt", {i, 1});
  return g;
}

Structure perm_model(const std::string& one_line) {
  int n = static_cast<int>(one_line.size());
  std::vector<int> sigma(static_cast<size_t>(n + 1), 0);
  std::vector<char> seen(static_cast<size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    char c = one_line[static_cast<size_t>(i - 1)];
    if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("perm: digits 1..9 only");
    int v = c - '0';
    if (v < 1 || v > n || seen[static_cast<size_t>(v)]) throw std::invalid_argument("perm: not a permutation");
    seen[static_cast<size_t>(v)] = 1;
    sigma[static_cast<size_t>(i)] = v;
  }
  Structure g(perm_lang(), n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      if (i < j) g.add("lt1", {i, j});
      if (sigma[static_cast<size_t>(i)] < sigma[static_cast<size_t>(j)]) g.add("lt2", {i, j});
    }
  return g;
}

int int_param(const std::vector<std::string>& params, size_t i) {
  if (i >= params.size()) throw std::invalid_argument("missing numeric parameter");
  return std::stoi(params[i]);
}

}  // namespace

Structure make_named_model(const std::string& name, const std::vector<std::string>& params) {
  if (name == "K") return complete_graph(int_param(params, 0));
  if (name == "I") {
    Structure g(graph_lang(), int_param(params, 0));
    return g;
  }
  if (name == "P") return path_graph(int_param(params, 0));
  if (name == "C") return cycle_graph(int_param(params, 0));
  if (name == "Tr") return transitive_tournament(int_param(params, 0));
  if (name == "C3arrow") return directed_triangle();
  if (name == "W4") return w4_tournament();
  if (name == "L4") return l4_tournament();
  if (name == "K4minus") return k4_minus();
  if (name == "Turan") return turan_graph(int_param(params, 0), int_param(params, 1));
  if (name == "star") return star_order(int_param(params, 0));
  if (name == "perm") {
    if (params.empty()) throw std::invalid_argument("perm: missing one-line notation");
    return perm_model(params[0]);
  }
  // Compact forms like "K3", "P5", "Tr4".
  size_t d = 0;
  while (d < name.size() && !std::isdigit(static_cast<unsigned char>(name[d]))) ++d;
  if (d > 0 && d < name.size()) {
    std::string head = name.substr(0, d), tail = name.substr(d);
    if (head == "K" || head == "I" || head == "P" || head == "C" || head == "Tr")
      return make_named_model(head, {tail});
  }
  throw std::invalid_argument("unknown named model " + name);
}

namespace {

struct MdlLexer {
  const std::string& s;
  size_t pos = 0;
  explicit MdlLexer(const std::string& text) : s(text) {}
  void skip() {
    while (pos < s.size() &&
           (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '#')) {
      if (s[pos] == '#')
        while (pos < s.size() && s[pos] != '\n') ++pos;
      else
        ++pos;
    }
  }
  bool accept(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw std::invalid_argument(std::string("model parse: expected '") + c + "'");
  }
  std::string ident() {
    skip();
    size_t b = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) ++pos;
    if (b == pos) throw std::invalid_argument("model parse: expected identifier");
    return s.substr(b, pos - b);
  }
  int integer() {
    skip();
    size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (b == pos) throw std::invalid_argument("model parse: expected integer");
    return std::stoi(s.substr(b, pos - b));
  }
  bool peek(char c) {
    skip();
    return pos < s.size() && s[pos] == c;
  }
  bool done() {
    skip();
    return pos >= s.size();
  }
};

}  // namespace

Structure parse_model(const std::string& text, const Language* lang) {
  MdlLexer lex(text);
  if (lex.ident() != "model") throw std::invalid_argument("model parse: expected 'model'");
  lex.expect('{');
  if (lex.ident() != "n") throw std::invalid_argument("model parse: expected 'n'");
  lex.expect('=');
  int n = lex.integer();

  struct Rel {
    std::string pred;
    int declared_arity = 0;  // from optional "name/arity"
    std::vector<Tuple> tuples;
  };
  std::vector<Rel> rels;
  while (!lex.peek('}')) {
    Rel r;
    r.pred = lex.ident();
    if (lex.accept('/')) r.declared_arity = lex.integer();
    lex.expect('=');
    while (lex.peek('(')) {
      lex.expect('(');
      Tuple t;
      t.push_back(lex.integer());
      while (lex.accept(',')) t.push_back(lex.integer());
      lex.expect(')');
      r.tuples.push_back(std::move(t));
    }
    rels.push_back(std::move(r));
  }
  lex.expect('}');

  Language language;
  if (lang) {
    language = *lang;
  } else {
    std::vector<PredicateSymbol> syms;
    for (const auto& r : rels) {
      int arity = r.declared_arity;
      if (arity == 0) {
        if (r.tuples.empty())
          throw std::invalid_argument("model parse: cannot infer arity of " + r.pred + " (use name/arity)");
        arity = static_cast<int>(r.tuples[0].size());
      }
      syms.push_back({r.pred, arity});
    }
    language = Language(std::move(syms));
  }

  Structure m(language, n);
  for (const auto& r : rels)
    for (const auto& t : r.tuples) m.add(r.pred, t);
  return m;
}

std::string print_model(const Structure& m) {
  std::ostringstream os;
  os << "model { n = " << m.n;
  for (int p = 0; p < m.language.size(); ++p) {
    os << "  " << m.language.symbol(p).name << " =";
    for (const auto& t : m.relations[static_cast<size_t>(p)]) {
      os << " (";
      for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ")";
    }
  }
  os << " }";
  return os.str();
}

}  // namespace theon
