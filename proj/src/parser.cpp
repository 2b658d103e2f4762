#include "efl/parser.hpp"

#include <cctype>
#include <vector>

namespace efl {

namespace {

enum class Tok {
  LParen, RParen, Not, Box, Dia, FDia, Iff, Imp, Or, And, At, F, False, True, Prop, Nom, End
};

struct Token {
  Tok tok;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) { return c >= 'a' && c <= 'z'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t b = i;
    auto emit = [&](Tok t, std::size_t len) {
      out.push_back({t, std::string(s.substr(b, len)), {b, b + len}});
      i = b + len;
    };
    if (starts("<->")) emit(Tok::Iff, 3);
    else if (starts("<F>")) emit(Tok::FDia, 3);
    else if (starts("<>")) emit(Tok::Dia, 2);
    else if (starts("[]")) emit(Tok::Box, 2);
    else if (starts("->")) emit(Tok::Imp, 2);
    else if (c == '(') emit(Tok::LParen, 1);
    else if (c == ')') emit(Tok::RParen, 1);
    else if (c == '!') emit(Tok::Not, 1);
    else if (c == '|') emit(Tok::Or, 1);
    else if (c == '&') emit(Tok::And, 1);
    else if (c == '@') emit(Tok::At, 1);
    else if (c == 'F') emit(Tok::F, 1);
    else if (c == '\'') {
      std::size_t j = i + 1;
      if (j >= s.size() || !ident_start(s[j])) throw ParseError("malformed nominal", {b, j});
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Nom, std::string(s.substr(b + 1, j - b - 1)), {b, j}});
      i = j;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string word(s.substr(b, j - b));
      Tok t = word == "false" ? Tok::False : word == "true" ? Tok::True : Tok::Prop;
      out.push_back({t, word, {b, j}});
      i = j;
    } else {
      throw ParseError(std::string("unknown token '") + c + "'", {b, b + 1});
    }
  }
  out.push_back({Tok::End, "", {s.size(), s.size()}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula parse() {
    Formula f = iff();
    if (peek().tok == Tok::RParen) throw ParseError("unbalanced ')'", peek().span);
    if (peek().tok != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().span);
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().tok != t) return false;
    ++pos_;
    return true;
  }

  Formula iff() {
    Formula f = imp();
    while (accept(Tok::Iff)) f = Formula::iff(f, imp());
    return f;
  }
  Formula imp() {
    Formula f = disj();
    if (accept(Tok::Imp)) return Formula::implies(f, imp());
    return f;
  }
  Formula disj() {
    Formula f = conj();
    while (accept(Tok::Or)) f = Formula::disj(f, conj());
    return f;
  }
  Formula conj() {
    Formula f = unary();
    while (accept(Tok::And)) f = Formula::conj(f, unary());
    return f;
  }
  Formula unary() {
    const Token& t = peek();
    switch (t.tok) {
      case Tok::Not: next(); return Formula::neg(unary());
      case Tok::Box: next(); return Formula::kbox(unary());
      case Tok::Dia: next(); return Formula::kdia(unary());
      case Tok::F: next(); return Formula::fbox(unary());
      case Tok::FDia: next(); return Formula::fdia(unary());
      case Tok::At: {
        next();
        const Token& n = next();
        if (n.tok != Tok::Nom) throw ParseError("expected nominal after '@'", n.span);
        return Formula::at(n.text, unary());
      }
      default:
        return atom();
    }
  }
  Formula atom() {
    const Token& t = next();
    switch (t.tok) {
      case Tok::False: return Formula::falsum();
      case Tok::True: return Formula::top();
      case Tok::Prop: return Formula::prop(t.text);
      case Tok::Nom: return Formula::nom(t.text);
      case Tok::LParen: {
        Formula f = iff();
        const Token& r = next();
        if (r.tok != Tok::RParen) throw ParseError("unbalanced '('", t.span);
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.span);
      case Tok::RParen: throw ParseError("unbalanced ')'", t.span);
      default: throw ParseError("unexpected '" + t.text + "'", t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Precedence levels: 2 implication, 3 or, 4 and, 5 prefix/atom.
struct Renderer {
  RenderMode mode;

  static bool is_top(const Formula& f) { return f.is(Kind::Implies) && f.lhs().is(Kind::Falsum) && f.rhs().is(Kind::Falsum); }

  std::string paren(const std::string& s, bool p) const { return p ? "(" + s + ")" : s; }

  // Returns rendered text and its precedence level.
  std::pair<std::string, int> go(const Formula& f) const {
    if (mode == RenderMode::Sugar) {
      if (is_top(f)) return {"true", 5};
      if (is_negation(f)) {
        const Formula& x = f.lhs();
        if ((x.is(Kind::FBox) || x.is(Kind::KBox)) && is_negation(x.body())) {
          return {std::string(x.is(Kind::FBox) ? "<F> " : "<> ") + operand(x.body().lhs()), 5};
        }
        if (x.is(Kind::Implies) && is_negation(x.rhs())) {
          auto [l, ll] = go(x.lhs());
          auto [r, rl] = go(x.rhs().lhs());
          return {paren(l, ll < 4) + " & " + paren(r, rl <= 4), 4};
        }
        return {"!" + operand(x), 5};
      }
      if (f.is(Kind::Implies) && is_negation(f.lhs())) {
        auto [l, ll] = go(f.lhs().lhs());
        auto [r, rl] = go(f.rhs());
        return {paren(l, ll < 3) + " | " + paren(r, rl <= 3), 3};
      }
    }
    switch (f.kind()) {
      case Kind::Nom: return {"'" + f.name(), 5};
      case Kind::Prop: return {f.name(), 5};
      case Kind::Falsum: return {"false", 5};
      case Kind::Implies: {
        auto [l, ll] = go(f.lhs());
        auto [r, rl] = go(f.rhs());
        return {paren(l, ll <= 2) + " -> " + paren(r, rl < 2), 2};
      }
      case Kind::At: return {"@'" + f.name() + " " + operand(f.body()), 5};
      case Kind::FBox: return {"F " + operand(f.body()), 5};
      case Kind::KBox: return {"[] " + operand(f.body()), 5};
    }
    return {"", 5};
  }

  std::string operand(const Formula& f) const {
    auto [s, lvl] = go(f);
    return paren(s, lvl < 5);
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

Nominal parse_nominal(std::string_view text) {
  if (text.size() < 2 || text[0] != '\'' || !is_valid_identifier(text.substr(1))) {
    throw ParseError("malformed nominal '" + std::string(text) + "'", {0, text.size()});
  }
  return Nominal(text.substr(1));
}

bool is_valid_identifier(std::string_view id) {
  if (id.empty() || !ident_start(id[0])) return false;
  for (char c : id) {
    if (!ident_char(c)) return false;
  }
  return id != "false" && id != "true";
}

std::string render_formula(const Formula& f, RenderMode mode) { return Renderer{mode}.go(f).first; }

}  // namespace efl
