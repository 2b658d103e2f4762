#include "efl/formula.hpp"

#include <functional>

namespace efl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Kind k, std::string name, std::vector<Formula> children) {
  std::size_t h = mix(static_cast<std::size_t>(k) + 1, std::hash<std::string>{}(name));
  std::size_t sz = 1;
  for (const auto& c : children) {
    h = mix(h, c.hash());
    sz += c.size();
  }
  return Formula(std::make_shared<const Node>(Node{k, std::move(name), std::move(children), h, sz}));
}

Formula Formula::nom(Nominal n) { return make(Kind::Nom, std::move(n), {}); }
Formula Formula::prop(Prop p) { return make(Kind::Prop, std::move(p), {}); }
Formula Formula::falsum() {
  static const Formula f = make(Kind::Falsum, "", {});
  return f;
}
Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(Kind::Implies, "", {std::move(lhs), std::move(rhs)});
}
Formula Formula::at(Nominal n, Formula body) { return make(Kind::At, std::move(n), {std::move(body)}); }
Formula Formula::fbox(Formula body) { return make(Kind::FBox, "", {std::move(body)}); }
Formula Formula::kbox(Formula body) { return make(Kind::KBox, "", {std::move(body)}); }

Formula Formula::top() { return implies(falsum(), falsum()); }
Formula Formula::neg(Formula f) { return implies(std::move(f), falsum()); }
Formula Formula::conj(Formula a, Formula b) { return neg(implies(std::move(a), neg(std::move(b)))); }
Formula Formula::disj(Formula a, Formula b) { return implies(neg(std::move(a)), std::move(b)); }
Formula Formula::iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }
Formula Formula::fdia(Formula f) { return neg(fbox(neg(std::move(f)))); }
Formula Formula::kdia(Formula f) { return neg(kbox(neg(std::move(f)))); }

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsum();
  Formula acc = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (int c = compare(ca[i], cb[i]); c != 0) return c;
  }
  return 0;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  return compare(a, b) == 0;
}

bool is_negation(const Formula& f) { return f.is(Kind::Implies) && f.rhs().is(Kind::Falsum); }

std::optional<Nominal> as_friend_of(const Formula& f) {
  if (!is_negation(f)) return std::nullopt;
  const Formula& box = f.lhs();
  if (!box.is(Kind::FBox) || !is_negation(box.body())) return std::nullopt;
  const Formula& n = box.body().lhs();
  if (!n.is(Kind::Nom)) return std::nullopt;
  return n.name();
}

bool is_at_prefixed(const Formula& f) { return f.is(Kind::At); }

Nominal UniformSubstitution::nominal(const Nominal& n) const {
  auto it = noms.find(n);
  return it == noms.end() ? n : it->second;
}

Formula rename_nominals(const Formula& f, const std::map<Nominal, Nominal>& m) {
  if (m.empty()) return f;
  switch (f.kind()) {
    case Kind::Nom: {
      auto it = m.find(f.name());
      return it == m.end() ? f : Formula::nom(it->second);
    }
    case Kind::Prop:
    case Kind::Falsum:
      return f;
    case Kind::Implies: {
      Formula l = rename_nominals(f.lhs(), m);
      Formula r = rename_nominals(f.rhs(), m);
      if (l == f.lhs() && r == f.rhs()) return f;
      return Formula::implies(std::move(l), std::move(r));
    }
    case Kind::At: {
      auto it = m.find(f.name());
      Formula b = rename_nominals(f.body(), m);
      if (it == m.end() && b == f.body()) return f;
      return Formula::at(it == m.end() ? f.name() : it->second, std::move(b));
    }
    case Kind::FBox: {
      Formula b = rename_nominals(f.body(), m);
      return b == f.body() ? f : Formula::fbox(std::move(b));
    }
    case Kind::KBox: {
      Formula b = rename_nominals(f.body(), m);
      return b == f.body() ? f : Formula::kbox(std::move(b));
    }
  }
  return f;
}

Formula substitute_agent(const Formula& f, const Nominal& n, const Nominal& k) {
  if (n == k) return f;
  return rename_nominals(f, {{k, n}});
}

Formula apply_substitution(const Formula& f, const UniformSubstitution& s) {
  if (s.empty()) return f;
  switch (f.kind()) {
    case Kind::Nom:
      return Formula::nom(s.nominal(f.name()));
    case Kind::Prop: {
      auto it = s.props.find(f.name());
      return it == s.props.end() ? f : it->second;
    }
    case Kind::Falsum:
      return f;
    case Kind::Implies:
      return Formula::implies(apply_substitution(f.lhs(), s), apply_substitution(f.rhs(), s));
    case Kind::At:
      return Formula::at(s.nominal(f.name()), apply_substitution(f.body(), s));
    case Kind::FBox:
      return Formula::fbox(apply_substitution(f.body(), s));
    case Kind::KBox:
      return Formula::kbox(apply_substitution(f.body(), s));
  }
  return f;
}

void collect_symbols(const Formula& f, Symbols& out) {
  switch (f.kind()) {
    case Kind::Nom:
      out.nominals.insert(f.name());
      return;
    case Kind::Prop:
      out.props.insert(f.name());
      return;
    case Kind::Falsum:
      return;
    case Kind::Implies:
      collect_symbols(f.lhs(), out);
      collect_symbols(f.rhs(), out);
      return;
    case Kind::At:
      out.nominals.insert(f.name());
      collect_symbols(f.body(), out);
      return;
    case Kind::FBox:
    case Kind::KBox:
      collect_symbols(f.body(), out);
      return;
  }
}

Symbols symbols_of(const Formula& f) {
  Symbols s;
  collect_symbols(f, s);
  return s;
}

bool occurs_nominal(const Formula& f, const Nominal& n) {
  switch (f.kind()) {
    case Kind::Nom:
      return f.name() == n;
    case Kind::Prop:
    case Kind::Falsum:
      return false;
    case Kind::Implies:
      return occurs_nominal(f.lhs(), n) || occurs_nominal(f.rhs(), n);
    case Kind::At:
      return f.name() == n || occurs_nominal(f.body(), n);
    case Kind::FBox:
    case Kind::KBox:
      return occurs_nominal(f.body(), n);
  }
  return false;
}

namespace {

void occurrences(const Formula& f, std::vector<Nominal>& out) {
  switch (f.kind()) {
    case Kind::Nom: out.push_back(f.name()); break;
    case Kind::Prop:
    case Kind::Falsum: break;
    case Kind::Implies:
      occurrences(f.lhs(), out);
      occurrences(f.rhs(), out);
      break;
    case Kind::At:
      out.push_back(f.name());
      occurrences(f.body(), out);
      break;
    case Kind::FBox:
    case Kind::KBox: occurrences(f.body(), out); break;
  }
}

// `idx` counts down the occurrences still to skip.
Formula replace_rec(const Formula& f, std::size_t& idx, const Nominal& n) {
  switch (f.kind()) {
    case Kind::Nom:
      if (idx-- == 0) return Formula::nom(n);
      return f;
    case Kind::Prop:
    case Kind::Falsum: return f;
    case Kind::Implies: {
      Formula l = replace_rec(f.lhs(), idx, n);
      Formula r = replace_rec(f.rhs(), idx, n);
      return Formula::implies(l, r);
    }
    case Kind::At: {
      if (idx-- == 0) return Formula::at(n, f.body());
      return Formula::at(f.name(), replace_rec(f.body(), idx, n));
    }
    case Kind::FBox: return Formula::fbox(replace_rec(f.body(), idx, n));
    case Kind::KBox: return Formula::kbox(replace_rec(f.body(), idx, n));
  }
  return f;
}

}  // namespace

std::vector<Nominal> nominal_occurrences(const Formula& f) {
  std::vector<Nominal> out;
  occurrences(f, out);
  return out;
}

Formula replace_occurrence(const Formula& f, std::size_t idx, const Nominal& n) { return replace_rec(f, idx, n); }

Nominal fresh_nominal(const std::set<Nominal>& used, const std::string& base) {
  for (std::size_t i = 0;; ++i) {
    Nominal c = base + std::to_string(i);
    if (!used.count(c)) return c;
  }
}

}  // namespace efl
