#include "efl/frame.hpp"

#include <algorithm>
#include <cctype>

#include "efl/parser.hpp"
#include "efl/sequent.hpp"

namespace efl {

std::string to_string(BoxLogic l) {
  switch (l) {
    case BoxLogic::K: return "k";
    case BoxLogic::S4: return "s4";
    case BoxLogic::S5: return "s5";
  }
  return "k";
}

BoxLogic parse_box_logic(std::string_view s) {
  std::string low(s);
  std::transform(low.begin(), low.end(), low.begin(), [](unsigned char c) { return std::tolower(c); });
  if (low == "k") return BoxLogic::K;
  if (low == "s4") return BoxLogic::S4;
  if (low == "s5") return BoxLogic::S5;
  throw SchemaError("logic", "unknown logic '" + std::string(s) + "'");
}

Formula RelAtom::formula() const {
  if (type == Type::Eq) return Formula::at(lhs, Formula::nom(rhs));
  return Formula::at(lhs, Formula::fdia(Formula::nom(rhs)));
}

RelAtom RelAtom::renamed(const std::map<Nominal, Nominal>& m) const {
  auto get = [&](const Nominal& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  return RelAtom{type, get(lhs), get(rhs)};
}

std::optional<RelAtom> as_rel_atom(const Formula& f) {
  if (!f.is(Kind::At)) return std::nullopt;
  if (f.body().is(Kind::Nom)) return RelAtom{RelAtom::Type::Eq, f.name(), f.body().name()};
  if (auto m = as_friend_of(f.body())) return RelAtom{RelAtom::Type::Friend, f.name(), *m};
  return std::nullopt;
}

Formula RegularImplication::formula() const {
  std::vector<Formula> a, c;
  for (const auto& r : antecedents) a.push_back(r.formula());
  for (const auto& r : consequents) c.push_back(r.formula());
  return Formula::implies(Formula::conj_all(a), Formula::disj_all(c));
}

std::set<Nominal> RegularImplication::variables() const {
  std::set<Nominal> v;
  for (const auto* side : {&antecedents, &consequents}) {
    for (const auto& r : *side) {
      v.insert(r.lhs);
      v.insert(r.rhs);
    }
  }
  return v;
}

namespace {

std::vector<RelAtom> parse_atoms(std::string_view text) {
  std::vector<RelAtom> out;
  std::size_t start = 0;
  auto blank = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
  };
  if (blank(text)) return out;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    auto atom = as_rel_atom(parse_formula(piece));
    if (!atom) throw SchemaError("frame", "'" + std::string(piece) + "' is not an @'n'm or @'n<F>'m atom");
    out.push_back(*atom);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

RegularImplication RegularImplication::parse(std::string_view spec) {
  using T = RelAtom::Type;
  if (spec == "irr") return {{{T::Friend, "n", "n"}}, {}};
  if (spec == "sym") return {{{T::Friend, "n", "m"}}, {{T::Friend, "m", "n"}}};
  if (spec == "refl") return {{}, {{T::Friend, "n", "n"}}};
  std::size_t arrow = spec.find("=>");
  if (arrow == std::string_view::npos) throw SchemaError("frame", "missing '=>' in '" + std::string(spec) + "'");
  try {
    return {parse_atoms(spec.substr(0, arrow)), parse_atoms(spec.substr(arrow + 2))};
  } catch (const ParseError& e) {
    throw SchemaError("frame", e.what());
  }
}

std::string RegularImplication::str() const {
  auto side = [](const std::vector<RelAtom>& atoms) {
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) s += ", ";
      s += "@'" + atoms[i].lhs + (atoms[i].type == RelAtom::Type::Friend ? " <F>'" : " '") + atoms[i].rhs;
    }
    return s;
  };
  std::string a = side(antecedents), c = side(consequents);
  return a + (a.empty() ? "=>" : " =>") + (c.empty() ? "" : " " + c);
}

bool FrameClassSpec::has_rule(const RegularImplication& ri) const {
  return std::find(theta.begin(), theta.end(), ri) != theta.end();
}

}  // namespace efl
