#pragma once

// Frame classes: the box discipline (K, S4, S5) and regular implications
// over agent equality and friendship.

#include <string>
#include <string_view>
#include <vector>

#include "efl/formula.hpp"

namespace efl {

enum class BoxLogic { K, S4, S5 };

std::string to_string(BoxLogic l);
BoxLogic parse_box_logic(std::string_view s);  // "k" | "s4" | "s5", case-insensitive

struct RelAtom {
  enum class Type { Eq, Friend } type;
  Nominal lhs;
  Nominal rhs;

  Formula formula() const;  // @lhs rhs  or  @lhs <F> rhs
  RelAtom renamed(const std::map<Nominal, Nominal>& m) const;
  auto operator<=>(const RelAtom&) const = default;
};

// (rho_1 & ... & rho_h) -> (rho'_1 | ... | rho'_l); h and l may be zero.
struct RegularImplication {
  std::vector<RelAtom> antecedents;
  std::vector<RelAtom> consequents;

  Formula formula() const;
  std::set<Nominal> variables() const;
  // "atoms => atoms", atoms comma-separated, each @'n'm or @'n<F>'m.
  // The names "irr", "sym", "refl" expand to the usual friendship properties.
  static RegularImplication parse(std::string_view spec);
  std::string str() const;

  auto operator<=>(const RegularImplication&) const = default;
};

// Recognizes an atom shape in a formula: @a 'b or @a <F>'b.
std::optional<RelAtom> as_rel_atom(const Formula& f);

struct FrameClassSpec {
  BoxLogic logic = BoxLogic::K;
  std::vector<RegularImplication> theta;

  bool has_rule(const RegularImplication& ri) const;
};

}  // namespace efl
