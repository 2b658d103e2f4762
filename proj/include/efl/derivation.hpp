#pragma once

// Derivations in the tree sequent calculus, the checking kernel, and the
// admissible transformations (weakening, uniform substitution).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "efl/frame.hpp"
#include "efl/sequent.hpp"

namespace efl {

enum class Rule { Bot, Id, Rep1, Rep2, Ref, Rigid, ImpR, ImpL, AtR, AtL, FR, FL, BoxR, BoxL, Wlab, Cut, Ri };

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(std::string_view name);

// Which fields are meaningful depends on the rule:
//   bot, id, impR, impL, atR, atL: principal
//   rep1, rep2: principal is the equality a:@n 'm, tmpl the formula with
//               the variable `nominal` marking rewritten positions
//   ref: label, nominal        rigid: principal, label (target)
//   FR: principal, nominal (fresh)      FL: principal, nominal
//   boxR: principal, label (new child)  boxL: principal, label (target)
//   wlab: label (added)        cut: principal (cut formula)
//   ri: theta, inst, label
struct RuleInstance {
  Rule rule = Rule::Id;
  std::optional<LabelledFormula> principal;
  std::optional<Label> label;
  std::optional<Nominal> nominal;
  std::optional<Formula> tmpl;
  std::optional<RegularImplication> theta;
  std::map<Nominal, Nominal> inst;

  bool operator==(const RuleInstance&) const = default;
};

struct Derivation {
  TreeSequent sequent;
  RuleInstance rule;
  std::vector<Derivation> premises;

  int height() const;
  std::size_t node_count() const;
  bool uses_cut() const;
  bool operator==(const Derivation&) const = default;
};

struct SystemConfig {
  FrameClassSpec spec;
  bool allow_cut = true;
};

struct Violation {
  std::string path;  // "root", "root.0.1", ...
  std::string rule;
  std::string message;
};

struct CheckResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string report() const;
};

CheckResult check_derivation(const Derivation& d, const SystemConfig& cfg);

// Side condition of box-left: K n-child, S4 reflexive-transitive, S5
// equivalence closure of the n-child relation. Throws if a label is outside t.
bool reachable_box(const Label& from, const Label& to, const Nominal& n, const LabelTree& t, BoxLogic logic);

enum class Side { Left, Right };

// Height-preserving admissible transformations. Both throw
// std::invalid_argument on precondition failures.
Derivation weaken(const Derivation& d, const LabelledFormula& extra, Side side);
Derivation substitute_derivation(const Derivation& d, const UniformSubstitution& s);

// Nominals of every sequent and instance in the derivation.
std::set<Nominal> derivation_nominals(const Derivation& d);

}  // namespace efl
