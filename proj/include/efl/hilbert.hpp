#pragma once

// The Hilbert system: necessity forms, proof objects and their checker, the
// formulaic translation of tree sequents, and the translations between
// Hilbert proofs and tree sequent derivations.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "efl/derivation.hpp"

namespace efl {

// One layer of a necessity form: "ante -> #" or "@n [] #".
struct NecessityStep {
  enum class Kind { Antecedent, AtBox } kind = Kind::Antecedent;
  Formula ante;     // Antecedent
  Nominal nominal;  // AtBox

  static NecessityStep antecedent(Formula f) { return {Kind::Antecedent, std::move(f), {}}; }
  static NecessityStep at_box(Nominal n) { return {Kind::AtBox, Formula::falsum(), std::move(n)}; }
  bool operator==(const NecessityStep&) const = default;
};

// Steps outermost first; the hole sits after the last step.
using NecessityForm = std::vector<NecessityStep>;

Formula instantiate_necessity_form(const NecessityForm& form, const Formula& phi);
// Every (L, core) with L(core) = chi, outermost first.
std::vector<std::pair<NecessityForm, Formula>> decompose_necessity_forms(const Formula& chi);

struct Justification {
  enum class Kind { Axiom, MP, NecBox, NecF, NecAt, US, Name, LBG } kind = Kind::Axiom;
  std::string axiom;                         // Axiom
  std::optional<UniformSubstitution> subst;  // Axiom (optional), US
  std::size_t i = 0, j = 0;                  // premise lines; MP uses i (phi) and j (phi -> psi)
  Nominal n, m;                              // NecAt, Name: n; LBG: n, m
  NecessityForm form;                        // LBG
  std::optional<Formula> phi;                // LBG

  bool operator==(const Justification&) const = default;
};

struct HilbertLine {
  Formula formula;
  Justification just;
  bool operator==(const HilbertLine&) const = default;
};

struct HilbertProof {
  std::vector<HilbertLine> lines;
  const Formula& conclusion() const;  // throws on an empty proof
  bool operator==(const HilbertProof&) const = default;
};

struct HilbertIssue {
  std::size_t line;
  std::string message;
};

struct HilbertCheck {
  std::vector<HilbertIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string report() const;
};

// Axiom schemata by name: the base system, plus T, 4, B for the box logic and
// ri0, ri1, ... for the regular implications of `extra`.
std::optional<Formula> axiom_schema(const std::string& name, const FrameClassSpec& extra);
std::vector<std::string> axiom_names(const FrameClassSpec& extra);

// Propositional validity, with maximal non-Boolean subformulas as atoms.
bool is_tautology(const Formula& f);

HilbertCheck check_hilbert(const HilbertProof& proof, const FrameClassSpec& extra);

// The formula read off the tree sequent at label alpha.
Formula formulaic_translation(const TreeSequent& s, const Label& alpha);

// A Hilbert proof of the root translation of d's conclusion. Throws
// std::invalid_argument if d does not check.
HilbertProof elaborate_to_hilbert(const Derivation& d, const SystemConfig& cfg);

// Derivation of the premise of the target rule instance, which must be an
// application of ->R, boxR, @R or @L to d's conclusion; uses cut.
Derivation invert_rule(const Derivation& d, const RuleInstance& target, const SystemConfig& cfg);

// A derivation of  =>_T alpha:@n phi  from a Hilbert proof of phi.
Derivation embed_hilbert(const HilbertProof& proof, const LabelTree& tree, const Label& alpha, const Nominal& n,
                         const SystemConfig& cfg);

}  // namespace efl
