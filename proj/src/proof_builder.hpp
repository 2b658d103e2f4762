#pragma once

// Incremental construction of Hilbert proofs: primitive steps, propositional
// reasoning through Taut, monotonicity under modalities, and a library of
// derived schemata that are proved once per proof and instantiated by US.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "efl/hilbert.hpp"

namespace efl::detail {

// A modality a formula can be pushed under: [], F, or @n.
struct Modality {
  enum class Kind { Box, F, At } kind;
  Nominal nominal;

  static Modality box() { return {Kind::Box, {}}; }
  static Modality f() { return {Kind::F, {}}; }
  static Modality at(Nominal n) { return {Kind::At, std::move(n)}; }
  Formula apply(const Formula& x) const;
};

class ProofBuilder {
 public:
  explicit ProofBuilder(const FrameClassSpec& spec) : spec_(spec) {}

  const Formula& formula(std::size_t i) const { return proof_.lines.at(i).formula; }
  HilbertProof take() { return std::move(proof_); }
  // Moves line i to the end, so the proof concludes with it.
  void conclude(std::size_t i);

  std::size_t axiom(const std::string& name, const UniformSubstitution& s = {});
  std::size_t taut(const Formula& f);
  std::size_t mp(std::size_t i, std::size_t j);
  std::size_t nec(std::size_t i, const Modality& m);
  std::size_t us(std::size_t i, const UniformSubstitution& s);
  std::size_t name(std::size_t i, const Nominal& n);
  std::size_t lbg(std::size_t i, const NecessityForm& form, const Nominal& n, const Nominal& m, const Formula& phi);

  // target from the given lines by one Taut line and modus ponens.
  std::size_t prop(const std::vector<std::size_t>& premises, const Formula& target);

  // From  A1 -> ... -> Ak -> B  derive  MA1 -> ... -> MAk -> MB.
  std::size_t lift(std::size_t i, std::size_t k, const Modality& m);
  // Both [] and then @n.
  std::size_t lift_at_box(std::size_t i, std::size_t k, const Nominal& n);

  // Derived schemata (see proof_builder.cpp for their statements) instantiated.
  std::size_t lemma(const std::string& name, const UniformSubstitution& s);

  // @n m -> (psi[n/k] -> psi[m/k])  (forward)  or  (psi[m/k] -> psi[n/k]).
  std::size_t rep(const Nominal& n, const Nominal& m, const Nominal& k, const Formula& psi, bool forward);

 private:
  std::size_t add(Formula f, Justification j);
  std::size_t build_lemma(const std::string& name);

  const FrameClassSpec& spec_;
  HilbertProof proof_;
  std::unordered_map<Formula, std::size_t> index_;
  std::map<std::string, std::size_t> lemmas_;
};

UniformSubstitution subst(std::initializer_list<std::pair<const Prop, Formula>> props,
                          std::initializer_list<std::pair<const Nominal, Nominal>> noms = {});

}  // namespace efl::detail
