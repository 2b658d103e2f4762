#pragma once

// Formula language of the epistemic logic of friendship.
//
// Formulas are immutable trees over seven core constructors:
//   nominal, proposition, falsum, implication, @_n, F, and box.
// The Boolean and modal abbreviations (not, and, or, iff, top, <F>, diamond)
// are expanded when they are built, so two formulas compare equal exactly
// when their core trees coincide.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace efl {

using Nominal = std::string;  // written 'n in concrete syntax
using Prop = std::string;

enum class Kind : std::uint8_t { Nom, Prop, Falsum, Implies, At, FBox, KBox };

class Formula {
 public:
  // Core constructors.
  static Formula nom(Nominal n);
  static Formula prop(Prop p);
  static Formula falsum();
  static Formula implies(Formula lhs, Formula rhs);
  static Formula at(Nominal n, Formula body);
  static Formula fbox(Formula body);
  static Formula kbox(Formula body);

  // Abbreviations; all return core formulas.
  static Formula top();
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula fdia(Formula f);  // <F>f := !F!f
  static Formula kdia(Formula f);  // <>f := ![]!f

  // Right-nested folds with the empty cases top and falsum.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }
  // Name of a nominal, proposition, or the subscript of an @.
  const std::string& name() const { return node_->name; }
  // Left/only child; right child of an implication.
  const Formula& lhs() const { return node_->children[0]; }
  const Formula& rhs() const { return node_->children[1]; }
  const Formula& body() const { return node_->children[0]; }

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  // Total structural order; deterministic across runs.
  friend int compare(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Formula> children;
    std::size_t hash;
    std::size_t size;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

// Recognizers for shapes that the calculus treats specially.
bool is_negation(const Formula& f);                    // x -> false
std::optional<Nominal> as_friend_of(const Formula& f);  // <F>'m  (i.e. (F('m -> false)) -> false)
bool is_at_prefixed(const Formula& f);

struct UniformSubstitution {
  std::map<Prop, Formula> props;
  std::map<Nominal, Nominal> noms;

  bool empty() const { return props.empty() && noms.empty(); }
  Nominal nominal(const Nominal& n) const;
  bool operator==(const UniformSubstitution&) const = default;
};

struct Symbols {
  std::set<Nominal> nominals;
  std::set<Prop> props;
};

// phi[n/k]: every occurrence of k, as an atom or as an @-subscript, becomes n.
Formula substitute_agent(const Formula& f, const Nominal& n, const Nominal& k);
// Simultaneous substitution.
Formula apply_substitution(const Formula& f, const UniformSubstitution& s);
// Simultaneous nominal renaming (identity outside the map).
Formula rename_nominals(const Formula& f, const std::map<Nominal, Nominal>& m);

// Nominal occurrences in preorder; an @-subscript precedes its body.
std::vector<Nominal> nominal_occurrences(const Formula& f);
// Replaces the idx-th occurrence (same numbering) by n.
Formula replace_occurrence(const Formula& f, std::size_t idx, const Nominal& n);

Symbols symbols_of(const Formula& f);
void collect_symbols(const Formula& f, Symbols& out);
bool occurs_nominal(const Formula& f, const Nominal& n);

// Formulas are built in core form already; desugar is the identity on them
// and exists so callers can state the normalization explicitly.
inline Formula desugar(const Formula& f) { return f; }

// First nominal of the form base, base0, base1, ... not in `used`.
Nominal fresh_nominal(const std::set<Nominal>& used, const std::string& base = "m");

}  // namespace efl

template <>
struct std::hash<efl::Formula> {
  std::size_t operator()(const efl::Formula& f) const noexcept { return f.hash(); }
};
