#pragma once

// Fuel-bounded cut-free proof search with countermodel extraction.

#include <cstdint>
#include <optional>

#include "efl/derivation.hpp"
#include "efl/semantics.hpp"

namespace efl {

struct SearchConfig {
  std::uint64_t fuel = 10000;  // rule applications
  std::uint64_t seed = 0;
  // Experimental: leave a box witness to an ancestor label with the same
  // content (S4/S5 only). Not known to preserve completeness.
  bool blocking = false;
};

struct SearchStats {
  std::uint64_t rules = 0;
  std::uint64_t labels = 0;
  std::uint64_t nominals = 0;
  // Open saturated branches whose derived model failed verification.
  std::uint64_t unverified = 0;
};

enum class Verdict { Proved, Refuted, Unknown };
std::string to_string(Verdict v);

struct SearchOutcome {
  Verdict verdict = Verdict::Unknown;
  std::optional<Derivation> derivation;      // Proved
  std::optional<Countermodel> countermodel;  // Refuted
  SearchStats stats;
};

SearchOutcome prove(const TreeSequent& s, const SystemConfig& cfg, const SearchConfig& sc = {});

// The derived model of an open branch: worlds are labels, agents are classes
// of nominals under the branch's equalities; the assignment is the identity.
Countermodel extract_countermodel(const TreeSequent& saturated, BoxLogic logic);

// Wraps a formula as  =>_{0} 0:@'n phi  with n fresh.
TreeSequent formula_sequent(const Formula& phi, const std::string& base = "self");

}  // namespace efl
