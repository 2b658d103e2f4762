#pragma once

// Formula generators shared by the test binaries.

#include <random>
#include <vector>

#include "efl/formula.hpp"

namespace efl::testing {

// Every core formula of exactly the given size, by size.
inline std::vector<std::vector<Formula>> formulas_up_to(std::size_t max_size, const std::vector<Prop>& props,
                                                        const std::vector<Nominal>& noms) {
  std::vector<std::vector<Formula>> by(max_size + 1);
  if (max_size == 0) return by;
  by[1].push_back(Formula::falsum());
  for (const auto& p : props) by[1].push_back(Formula::prop(p));
  for (const auto& n : noms) by[1].push_back(Formula::nom(n));
  for (std::size_t s = 2; s <= max_size; ++s) {
    for (const auto& f : by[s - 1]) {
      for (const auto& n : noms) by[s].push_back(Formula::at(n, f));
      by[s].push_back(Formula::fbox(f));
      by[s].push_back(Formula::kbox(f));
    }
    for (std::size_t l = 1; l + 1 < s; ++l) {
      for (const auto& a : by[l]) {
        for (const auto& b : by[s - 1 - l]) by[s].push_back(Formula::implies(a, b));
      }
    }
  }
  return by;
}

inline Formula random_formula(std::mt19937_64& rng, std::size_t size, const std::vector<Prop>& props,
                              const std::vector<Nominal>& noms) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  if (size <= 1) {
    std::size_t k = pick(props.size() + noms.size() + 1);
    if (k < props.size()) return Formula::prop(props[k]);
    if (k < props.size() + noms.size()) return Formula::nom(noms[k - props.size()]);
    return Formula::falsum();
  }
  std::size_t choice = pick(size >= 3 ? 4 : 3);
  switch (choice) {
    case 0: return Formula::at(noms[pick(noms.size())], random_formula(rng, size - 1, props, noms));
    case 1: return Formula::fbox(random_formula(rng, size - 1, props, noms));
    case 2: return Formula::kbox(random_formula(rng, size - 1, props, noms));
    default: {
      std::size_t l = 1 + pick(size - 2);
      return Formula::implies(random_formula(rng, l, props, noms), random_formula(rng, size - 1 - l, props, noms));
    }
  }
}

}  // namespace efl::testing
