#pragma once

// JSON file formats for models, sequents, derivations and Hilbert proofs.
// Every top-level document carries "version": 1. Parsers throw ParseError
// for malformed JSON and SchemaError (with a JSON pointer path) for
// documents that do not describe a valid object.

#include <string>
#include <string_view>

#include "efl/derivation.hpp"
#include "efl/hilbert.hpp"
#include "efl/semantics.hpp"

namespace efl {

inline constexpr int kFormatVersion = 1;

Model parse_model(std::string_view text);
std::string render_model(const Model& m);

TreeSequent parse_sequent(std::string_view text);
std::string render_sequent_json(const TreeSequent& s);

Derivation parse_derivation(std::string_view text);
std::string render_derivation(const Derivation& d);

HilbertProof parse_hilbert(std::string_view text);
std::string render_hilbert(const HilbertProof& p);

// A model together with the label assignment that falsifies a sequent.
Countermodel parse_countermodel(std::string_view text);
std::string render_countermodel(const Countermodel& c);

}  // namespace efl
