#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "efl/formula.hpp"

namespace efl {

struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourceSpan span)
      : std::runtime_error(what + " at " + std::to_string(span.start) + ".." + std::to_string(span.end)),
        span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

// Grammar (whitespace-insensitive):
//   formula := iff
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "[]" unary | "<>" unary | "F" unary | "<F>" unary
//            | "@" nominal unary | atom
//   atom    := "false" | "true" | prop | nominal | "(" formula ")"
//   prop    := [a-z][a-zA-Z0-9_]*      nominal := "'" [a-z][a-zA-Z0-9_]*
Formula parse_formula(std::string_view text);
Nominal parse_nominal(std::string_view text);  // "'n" -> "n"

enum class RenderMode { Core, Sugar };
std::string render_formula(const Formula& f, RenderMode mode = RenderMode::Core);
inline std::string render_nominal(const Nominal& n) { return "'" + n; }

bool is_valid_identifier(std::string_view id);

}  // namespace efl
