#include "doctest.h"

#include "efl/parser.hpp"
#include "efl/search.hpp"

using namespace efl;

namespace {

SearchOutcome run(const std::string& text, FrameClassSpec spec = {}) {
  SystemConfig cfg{spec, false};
  return prove(formula_sequent(parse_formula(text)), cfg);
}

void expect_proved(const std::string& text, FrameClassSpec spec = {}) {
  CAPTURE(text);
  auto out = run(text, spec);
  REQUIRE(out.verdict == Verdict::Proved);
  auto res = check_derivation(*out.derivation, SystemConfig{spec, false});
  CHECK_MESSAGE(res.ok(), res.report());
}

void expect_refuted(const std::string& text, FrameClassSpec spec = {}) {
  CAPTURE(text);
  auto out = run(text, spec);
  REQUIRE(out.verdict == Verdict::Refuted);
  auto s = formula_sequent(parse_formula(text));
  CHECK_FALSE(sequent_true(out.countermodel->model, out.countermodel->assignment, s));
  CHECK(frame_in_class(out.countermodel->model, spec));
}

}  // namespace

TEST_CASE("axiom schemata are proved") {
  for (const char* ax : {
           "[](p -> q) -> ([]p -> []q)",
           "F(p -> q) -> (F p -> F q)",
           "@'n(p -> q) -> (@'n p -> @'n q)",
           "@'n 'n",
           "!@'n p <-> @'n !p",
           "@'n p -> ('n -> p)",
           "@'n @'m p -> @'m p",
           "@'n p -> F @'n p",
           "@'n []@'n p <-> @'n []p",
           "@'n 'm -> []@'n 'm",
           "!@'n 'm -> []!@'n 'm",
           "p -> p",
       }) {
    expect_proved(ax);
  }
}

TEST_CASE("derived theorems are proved") {
  for (const char* f : {
           "@'m @'n p <-> @'n p",
           "'n -> (@'n p <-> p)",
           "@'n 'm -> (@'n p <-> @'m p)",
           "@'n 'm <-> @'m 'n",
           "@'n (p -> q) <-> (@'n p -> @'n q)",
           "@'n 'm -> ([]@'n F 'n <-> []@'m F 'n)",
           "@'n 'm -> ([]@'k 'n <-> []@'k 'm)",
       }) {
    expect_proved(f);
  }
}

TEST_CASE("non-theorems are refuted") {
  for (const char* f : {"p", "F p -> p", "@'n <F>'m -> @'m <F>'n", "[]p -> p", "<>p -> []p"}) {
    expect_refuted(f);
  }
}

TEST_CASE("box logics") {
  FrameClassSpec s4{BoxLogic::S4, {}}, s5{BoxLogic::S5, {}};
  expect_proved("[]p -> p", s4);
  expect_proved("[]p -> [][]p", s4);
  expect_refuted("p -> []<>p", s4);
  expect_proved("[]p -> p", s5);
  expect_proved("[]p -> [][]p", s5);
  expect_proved("p -> []<>p", s5);
  expect_refuted("[]p -> [][]p");
}

TEST_CASE("friendship rules") {
  FrameClassSpec sym{BoxLogic::K, {RegularImplication::parse("sym")}};
  FrameClassSpec irr{BoxLogic::K, {RegularImplication::parse("irr")}};
  expect_proved("@'n <F>'m -> @'m <F>'n", sym);
  expect_proved("@'n <F>'n -> false", irr);
  expect_refuted("@'n <F>'n -> false");
}
