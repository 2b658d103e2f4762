#include "doctest.h"

#include "efl/hilbert.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"

using namespace efl;

namespace {

void expect_elaborates(const std::string& text, FrameClassSpec spec = {}) {
  CAPTURE(text);
  SystemConfig cfg{spec, false};
  auto s = formula_sequent(parse_formula(text));
  auto out = prove(s, cfg);
  REQUIRE(out.verdict == Verdict::Proved);
  HilbertProof h = elaborate_to_hilbert(*out.derivation, cfg);
  auto chk = check_hilbert(h, spec);
  CHECK_MESSAGE(chk.ok(), chk.report());
  CHECK(h.conclusion() == formulaic_translation(s, s.tree.root()));
}

}  // namespace

TEST_CASE("tautology check") {
  CHECK(is_tautology(parse_formula("p -> p")));
  CHECK(is_tautology(parse_formula("((p -> q) -> p) -> p")));
  CHECK(is_tautology(parse_formula("[]p | ![]p")));
  CHECK_FALSE(is_tautology(parse_formula("p -> q")));
  CHECK_FALSE(is_tautology(parse_formula("[]p -> p")));
}

TEST_CASE("necessity forms decompose and instantiate") {
  Formula chi = parse_formula("q -> @'n [] (r -> s)");
  auto parts = decompose_necessity_forms(chi);
  REQUIRE(parts.size() == 4);
  for (const auto& [form, core] : parts) CHECK(instantiate_necessity_form(form, core) == chi);
}

TEST_CASE("translation of a tree sequent") {
  TreeSequent s;
  Label r = Label::root_label(0), n1 = r.child("n", 1), k2 = r.child("k", 2);
  s.tree = LabelTree({r, n1, k2});
  s.ant = {{r, parse_formula("@'n phi")}, {k2, parse_formula("@'m rho")}};
  s.suc = {{r, parse_formula("@'m psi")}, {n1, parse_formula("@'k theta")}};
  Formula expect = parse_formula("@'n phi -> (@'m psi | (@'n [](true -> @'k theta) | @'k [](@'m rho -> false)))");
  CHECK(formulaic_translation(s, r) == expect);
}

TEST_CASE("checker rejects bad lines") {
  HilbertProof h;
  h.lines.push_back({parse_formula("p -> q"), Justification{}});
  h.lines.back().just.axiom = "Taut";
  Justification mp;
  mp.kind = Justification::Kind::MP;
  mp.i = 1;
  mp.j = 0;
  h.lines.push_back({parse_formula("q"), mp});
  auto chk = check_hilbert(h, {});
  CHECK(chk.issues.size() == 2);
}

TEST_CASE("elaboration of search derivations") {
  for (const char* f : {
           "p -> p",
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
           "@'m @'n p <-> @'n p",
           "'n -> (@'n p <-> p)",
           "@'n 'm -> (@'n p <-> @'m p)",
           "@'n 'm <-> @'m 'n",
           "@'n (p -> q) <-> (@'n p -> @'n q)",
           "@'n 'm -> ([]@'n F 'n <-> []@'m F 'n)",
       }) {
    expect_elaborates(f);
  }
}

TEST_CASE("elaboration with box logics and friendship rules") {
  FrameClassSpec s4{BoxLogic::S4, {}}, s5{BoxLogic::S5, {}};
  expect_elaborates("[]p -> p", s4);
  expect_elaborates("[]p -> [][]p", s4);
  expect_elaborates("[]p -> p", s5);
  expect_elaborates("[]p -> [][]p", s5);
  expect_elaborates("p -> []<>p", s5);
  expect_elaborates("@'n <F>'m -> @'m <F>'n", {BoxLogic::K, {RegularImplication::parse("sym")}});
  expect_elaborates("@'n <F>'n -> false", {BoxLogic::K, {RegularImplication::parse("irr")}});
}

namespace {

HilbertLine hl(const char* f, Justification j) { return {parse_formula(f), std::move(j)}; }

Justification by_axiom(const char* name) {
  Justification j;
  j.axiom = name;
  return j;
}

Justification by(Justification::Kind k, std::size_t i, std::size_t jj = 0) {
  Justification j;
  j.kind = k;
  j.i = i;
  j.j = jj;
  return j;
}

// Uses MP, Nec[], NecF, Nec@, US, Name and L(BG).
HilbertProof sample_proof() {
  using K = Justification::Kind;
  HilbertProof h;
  h.lines.push_back(hl("true", by_axiom("Taut")));
  Justification at = by(K::NecAt, 0);
  at.n = "m";
  h.lines.push_back(hl("@'m true", at));
  h.lines.push_back(hl("@'m true -> (@'n <F>'m -> @'m true)", by_axiom("Taut")));
  h.lines.push_back(hl("@'n <F>'m -> @'m true", by(K::MP, 1, 2)));
  Justification lbg = by(K::LBG, 3);
  lbg.n = "n";
  lbg.m = "m";
  lbg.phi = parse_formula("true");
  h.lines.push_back(hl("@'n F true", lbg));
  h.lines.push_back(hl("F @'n F true", by(K::NecF, 4)));
  h.lines.push_back(hl("[] F @'n F true", by(K::NecBox, 5)));
  Justification us = by(K::US, 6);
  us.subst = UniformSubstitution{{}, {{"n", "k"}}};
  h.lines.push_back(hl("[] F @'k F true", us));
  h.lines.push_back(hl("[] F @'k F true -> ('j -> [] F @'k F true)", by_axiom("Taut")));
  h.lines.push_back(hl("'j -> [] F @'k F true", by(K::MP, 7, 8)));
  Justification name = by(K::Name, 9);
  name.n = "j";
  h.lines.push_back(hl("[] F @'k F true", name));
  return h;
}

void expect_embeds(const HilbertProof& h, FrameClassSpec spec = {}, LabelTree tree = LabelTree::single(),
                   Label alpha = Label::root_label(0)) {
  SystemConfig cfg{spec, true};
  REQUIRE(check_hilbert(h, spec).ok());
  std::set<Nominal> used = symbols_of(h.conclusion()).nominals;
  tree.collect_nominals(used);
  Nominal x = fresh_nominal(used, "x");
  Derivation d = embed_hilbert(h, tree, alpha, x, cfg);
  auto chk = check_derivation(d, cfg);
  CHECK_MESSAGE(chk.ok(), chk.report());
  CHECK(d.sequent.ant.empty());
  CHECK(d.sequent.tree == tree);
  CHECK(d.sequent.suc == FormulaSet{{alpha, Formula::at(x, h.conclusion())}});
  // and back: the embedded derivation has cuts and wlab steps to elaborate
  HilbertProof back = elaborate_to_hilbert(d, cfg);
  auto hc = check_hilbert(back, spec);
  CHECK_MESSAGE(hc.ok(), hc.report());
  CHECK(back.conclusion() == formulaic_translation(d.sequent, tree.root()));
}

}  // namespace

TEST_CASE("inversion") {
  SystemConfig cfg{{}, true};
  auto run = [&](const char* text) {
    auto out = prove(formula_sequent(parse_formula(text), "k"), SystemConfig{{}, false});
    REQUIRE(out.verdict == Verdict::Proved);
    return *out.derivation;
  };
  Label r = Label::root_label(0);
  SUBCASE("->R") {
    Derivation d = run("@'n 'm -> @'m 'n");
    RuleInstance t;
    t.rule = Rule::ImpR;
    t.principal = *d.sequent.suc.begin();
    Derivation inv = invert_rule(d, t, cfg);
    CHECK(check_derivation(inv, cfg).ok());
    CHECK(inv.sequent.ant == FormulaSet{{r, parse_formula("@'k @'n 'm")}});
    CHECK(inv.sequent.suc == FormulaSet{{r, parse_formula("@'k @'m 'n")}});
  }
  SUBCASE("boxR") {
    Derivation d = run("[](p -> p)");
    RuleInstance t;
    t.rule = Rule::BoxR;
    t.principal = *d.sequent.suc.begin();
    Derivation inv = invert_rule(d, t, cfg);
    CHECK(check_derivation(inv, cfg).ok());
    CHECK(inv.sequent.tree.size() == 2);
  }
  SUBCASE("@L on an axiom") {
    LabelledFormula a{r, parse_formula("@'n @'m p")};
    TreeSequent s;
    s.tree = LabelTree::single();
    s.ant = {a};
    s.suc = {a};
    RuleInstance id;
    id.rule = Rule::Id;
    id.principal = a;
    RuleInstance t;
    t.rule = Rule::AtL;
    t.principal = a;
    Derivation inv = invert_rule(Derivation{s, id, {}}, t, cfg);
    CHECK(check_derivation(inv, cfg).ok());
    CHECK(inv.sequent.ant == FormulaSet{{r, parse_formula("@'m p")}});
  }
  SUBCASE("shape mismatch") {
    Derivation d = run("p -> p");
    RuleInstance t;
    t.rule = Rule::BoxR;
    t.principal = *d.sequent.suc.begin();
    CHECK_THROWS_AS(invert_rule(d, t, cfg), std::invalid_argument);
  }
}

TEST_CASE("embedding of axioms") {
  for (const auto& name : axiom_names({})) {
    if (name == "Taut") continue;
    CAPTURE(name);
    HilbertProof h;
    h.lines.push_back({*axiom_schema(name, {}), by_axiom(name.c_str())});
    expect_embeds(h);
  }
  HilbertProof rigid;
  rigid.lines.push_back(hl("@'n 'm -> []@'n 'm", by_axiom("Rigid_eq")));
  LabelTree t({Label::root_label(0), Label::parse("0/'n:1"), Label::parse("0/'n:1/'m:0")});
  expect_embeds(rigid, {}, t, Label::parse("0/'n:1"));
}

TEST_CASE("embedding of a proof using every rule") {
  expect_embeds(sample_proof());
  LabelTree t({Label::root_label(0), Label::parse("0/'k:0")});
  expect_embeds(sample_proof(), {}, t, Label::parse("0/'k:0"));
}

TEST_CASE("elaborate then embed") {
  for (const char* f : {"@'n []@'n p <-> @'n []p", "@'n 'm -> ([]@'n F 'n <-> []@'m F 'n)", "@'n p -> F @'n p",
                        "!@'n 'm -> []!@'n 'm"}) {
    CAPTURE(f);
    auto out = prove(formula_sequent(parse_formula(f)), SystemConfig{{}, false});
    REQUIRE(out.verdict == Verdict::Proved);
    expect_embeds(elaborate_to_hilbert(*out.derivation, SystemConfig{{}, false}));
  }
}
