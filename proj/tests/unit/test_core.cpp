#include <functional>

#include "doctest.h"
#include "efl/derivation.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"
#include "efl/semantics.hpp"

using namespace efl;

namespace {

Formula P(const char* text) { return parse_formula(text); }

Derivation proved(const char* text, FrameClassSpec spec = {}) {
  auto out = prove(formula_sequent(P(text)), SystemConfig{spec, false});
  REQUIRE(out.verdict == Verdict::Proved);
  return *out.derivation;
}

// First node (preorder) using the rule, or null.
Derivation* find_rule(Derivation& d, Rule r) {
  if (d.rule.rule == r) return &d;
  for (auto& p : d.premises) {
    if (auto* hit = find_rule(p, r)) return hit;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("parser") {
  CHECK(P("@'n [] p") == Formula::at("n", Formula::kbox(Formula::prop("p"))));
  CHECK(P("@'n <F> 'm") == Formula::at("n", Formula::fdia(Formula::nom("m"))));
  CHECK(P("p -> q -> r") == Formula::implies(Formula::prop("p"), Formula::implies(Formula::prop("q"), Formula::prop("r"))));
  CHECK(P("<F>p") == Formula::implies(Formula::fbox(Formula::implies(Formula::prop("p"), Formula::falsum())), Formula::falsum()));
  CHECK(P("<>p") == P("([](p -> false)) -> false"));
  CHECK(P("true") == P("false -> false"));
  CHECK(render_formula(P("@'n [] p")) == "@'n [] p");
  CHECK(render_formula(Formula::falsum()) == "false");
  CHECK(render_formula(P("!p")) == "p -> false");
  CHECK(render_formula(P("!p"), RenderMode::Sugar) == "!p");
  CHECK_THROWS_AS(P("(p -> q"), ParseError);
  CHECK_THROWS_AS(P("p $ q"), ParseError);
  CHECK_THROWS_AS(P("@n p"), ParseError);
  try {
    P("p -> ");
  } catch (const ParseError& e) {
    CHECK(e.span().start <= e.span().end);
  }
}

TEST_CASE("substitution and symbols") {
  CHECK(substitute_agent(P("@'k p"), "n", "k") == P("@'n p"));
  CHECK(substitute_agent(P("p -> false"), "n", "k") == P("p -> false"));
  CHECK(substitute_agent(P("@'k <F>'k"), "n", "k") == P("@'n <F>'n"));
  UniformSubstitution s1;
  s1.props.insert_or_assign("p", P("[]q"));
  CHECK(apply_substitution(P("p & 'n"), s1) == P("[]q & 'n"));
  UniformSubstitution s2;
  s2.props.insert_or_assign("p", P("@'m q"));
  s2.noms["n"] = "m";
  CHECK(apply_substitution(P("@'n p"), s2) == P("@'m @'m q"));
  CHECK(symbols_of(P("@'n <F>'m")).nominals == std::set<Nominal>{"n", "m"});
  CHECK(symbols_of(P("@'n <F>'m")).props.empty());
  CHECK(symbols_of(P("p")).props == std::set<Prop>{"p"});
  auto s = symbols_of(P("[]@'n p"));
  CHECK((s.nominals == std::set<Nominal>{"n"} && s.props == std::set<Prop>{"p"}));
}

TEST_CASE("labels and trees") {
  Label l = Label::parse("0/'n:1/'m:2");
  CHECK(l.str() == "0/'n:1/'m:2");
  CHECK(l.parent() == Label::parse("0/'n:1"));
  CHECK(l.edge() == "m");
  CHECK_THROWS_AS(Label::parse("0/n:1"), SchemaError);
  CHECK(LabelTree::is_tree({Label::root_label(0), Label::parse("0/'n:1")}));
  CHECK_FALSE(LabelTree::is_tree({Label::parse("0/'n:1")}));
  CHECK_FALSE(LabelTree::is_tree({Label::root_label(0), Label::root_label(1)}));
}

TEST_CASE("satisfaction") {
  Model m({"w0", "w1"}, {"a0"});
  m.set_r(0, 0, 1);
  m.set_val("p", 1, 0);
  m.nominals["n"] = 0;
  CHECK(satisfies(m, "w0", "a0", P("@'n 'n")));
  CHECK(satisfies(m, "w0", "a0", P("F false")));
  CHECK(satisfies(m, "w0", "a0", P("[]p")));
  CHECK_FALSE(satisfies(m, "w0", "a0", P("p")));
  CHECK_THROWS_AS(satisfies(m, "w0", "a0", P("'k")), SemanticsError);
  CHECK_THROWS_AS(satisfies(m, "w9", "a0", P("p")), SemanticsError);
  // sugar and core agree
  CHECK(satisfies(m, 0, 0, P("<>p")) == satisfies(m, 0, 0, Formula::kdia(Formula::prop("p"))));
}

TEST_CASE("sequent truth and assignments") {
  Model m({"w0", "w1", "w2"}, {"a"});
  m.nominals["n"] = 0;
  TreeSequent s;
  s.tree = LabelTree::single();
  Assignment f{{Label::root_label(0), 0}};
  CHECK_FALSE(sequent_true(m, f, s));
  s.suc.insert({Label::root_label(0), P("@'n 'n")});
  CHECK(sequent_true(m, f, s));
  CHECK(all_assignments(m, LabelTree::single()).size() == 3);

  LabelTree t({Label::root_label(0), Label::parse("0/'n:1")});
  CHECK(all_assignments(m, t).empty());
  m.set_r(0, 0, 0);
  m.set_r(0, 0, 1);
  auto fs = all_assignments(m, t);
  CHECK(fs.size() == 2);
  for (const auto& a : fs) CHECK(a.at(Label::root_label(0)) == 0);
}

TEST_CASE("frame classes") {
  Model m({"w"}, {"a", "b"});
  m.set_fr(0, 0, 0);
  CHECK_FALSE(frame_in_class(m, {BoxLogic::K, {RegularImplication::parse("irr")}}));
  Model id({"u", "v"}, {"a"});
  id.set_r(0, 0, 0);
  id.set_r(0, 1, 1);
  CHECK(frame_in_class(id, {BoxLogic::S5, {}}));
  Model asym({"w"}, {"a", "b"});
  asym.set_fr(0, 0, 1);
  CHECK_FALSE(frame_in_class(asym, {BoxLogic::K, {RegularImplication::parse("sym")}}));
  CHECK(frame_in_class(asym, {}));
}

TEST_CASE("oracle") {
  auto cm = find_countermodel(formula_sequent(P("p")), 1, 1, {});
  REQUIRE(cm);
  CHECK(cm->model.num_worlds() == 1);
  CHECK(find_countermodel(formula_sequent(P("F p -> p")), 1, 2, {}).has_value());
  CHECK_FALSE(find_countermodel(formula_sequent(P("@'n 'n")), 2, 2, {}).has_value());
  CHECK_THROWS_AS(find_countermodel(formula_sequent(P("p")), 0, 1, {}), std::invalid_argument);
}

TEST_CASE("prover examples") {
  proved("@'n 'm -> []@'n 'm");
  proved("@'n []@'n p -> @'n []p");
  auto out = prove(formula_sequent(P("F p -> p")), SystemConfig{});
  CHECK(out.verdict == Verdict::Refuted);
  proved("F p -> p", {BoxLogic::K, {RegularImplication::parse("refl")}});
}

TEST_CASE("checker") {
  LabelledFormula a{Label::root_label(0), P("@'n p")};
  TreeSequent s;
  s.tree = LabelTree::single();
  s.ant = {a, {Label::root_label(0), P("@'m q")}};
  s.suc = {a};
  RuleInstance id;
  id.rule = Rule::Id;
  id.principal = a;
  Derivation leaf{s, id, {}};
  CHECK(check_derivation(leaf, {}).ok());

  Derivation bad = leaf;
  bad.sequent.suc = {{Label::root_label(0), P("@'n q")}};
  CHECK_FALSE(check_derivation(bad, {}).ok());

  // boxR whose child index is already used in the conclusion's tree
  Derivation d = proved("[]p -> [](q -> p)");
  Derivation* box = find_rule(d, Rule::BoxR);
  REQUIRE(box);
  const Label child = *box->rule.label;
  Derivation clash = *box;
  clash.sequent.tree = clash.sequent.tree.with(child);
  auto res = check_derivation(clash, {});
  CHECK_FALSE(res.ok());
}

TEST_CASE("box reachability") {
  LabelTree t({Label::root_label(0), Label::parse("0/'n:1"), Label::parse("0/'m:2")});
  Label r = Label::root_label(0), c = Label::parse("0/'n:1");
  for (BoxLogic l : {BoxLogic::K, BoxLogic::S4, BoxLogic::S5}) CHECK(reachable_box(r, c, "n", t, l));
  CHECK_FALSE(reachable_box(r, r, "n", t, BoxLogic::K));
  CHECK(reachable_box(r, r, "n", t, BoxLogic::S4));
  CHECK(reachable_box(r, r, "n", t, BoxLogic::S5));
  CHECK_FALSE(reachable_box(c, r, "n", t, BoxLogic::K));
  CHECK_FALSE(reachable_box(c, r, "n", t, BoxLogic::S4));
  CHECK(reachable_box(c, r, "n", t, BoxLogic::S5));
  CHECK_FALSE(reachable_box(r, Label::parse("0/'m:2"), "n", t, BoxLogic::S5));
}

TEST_CASE("weakening and substitution") {
  LabelledFormula a{Label::root_label(0), P("@'n p")};
  TreeSequent s;
  s.tree = LabelTree::single();
  s.ant = {a};
  s.suc = {a};
  RuleInstance id;
  id.rule = Rule::Id;
  id.principal = a;
  Derivation leaf{s, id, {}};
  Derivation w = weaken(leaf, {Label::root_label(0), P("@'m q")}, Side::Left);
  CHECK(w.rule.rule == Rule::Id);
  CHECK(w.height() == 0);
  CHECK_THROWS_AS(weaken(leaf, {Label::root_label(0), P("q")}, Side::Left), std::invalid_argument);

  Derivation rigid = proved("@'n 'm -> []@'n 'm");
  Derivation wr = weaken(rigid, {Label::root_label(0), P("@'n p")}, Side::Left);
  CHECK(check_derivation(wr, {}).ok());
  CHECK(wr.height() == rigid.height());

  CHECK(substitute_derivation(rigid, {}) == rigid);
  UniformSubstitution pq;
  pq.props.insert_or_assign("p", P("q"));
  Derivation sl = substitute_derivation(leaf, pq);
  CHECK(sl.rule.principal->formula == P("@'n q"));

  // FR picked a fresh nominal; substituting onto it forces a rename.
  Derivation fr = proved("@'n F p -> @'n F (q -> p)");
  Derivation* node = find_rule(fr, Rule::FR);
  REQUIRE(node);
  UniformSubstitution clash;
  clash.noms["n"] = *node->rule.nominal;
  Derivation out = substitute_derivation(fr, clash);
  CHECK(check_derivation(out, {}).ok());
  CHECK(*find_rule(out, Rule::FR)->rule.nominal != *node->rule.nominal);
  CHECK(out.height() <= fr.height());
}
