#include <random>

#include "doctest.h"
#include "efl/io.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"
#include "../support/gen.hpp"

using namespace efl;

TEST_CASE("formula round trip") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, 1 + i % 14, {"p", "q"}, {"n", "m"});
    CHECK(parse_formula(render_formula(f)) == f);
    CHECK(parse_formula(render_formula(f, RenderMode::Sugar)) == f);
  }
}

TEST_CASE("minimal model") {
  Model m = parse_model(R"({"version":1,"worlds":["w"],"agents":["a"],"R":{},"friend":{},"val":{},"nominals":{}})");
  CHECK(m.num_worlds() == 1);
  CHECK(m.num_agents() == 1);
  CHECK(parse_model(render_model(m)).worlds == m.worlds);
}

TEST_CASE("model errors carry a path") {
  try {
    parse_model(R"({"version":1,"worlds":["w"],"agents":["a"],"R":{"a":[["w","v"]]}})");
    FAIL("accepted an undeclared world");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "/R/a/0/1");
  }
  CHECK_THROWS_AS(parse_model(R"({"worlds":["w"],"agents":["a"]})"), SchemaError);
  CHECK_THROWS_AS(parse_model(R"({"version":1,"worlds":["w"],"agents":["a"],"nominals":{"'n":"b"}})"), SchemaError);
  CHECK_THROWS_AS(parse_model("{\"version\":1,"), ParseError);
}

TEST_CASE("model round trip") {
  Model m({"u", "v"}, {"a", "b"});
  m.set_r(0, 0, 1);
  m.set_fr(1, 0, 1);
  m.set_val("p", 1, 1);
  m.nominals["n"] = 1;
  Model back = parse_model(render_model(m));
  CHECK(back.R == m.R);
  CHECK(back.friends == m.friends);
  CHECK(back.val == m.val);
  CHECK(back.nominals == m.nominals);
}

TEST_CASE("sequent file") {
  const char* text = R"({"version":1,"tree":["0","0/'n:1","0/'k:2"],
    "ant":[{"label":"0","formula":"@'n p"}],
    "suc":[{"label":"0/'k:2","formula":"@'k <F> 'm"}]})";
  TreeSequent s = parse_sequent(text);
  CHECK(s.tree.size() == 3);
  CHECK(s.tree.contains(Label::parse("0/'n:1")));
  CHECK(parse_sequent(render_sequent_json(s)) == s);
  CHECK_THROWS_AS(parse_sequent(R"({"version":1,"tree":["0"],"ant":[{"label":"0/'n:1","formula":"@'n p"}],"suc":[]})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_sequent(R"({"version":1,"tree":["0"],"ant":[{"label":"0","formula":"p"}],"suc":[]})"),
                  SchemaError);
}

TEST_CASE("derivation and Hilbert proof round trip") {
  for (const char* text : {"@'n @'m p -> @'m p", "@'n []@'n p <-> @'n []p", "@'n p -> F @'n p"}) {
    auto r = prove(formula_sequent(parse_formula(text)), SystemConfig{});
    REQUIRE(r.verdict == Verdict::Proved);
    const Derivation& d = *r.derivation;
    CHECK(parse_derivation(render_derivation(d)) == d);
    HilbertProof h = elaborate_to_hilbert(d, SystemConfig{});
    CHECK(parse_hilbert(render_hilbert(h)) == h);
  }
}

TEST_CASE("Hilbert justifications") {
  const char* text = R"({"version":1,"lines":[
    {"formula":"@'n 'n","by":{"axiom":"Ref"}},
    {"formula":"@'k 'k","by":{"axiom":"Ref","subst":{"'n":"'k"}}},
    {"formula":"[]@'k 'k","by":{"nec_box":1}},
    {"formula":"@'m 'm","by":{"us":[0,{"'n":"'m"}]}}]})";
  HilbertProof p = parse_hilbert(text);
  REQUIRE(p.lines.size() == 4);
  CHECK(p.lines[1].just.subst->noms.at("n") == "k");
  CHECK(check_hilbert(p, {}).ok());
  CHECK(parse_hilbert(render_hilbert(p)) == p);
  CHECK_THROWS_AS(parse_hilbert(R"({"version":1,"lines":[{"formula":"p","by":{"mp":[0,1]}}]})"), SchemaError);
  CHECK_THROWS_AS(parse_hilbert(R"({"version":1,"lines":[{"formula":"p","by":{"frob":0}}]})"), SchemaError);
}
