// Acceptance checks: one PASS/FAIL line per criterion. Exit status 0 only if
// every selected criterion passes. Arguments select criteria by number.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "efl/io.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"
#include "../support/gen.hpp"

using namespace efl;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path data_dir() { return fs::path(EFL_DATA_DIR); }

// Outcome of one criterion: failures are collected with enough context to debug.
struct Report {
  std::vector<std::string> failures;
  std::string summary;

  void fail(const std::string& what) { failures.push_back(what); }
  void expect(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
};

const std::vector<std::string> kAxioms = {
    "p -> (q -> p)",
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
};

const std::vector<std::string> kDerived = {
    "@'m @'n p <-> @'n p",
    "'n -> (@'n p <-> p)",
    "@'n 'm -> (@'n p <-> @'m p)",
    "@'n 'm <-> @'m 'n",
    "@'n (p -> q) <-> (@'n p -> @'n q)",
    // phi[n/k] <-> phi[m/k] for phi = []@'k F 'l and phi = @'k p
    "@'n 'm -> ([]@'n F 'l <-> []@'m F 'l)",
    "@'n 'm -> (@'n p <-> @'m p)",
};

struct Named {
  std::string name;
  FrameClassSpec spec;
};

FrameClassSpec spec_of(BoxLogic l, std::vector<std::string> rules = {}) {
  FrameClassSpec s{l, {}};
  for (const auto& r : rules) s.theta.push_back(RegularImplication::parse(r));
  return s;
}

// Extension suite: formula, frame class, expected verdict (true = Proved).
struct ExtCase {
  std::string formula;
  Named cls;
  bool provable;
};

std::vector<ExtCase> extension_cases() {
  Named s4{"S4", spec_of(BoxLogic::S4)}, s5{"S5", spec_of(BoxLogic::S5)};
  Named sym{"sym", spec_of(BoxLogic::K, {"sym"})}, irr{"irr", spec_of(BoxLogic::K, {"irr"})};
  Named k{"K", {}};
  return {
      {"[]p -> p", s4, true},
      {"[]p -> [][]p", s4, true},
      {"p -> []<>p", s4, false},
      {"[]p -> p", s5, true},
      {"[]p -> [][]p", s5, true},
      {"p -> []<>p", s5, true},
      {"<>p -> []<>p", s5, true},
      {"@'n <F>'m -> @'m <F>'n", sym, true},
      {"@'n <F>'n -> false", irr, true},
      {"F p -> <F> p", irr, false},
      {"@'n <F>'m -> @'m <F>'n", k, false},
      {"@'n <F>'n -> false", k, false},
      {"[]p -> [][]p", k, false},
  };
}

// Derivations collected by earlier criteria for later ones.
struct Corpus {
  std::vector<std::pair<Derivation, FrameClassSpec>> derivations;
};

SearchOutcome run_prove(const std::string& text, const FrameClassSpec& spec, std::uint64_t fuel = 10000) {
  SearchConfig sc;
  sc.fuel = fuel;
  return prove(formula_sequent(parse_formula(text)), SystemConfig{spec, false}, sc);
}

void prove_and_check(Report& r, Corpus& corpus, const std::string& text, const FrameClassSpec& spec, double limit) {
  auto t0 = Clock::now();
  auto out = run_prove(text, spec);
  double secs = seconds_since(t0);
  if (out.verdict != Verdict::Proved) {
    r.fail(text + ": " + to_string(out.verdict));
    return;
  }
  r.expect(secs < limit, text + ": took " + std::to_string(secs) + "s");
  auto chk = check_derivation(*out.derivation, SystemConfig{spec, false});
  r.expect(chk.ok(), text + ": derivation rejected without cut: " + chk.report());
  r.expect(!out.derivation->uses_cut(), text + ": derivation uses cut");
  corpus.derivations.emplace_back(*out.derivation, spec);
}

Report axioms(Corpus& corpus) {
  Report r;
  for (const auto& a : kAxioms) prove_and_check(r, corpus, a, {}, 5.0);
  r.summary = std::to_string(kAxioms.size()) + " axiom instances proved and checked without cut";
  return r;
}

Report derived(Corpus& corpus) {
  Report r;
  for (const auto& d : kDerived) prove_and_check(r, corpus, d, {}, 5.0);
  const std::pair<const char*, const char*> hand[] = {
      {"derived1.hilbert.json", "@'m @'n p <-> @'n p"},
      {"derived2.hilbert.json", "'n -> (@'n p <-> p)"},
  };
  for (const auto& [file, goal] : hand) {
    HilbertProof h = parse_hilbert(read(data_dir() / file));
    auto chk = check_hilbert(h, {});
    r.expect(chk.ok(), std::string(file) + ": " + chk.report());
    r.expect(h.conclusion() == parse_formula(goal), std::string(file) + ": wrong conclusion");
  }
  r.summary = std::to_string(kDerived.size()) + " derived theorem instances proved; 2 hand proofs check";
  return r;
}

Report translation(Corpus&) {
  Report r;
  TreeSequent s = parse_sequent(read(data_dir() / "three_labels.sequent.json"));
  std::string expected_text = read(data_dir() / "three_labels.translation.txt");
  Formula got = formulaic_translation(s, Label::root_label(0));
  Formula expected = parse_formula(expected_text);
  r.expect(got == expected, "got " + render_formula(got, RenderMode::Sugar));
  r.summary = "root translation equals " + render_formula(expected, RenderMode::Sugar);
  return r;
}

Report refutations(Corpus&) {
  Report r;
  const std::vector<std::string> cases = {"p", "F p -> p", "@'n <F>'m -> @'m <F>'n", "[]p -> p", "<>p -> []p"};
  for (const auto& text : cases) {
    auto out = run_prove(text, {});
    if (out.verdict != Verdict::Refuted) {
      r.fail(text + ": " + to_string(out.verdict));
      continue;
    }
    TreeSequent s = formula_sequent(parse_formula(text));
    r.expect(!sequent_true(out.countermodel->model, out.countermodel->assignment, s),
             text + ": returned model does not falsify the sequent");
    auto cm = find_countermodel(s, 2, 2, {});
    r.expect(cm.has_value(), text + ": oracle found no countermodel at 2,2");
    if (cm) r.expect(!sequent_true(cm->model, cm->assignment, s), text + ": oracle model does not falsify");
  }
  r.summary = std::to_string(cases.size()) + " non-theorems refuted, countermodels confirmed";
  return r;
}

Report extensions(Corpus& corpus) {
  Report r;
  int n = 0;
  for (const auto& c : extension_cases()) {
    ++n;
    const std::string tag = c.formula + " [" + c.cls.name + "]";
    auto out = run_prove(c.formula, c.cls.spec);
    TreeSequent s = formula_sequent(parse_formula(c.formula));
    if (c.provable) {
      if (out.verdict != Verdict::Proved) {
        r.fail(tag + ": " + to_string(out.verdict));
        continue;
      }
      auto chk = check_derivation(*out.derivation, SystemConfig{c.cls.spec, false});
      r.expect(chk.ok(), tag + ": " + chk.report());
      corpus.derivations.emplace_back(*out.derivation, c.cls.spec);
      r.expect(!find_countermodel(s, 2, 2, c.cls.spec).has_value(), tag + ": oracle found an in-class countermodel");
    } else {
      if (out.verdict != Verdict::Refuted) {
        r.fail(tag + ": " + to_string(out.verdict));
        continue;
      }
      const auto& cm = *out.countermodel;
      r.expect(frame_in_class(cm.model, c.cls.spec), tag + ": countermodel outside the class");
      r.expect(!sequent_true(cm.model, cm.assignment, s), tag + ": countermodel does not falsify");
      auto oc = find_countermodel(s, 2, 2, c.cls.spec);
      r.expect(oc && frame_in_class(oc->model, c.cls.spec), tag + ": oracle found no in-class countermodel");
    }
  }
  r.summary = std::to_string(n) + " S4/S5/sym/irr cases with frame-class checks";
  return r;
}

// Proved must mean no countermodel; Refuted must come with a falsifying
// in-class model. A countermodel beyond the oracle bounds is not a conflict.
struct Tally {
  std::size_t proved = 0, refuted = 0, unknown = 0, beyond = 0;
};

void agree(Report& r, const Formula& f, Tally& t) {
  TreeSequent s = formula_sequent(f);
  auto out = prove(s, SystemConfig{{}, false});
  auto cm = find_countermodel(s, 2, 2, {});
  const std::string text = render_formula(f);
  switch (out.verdict) {
    case Verdict::Proved:
      ++t.proved;
      if (cm) r.fail(text + ": proved, but the oracle has a countermodel");
      break;
    case Verdict::Refuted:
      ++t.refuted;
      if (!cm) ++t.beyond;
      if (!frame_in_class(out.countermodel->model, {}) ||
          sequent_true(out.countermodel->model, out.countermodel->assignment, s)) {
        r.fail(text + ": refuted with a bad countermodel");
      }
      break;
    case Verdict::Unknown:
      ++t.unknown;
      r.fail(text + ": unknown");
      break;
  }
}

Report agreement(Corpus&) {
  Report r;
  auto t0 = Clock::now();
  Tally t;
  std::size_t total = 0;
  auto by_size = testing::formulas_up_to(6, {"p"}, {"n", "m"});
  for (const auto& bucket : by_size) {
    for (const auto& f : bucket) {
      agree(r, f, t);
      ++total;
    }
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 10);
  for (int i = 0; i < 500; ++i) {
    agree(r, testing::random_formula(rng, size(rng), {"p", "q"}, {"n", "m", "k"}), t);
    ++total;
  }
  double secs = seconds_since(t0);
  r.expect(secs < 600, "took " + std::to_string(secs) + "s");
  r.summary = std::to_string(total) + " formulas: " + std::to_string(t.proved) + " proved, " +
              std::to_string(t.refuted) + " refuted (" + std::to_string(t.beyond) + " need a model beyond 2x2), " +
              std::to_string(t.unknown) + " unknown";
  return r;
}

Report elaboration(Corpus& corpus) {
  Report r;
  for (const auto& [d, spec] : corpus.derivations) {
    const std::string tag = render_sequent(d.sequent);
    try {
      HilbertProof h = elaborate_to_hilbert(d, SystemConfig{spec, false});
      auto chk = check_hilbert(h, spec);
      r.expect(chk.ok(), tag + ": " + chk.report());
      r.expect(h.conclusion() == formulaic_translation(d.sequent, d.sequent.tree.root()),
               tag + ": conclusion is not the translation");
    } catch (const std::exception& e) {
      r.fail(tag + ": " + e.what());
    }
  }
  r.expect(!corpus.derivations.empty(), "no derivations collected (run criteria 1, 2 and 5 first)");
  r.summary = std::to_string(corpus.derivations.size()) + " derivations elaborated into checked Hilbert proofs";
  return r;
}

void embed_and_check(Report& r, const HilbertProof& h, const std::string& tag) {
  try {
    SystemConfig cfg{{}, true};
    Nominal n = formula_sequent(h.conclusion(), "x").suc.begin()->formula.name();
    Derivation d = embed_hilbert(h, LabelTree::single(), Label::root_label(0), n, cfg);
    auto chk = check_derivation(d, cfg);
    r.expect(chk.ok(), tag + ": " + chk.report());
    r.expect(d.sequent.suc == FormulaSet{{Label::root_label(0), Formula::at(n, h.conclusion())}} &&
                 d.sequent.ant.empty(),
             tag + ": wrong end sequent");
  } catch (const std::exception& e) {
    r.fail(tag + ": " + e.what());
  }
}

Report embedding(Corpus&) {
  Report r;
  int n = 0;
  for (const auto& name : axiom_names({})) {
    HilbertProof h;
    Formula f = name == "Taut" ? parse_formula(kAxioms.front()) : *axiom_schema(name, {});
    Justification j;
    j.axiom = name;
    h.lines.push_back({f, j});
    embed_and_check(r, h, name);
    ++n;
  }
  HilbertProof sample = parse_hilbert(read(data_dir() / "sample.hilbert.json"));
  r.expect(check_hilbert(sample, {}).ok(), "sample proof does not check");
  std::set<Justification::Kind> kinds;
  for (const auto& l : sample.lines) kinds.insert(l.just.kind);
  r.expect(kinds.size() == 8, "sample proof does not use every rule");
  embed_and_check(r, sample, "sample proof");
  r.summary = std::to_string(n) + " axioms and a " + std::to_string(sample.lines.size()) +
              "-line proof using every rule embedded and checked";
  return r;
}

LabelledFormula random_labelled(std::mt19937_64& rng, const LabelTree& t) {
  const auto& labels = t.labels();
  auto it = labels.begin();
  std::advance(it, std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng));
  std::vector<Nominal> noms = {"n", "m", "k"};
  Nominal at = noms[rng() % noms.size()];
  return {*it, Formula::at(at, testing::random_formula(rng, 1 + rng() % 5, {"p", "q"}, noms))};
}

UniformSubstitution random_subst(std::mt19937_64& rng) {
  std::vector<Nominal> noms = {"n", "m", "k", "j"};
  UniformSubstitution s;
  if (rng() % 2) s.props.insert_or_assign("p", testing::random_formula(rng, 1 + rng() % 4, {"p", "q"}, noms));
  if (rng() % 2) s.props.insert_or_assign("q", testing::random_formula(rng, 1 + rng() % 3, {"p"}, noms));
  if (rng() % 2) s.noms["n"] = noms[rng() % noms.size()];
  if (rng() % 2) s.noms["m"] = noms[rng() % noms.size()];
  return s;
}

Report admissibility(Corpus& corpus) {
  Report r;
  std::mt19937_64 rng(99);
  std::vector<std::pair<Derivation, FrameClassSpec>> pool = corpus.derivations;
  for (int i = 0; pool.size() < 40 && i < 2000; ++i) {
    Formula f = testing::random_formula(rng, 3 + rng() % 8, {"p", "q"}, {"n", "m"});
    auto out = prove(formula_sequent(f), SystemConfig{{}, false});
    if (out.verdict == Verdict::Proved) pool.emplace_back(*out.derivation, FrameClassSpec{});
  }
  int weakenings = 0, substitutions = 0;
  for (int i = 0; i < 100; ++i) {
    const auto& [d, spec] = pool[rng() % pool.size()];
    SystemConfig cfg{spec, false};
    const std::string tag = render_sequent(d.sequent);
    try {
      LabelledFormula extra = random_labelled(rng, d.sequent.tree);
      Side side = rng() % 2 ? Side::Left : Side::Right;
      Derivation w = weaken(d, extra, side);
      auto chk = check_derivation(w, cfg);
      r.expect(chk.ok(), tag + " weakened by " + render_labelled(extra) + ": " + chk.report());
      r.expect(w.height() <= d.height(), tag + ": weakening increased height");
      ++weakenings;

      UniformSubstitution s = random_subst(rng);
      Derivation u = substitute_derivation(d, s);
      chk = check_derivation(u, cfg);
      r.expect(chk.ok(), tag + " substituted: " + chk.report());
      r.expect(u.height() <= d.height(), tag + ": substitution increased height");
      ++substitutions;
    } catch (const std::exception& e) {
      r.fail(tag + ": " + e.what());
    }
  }
  r.summary = std::to_string(weakenings) + " weakenings and " + std::to_string(substitutions) +
              " substitutions checked, heights not increased";
  return r;
}

// A random model of the class: relations closed under the box logic, and a
// friendship relation resampled until the frame rules hold.
Model random_model(std::mt19937_64& rng, const FrameClassSpec& spec, const std::set<Prop>& props,
                   const std::set<Nominal>& noms) {
  const int W = 1 + rng() % 3, A = 1 + rng() % 3;
  std::vector<std::string> ws, as;
  for (int i = 0; i < W; ++i) ws.push_back("w" + std::to_string(i));
  for (int i = 0; i < A; ++i) as.push_back("a" + std::to_string(i));
  while (true) {
    Model m(ws, as);
    for (int a = 0; a < A; ++a) {
      for (int w = 0; w < W; ++w) {
        for (int v = 0; v < W; ++v) m.set_r(a, w, v, rng() % 3 == 0);
      }
      if (spec.logic != BoxLogic::K) {
        for (int w = 0; w < W; ++w) m.set_r(a, w, w);
      }
      if (spec.logic == BoxLogic::S5) {
        for (int w = 0; w < W; ++w) {
          for (int v = 0; v < W; ++v) {
            if (m.r(a, w, v)) m.set_r(a, v, w);
          }
        }
      }
      if (spec.logic != BoxLogic::K) {
        for (int k = 0; k < W; ++k) {
          for (int w = 0; w < W; ++w) {
            for (int v = 0; v < W; ++v) {
              if (m.r(a, w, k) && m.r(a, k, v)) m.set_r(a, w, v);
            }
          }
        }
      }
    }
    for (int w = 0; w < W; ++w) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) m.set_fr(w, a, b, rng() % 2 == 0);
      }
    }
    for (const auto& p : props) {
      for (int w = 0; w < W; ++w) {
        for (int a = 0; a < A; ++a) m.set_val(p, w, a, rng() % 2 == 0);
      }
    }
    for (const auto& n : noms) m.nominals[n] = static_cast<int>(rng() % A);
    if (frame_in_class(m, spec)) return m;
  }
}

Report soundness(Corpus& corpus) {
  Report r;
  std::mt19937_64 rng(5);
  std::size_t sequents = 0;
  for (int i = 0; i < 50; ++i) {
    const auto& [d, spec] = corpus.derivations[i % corpus.derivations.size()];
    Symbols sym;
    std::set<Nominal> noms = derivation_nominals(d);
    std::function<void(const Derivation&)> collect = [&](const Derivation& x) {
      for (const auto* side : {&x.sequent.ant, &x.sequent.suc}) {
        for (const auto& lf : *side) collect_symbols(lf.formula, sym);
      }
      for (const auto& p : x.premises) collect(p);
    };
    collect(d);
    Model m = random_model(rng, spec, sym.props, noms);
    r.expect(frame_in_class(m, spec), "sampled model outside the class");
    std::function<void(const Derivation&)> visit = [&](const Derivation& x) {
      ++sequents;
      enumerate_assignments(m, x.sequent.tree, [&](const Assignment& f) {
        if (!sequent_true(m, f, x.sequent)) {
          r.fail("derivable sequent false in a model: " + render_sequent(x.sequent));
          return false;
        }
        return true;
      });
      for (const auto& p : x.premises) visit(p);
    };
    visit(d);
  }
  r.summary = "50 in-class random models; " + std::to_string(sequents) + " derivable sequents true under all assignments";
  return r;
}

Report round_trips(Corpus&) {
  Report r;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Formula f = testing::random_formula(rng, 1 + rng() % 16, {"p", "q", "r"}, {"n", "m", "k"});
    r.expect(parse_formula(render_formula(f)) == f, "formula " + render_formula(f));
    r.expect(parse_formula(render_formula(f, RenderMode::Sugar)) == f, "sugared formula " + render_formula(f));
  }
  int files = 0;
  auto ends = [](const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (const auto& entry : fs::directory_iterator(data_dir())) {
    const std::string name = entry.path().filename().string();
    const std::string text = read(entry.path());
    try {
      if (ends(name, ".model.json")) {
        Model m = parse_model(text);
        Model back = parse_model(render_model(m));
        r.expect(back.worlds == m.worlds && back.agents == m.agents && back.R == m.R && back.friends == m.friends &&
                     back.val == m.val && back.nominals == m.nominals,
                 name);
      } else if (ends(name, ".sequent.json")) {
        TreeSequent s = parse_sequent(text);
        r.expect(parse_sequent(render_sequent_json(s)) == s, name);
      } else if (ends(name, ".derivation.json")) {
        Derivation d = parse_derivation(text);
        r.expect(parse_derivation(render_derivation(d)) == d, name);
        r.expect(render_derivation(parse_derivation(render_derivation(d))) == render_derivation(d), name);
      } else if (ends(name, ".hilbert.json")) {
        HilbertProof h = parse_hilbert(text);
        r.expect(parse_hilbert(render_hilbert(h)) == h, name);
      } else {
        continue;
      }
      ++files;
    } catch (const std::exception& e) {
      r.fail(name + ": " + e.what());
    }
  }
  r.summary = "1000 random formulas and " + std::to_string(files) + " corpus files round-trip";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<Report(Corpus&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "axiom corpus provability", axioms},
      {2, "derived theorems", derived},
      {3, "translation golden test", translation},
      {4, "refutation suite", refutations},
      {5, "S4/S5 and frame-rule extensions", extensions},
      {6, "prover/oracle agreement", agreement},
      {7, "elaboration to Hilbert proofs", elaboration},
      {8, "embedding of Hilbert proofs", embedding},
      {9, "admissible weakening and substitution", admissibility},
      {10, "soundness sampling", soundness},
      {11, "round trips", round_trips},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  Corpus corpus;
  int failed = 0;
  for (const auto& c : all) {
    // 7, 9 and 10 reuse the derivations of 1, 2 and 5; those always run.
    const bool wanted = selected.empty() || selected.count(c.id);
    const bool feeds = c.id == 1 || c.id == 2 || c.id == 5;
    if (!wanted && !feeds) continue;
    Report rep;
    auto t0 = Clock::now();
    try {
      rep = c.run(corpus);
    } catch (const std::exception& e) {
      rep.fail(std::string("exception: ") + e.what());
    }
    if (!wanted) continue;
    const bool pass = rep.failures.empty();
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name << ": " << rep.summary << " ("
              << std::fixed << std::setprecision(1) << seconds_since(t0) << "s)\n";
    for (std::size_t i = 0; i < rep.failures.size() && i < 10; ++i) std::cout << "    " << rep.failures[i] << "\n";
    if (rep.failures.size() > 10) std::cout << "    ... " << rep.failures.size() - 10 << " more\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
