#include "efl/hilbert.hpp"

#include <map>
#include <sstream>

#include "efl/parser.hpp"

namespace efl {

Formula instantiate_necessity_form(const NecessityForm& form, const Formula& phi) {
  Formula acc = phi;
  for (auto it = form.rbegin(); it != form.rend(); ++it) {
    if (it->kind == NecessityStep::Kind::Antecedent) {
      acc = Formula::implies(it->ante, acc);
    } else {
      acc = Formula::at(it->nominal, Formula::kbox(acc));
    }
  }
  return acc;
}

std::vector<std::pair<NecessityForm, Formula>> decompose_necessity_forms(const Formula& chi) {
  std::vector<std::pair<NecessityForm, Formula>> out;
  NecessityForm prefix;
  Formula cur = chi;
  while (true) {
    out.push_back({prefix, cur});
    if (cur.is(Kind::Implies)) {
      prefix.push_back(NecessityStep::antecedent(cur.lhs()));
      cur = cur.rhs();
    } else if (cur.is(Kind::At) && cur.body().is(Kind::KBox)) {
      prefix.push_back(NecessityStep::at_box(cur.name()));
      cur = cur.body().body();
    } else {
      return out;
    }
  }
}

const Formula& HilbertProof::conclusion() const {
  if (lines.empty()) throw std::invalid_argument("empty proof");
  return lines.back().formula;
}

std::string HilbertCheck::report() const {
  std::ostringstream os;
  for (const auto& i : issues) os << "line " << i.line << ": " << i.message << "\n";
  return os.str();
}

namespace {

const std::vector<std::pair<std::string, std::string>>& base_schemata() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"K_box", "[](p -> q) -> ([]p -> []q)"},
      {"K_F", "F(p -> q) -> (F p -> F q)"},
      {"K_at", "@'n(p -> q) -> (@'n p -> @'n q)"},
      {"Ref", "@'n 'n"},
      {"Selfdual", "!@'n p <-> @'n !p"},
      {"Elim", "@'n p -> ('n -> p)"},
      {"Agree", "@'n @'m p -> @'m p"},
      {"Back", "@'n p -> F @'n p"},
      {"DCom", "@'n []@'n p <-> @'n []p"},
      {"Rigid_eq", "@'n 'm -> []@'n 'm"},
      {"Rigid_neq", "!@'n 'm -> []!@'n 'm"},
  };
  return table;
}

// Alternative spellings with the usual symbols.
std::string canonical_axiom(const std::string& name) {
  static const std::map<std::string, std::string> alias = {
      {"K□", "K_box"}, {"K@", "K_at"}, {"KF", "K_F"}, {"DCom@□", "DCom"},
      {"Rigid=", "Rigid_eq"}, {"Rigid≠", "Rigid_neq"}, {"Rigid!=", "Rigid_neq"},
  };
  auto it = alias.find(name);
  return it == alias.end() ? name : it->second;
}

}  // namespace

std::optional<Formula> axiom_schema(const std::string& given, const FrameClassSpec& extra) {
  const std::string name = canonical_axiom(given);
  for (const auto& [n, text] : base_schemata()) {
    if (n == name) return parse_formula(text);
  }
  const bool s4 = extra.logic != BoxLogic::K;
  if (s4 && name == "T") return parse_formula("[]p -> p");
  if (s4 && name == "4") return parse_formula("[]p -> [][]p");
  if (extra.logic == BoxLogic::S5 && name == "B") return parse_formula("p -> []<>p");
  if (name.size() > 2 && name.compare(0, 2, "ri") == 0) {
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(name.substr(2), &used);
      if (used != name.size() - 2) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (idx < extra.theta.size()) return extra.theta[idx].formula();
  }
  return std::nullopt;
}

std::vector<std::string> axiom_names(const FrameClassSpec& extra) {
  std::vector<std::string> out{"Taut"};
  for (const auto& [n, text] : base_schemata()) out.push_back(n);
  if (extra.logic != BoxLogic::K) {
    out.push_back("T");
    out.push_back("4");
  }
  if (extra.logic == BoxLogic::S5) out.push_back("B");
  for (std::size_t i = 0; i < extra.theta.size(); ++i) out.push_back("ri" + std::to_string(i));
  return out;
}

namespace {

// Classical sequent search over -> and false; everything else is an atom.
bool g3(std::vector<Formula> left, std::vector<Formula> right, std::set<Formula> la, std::set<Formula> ra) {
  while (true) {
    if (!right.empty()) {
      Formula f = right.back();
      right.pop_back();
      if (f.is(Kind::Implies)) {
        left.push_back(f.lhs());
        right.push_back(f.rhs());
      } else if (!f.is(Kind::Falsum)) {
        if (la.count(f)) return true;
        ra.insert(f);
      }
      continue;
    }
    bool progressed = false;
    for (std::size_t i = 0; i < left.size() && !progressed; ++i) {
      const Formula f = left[i];
      if (f.is(Kind::Falsum)) return true;
      if (f.is(Kind::Implies)) {
        // Implications that need no split: trivially true, or detached.
        if (f.lhs().is(Kind::Falsum) || la.count(f.rhs())) {
          left.erase(left.begin() + static_cast<std::ptrdiff_t>(i));
          progressed = true;
        } else if (la.count(f.lhs())) {
          left[i] = f.rhs();
          progressed = true;
        }
        continue;
      }
      if (ra.count(f)) return true;
      la.insert(f);
      left.erase(left.begin() + static_cast<std::ptrdiff_t>(i));
      progressed = true;
    }
    if (progressed) continue;
    if (left.empty()) return false;
    Formula f = left.back();
    left.pop_back();
    auto r1 = right;
    r1.push_back(f.lhs());
    if (!g3(left, r1, la, ra)) return false;
    left.push_back(f.rhs());
  }
}

}  // namespace

bool is_tautology(const Formula& f) { return g3({}, {f}, {}, {}); }

namespace {

bool match(const Formula& s, const Formula& t, UniformSubstitution& sigma) {
  auto bind_nom = [&](const Nominal& a, const Nominal& b) {
    auto [it, fresh] = sigma.noms.emplace(a, b);
    return fresh || it->second == b;
  };
  switch (s.kind()) {
    case Kind::Prop: {
      auto [it, fresh] = sigma.props.emplace(s.name(), t);
      return fresh || it->second == t;
    }
    case Kind::Nom: return t.is(Kind::Nom) && bind_nom(s.name(), t.name());
    case Kind::Falsum: return t.is(Kind::Falsum);
    case Kind::Implies: return t.is(Kind::Implies) && match(s.lhs(), t.lhs(), sigma) && match(s.rhs(), t.rhs(), sigma);
    case Kind::At: return t.is(Kind::At) && bind_nom(s.name(), t.name()) && match(s.body(), t.body(), sigma);
    case Kind::FBox:
    case Kind::KBox: return t.kind() == s.kind() && match(s.body(), t.body(), sigma);
  }
  return false;
}

std::string show(const Formula& f) { return render_formula(f, RenderMode::Sugar); }

}  // namespace

HilbertCheck check_hilbert(const HilbertProof& proof, const FrameClassSpec& extra) {
  HilbertCheck out;
  const auto& L = proof.lines;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const Formula& f = L[k].formula;
    const Justification& j = L[k].just;
    auto fail = [&](const std::string& msg) { out.issues.push_back({k, msg}); };
    auto ref = [&](std::size_t i) -> const Formula* {
      if (i >= k) {
        fail("refers to line " + std::to_string(i) + ", which is not earlier");
        return nullptr;
      }
      return &L[i].formula;
    };
    using K = Justification::Kind;
    switch (j.kind) {
      case K::Axiom: {
        if (j.axiom == "Taut") {
          if (!is_tautology(f)) fail("not a tautology: " + show(f));
          break;
        }
        auto schema = axiom_schema(j.axiom, extra);
        if (!schema) {
          fail("unknown axiom " + j.axiom);
          break;
        }
        if (j.subst) {
          if (apply_substitution(*schema, *j.subst) != f) fail("not the given instance of " + j.axiom);
        } else {
          UniformSubstitution sigma;
          if (!match(*schema, f, sigma)) fail("not an instance of " + j.axiom);
        }
        break;
      }
      case K::MP: {
        const Formula* a = ref(j.i);
        const Formula* b = ref(j.j);
        if (!a || !b) break;
        if (!(b->is(Kind::Implies) && b->lhs() == *a && b->rhs() == f)) fail("MP does not match its premises");
        break;
      }
      case K::NecBox:
        if (const Formula* a = ref(j.i); a && f != Formula::kbox(*a)) fail("Nec[] does not match");
        break;
      case K::NecF:
        if (const Formula* a = ref(j.i); a && f != Formula::fbox(*a)) fail("NecF does not match");
        break;
      case K::NecAt:
        if (const Formula* a = ref(j.i); a && f != Formula::at(j.n, *a)) fail("Nec@ does not match");
        break;
      case K::US: {
        const Formula* a = ref(j.i);
        if (!a) break;
        if (!j.subst) {
          fail("US without a substitution");
        } else if (apply_substitution(*a, *j.subst) != f) {
          fail("US does not match");
        }
        break;
      }
      case K::Name: {
        const Formula* a = ref(j.i);
        if (!a) break;
        if (*a != Formula::implies(Formula::nom(j.n), f)) {
          fail("Name premise is not 'n -> conclusion");
        } else if (occurs_nominal(f, j.n)) {
          fail("Name nominal '" + j.n + " occurs in the conclusion");
        }
        break;
      }
      case K::LBG: {
        const Formula* a = ref(j.i);
        if (!a) break;
        if (!j.phi) {
          fail("L(BG) without phi");
          break;
        }
        Formula prem = Formula::implies(Formula::at(j.n, Formula::fdia(Formula::nom(j.m))), Formula::at(j.m, *j.phi));
        if (instantiate_necessity_form(j.form, prem) != *a) {
          fail("L(BG) premise does not match the necessity form");
        } else if (instantiate_necessity_form(j.form, Formula::at(j.n, Formula::fbox(*j.phi))) != f) {
          fail("L(BG) conclusion does not match the necessity form");
        } else if (occurs_nominal(f, j.m)) {
          fail("L(BG) nominal '" + j.m + " occurs in the conclusion");
        }
        break;
      }
    }
  }
  return out;
}

Formula formulaic_translation(const TreeSequent& s, const Label& alpha) {
  if (!s.tree.contains(alpha)) throw std::invalid_argument("label " + alpha.str() + " is not in the tree");
  std::vector<Formula> ant, suc;
  for (const auto& g : s.ant) {
    if (g.label == alpha) ant.push_back(g.formula);
  }
  for (const auto& d : s.suc) {
    if (d.label == alpha) suc.push_back(d.formula);
  }
  for (const auto& beta : s.tree.children(alpha)) {
    suc.push_back(Formula::at(beta.edge(), Formula::kbox(formulaic_translation(s, beta))));
  }
  return Formula::implies(Formula::conj_all(ant), Formula::disj_all(suc));
}

}  // namespace efl
