#include "proof_builder.hpp"

#include <stdexcept>

#include "efl/parser.hpp"

namespace efl::detail {

namespace {

Formula P(const char* text) { return parse_formula(text); }
Formula nom(const Nominal& n) { return Formula::nom(n); }
Formula imp(Formula a, Formula b) { return Formula::implies(std::move(a), std::move(b)); }

}  // namespace

UniformSubstitution subst(std::initializer_list<std::pair<const Prop, Formula>> props,
                          std::initializer_list<std::pair<const Nominal, Nominal>> noms) {
  UniformSubstitution s;
  s.props = std::map<Prop, Formula>(props);
  s.noms = std::map<Nominal, Nominal>(noms);
  return s;
}

Formula Modality::apply(const Formula& x) const {
  switch (kind) {
    case Kind::Box: return Formula::kbox(x);
    case Kind::F: return Formula::fbox(x);
    case Kind::At: return Formula::at(nominal, x);
  }
  return x;
}

std::size_t ProofBuilder::add(Formula f, Justification j) {
  if (auto it = index_.find(f); it != index_.end()) return it->second;
  proof_.lines.push_back({f, std::move(j)});
  index_.emplace(std::move(f), proof_.lines.size() - 1);
  return proof_.lines.size() - 1;
}

void ProofBuilder::conclude(std::size_t i) {
  if (i + 1 == proof_.lines.size()) return;
  const Formula f = formula(i);
  std::size_t t = taut(imp(f, f));
  Justification j;
  j.kind = Justification::Kind::MP;
  j.i = i;
  j.j = t;
  proof_.lines.push_back({f, j});
}

std::size_t ProofBuilder::axiom(const std::string& name, const UniformSubstitution& s) {
  auto schema = axiom_schema(name, spec_);
  if (!schema) throw std::logic_error("unknown axiom " + name);
  Justification j;
  j.axiom = name;
  j.subst = s;
  return add(apply_substitution(*schema, s), std::move(j));
}

std::size_t ProofBuilder::taut(const Formula& f) {
  if (auto it = index_.find(f); it != index_.end()) return it->second;
  if (!is_tautology(f)) throw std::logic_error("elaboration produced a non-tautology: " + render_formula(f));
  Justification j;
  j.axiom = "Taut";
  return add(f, std::move(j));
}

std::size_t ProofBuilder::mp(std::size_t i, std::size_t j) {
  const Formula& imp_f = formula(j);
  if (!imp_f.is(Kind::Implies) || imp_f.lhs() != formula(i)) throw std::logic_error("ill-formed modus ponens");
  Justification just;
  just.kind = Justification::Kind::MP;
  just.i = i;
  just.j = j;
  return add(imp_f.rhs(), std::move(just));
}

std::size_t ProofBuilder::nec(std::size_t i, const Modality& m) {
  Justification j;
  j.i = i;
  switch (m.kind) {
    case Modality::Kind::Box: j.kind = Justification::Kind::NecBox; break;
    case Modality::Kind::F: j.kind = Justification::Kind::NecF; break;
    case Modality::Kind::At:
      j.kind = Justification::Kind::NecAt;
      j.n = m.nominal;
      break;
  }
  return add(m.apply(formula(i)), std::move(j));
}

std::size_t ProofBuilder::us(std::size_t i, const UniformSubstitution& s) {
  if (s.empty()) return i;
  Formula f = apply_substitution(formula(i), s);
  if (f == formula(i)) return i;
  Justification j;
  j.kind = Justification::Kind::US;
  j.i = i;
  j.subst = s;
  return add(std::move(f), std::move(j));
}

std::size_t ProofBuilder::name(std::size_t i, const Nominal& n) {
  const Formula& f = formula(i);
  if (!f.is(Kind::Implies) || f.lhs() != nom(n)) throw std::logic_error("ill-formed Name step");
  Justification j;
  j.kind = Justification::Kind::Name;
  j.i = i;
  j.n = n;
  return add(f.rhs(), std::move(j));
}

std::size_t ProofBuilder::lbg(std::size_t i, const NecessityForm& form, const Nominal& n, const Nominal& m,
                              const Formula& phi) {
  Justification j;
  j.kind = Justification::Kind::LBG;
  j.i = i;
  j.n = n;
  j.m = m;
  j.form = form;
  j.phi = phi;
  return add(instantiate_necessity_form(form, Formula::at(n, Formula::fbox(phi))), std::move(j));
}

std::size_t ProofBuilder::prop(const std::vector<std::size_t>& premises, const Formula& target) {
  if (auto it = index_.find(target); it != index_.end()) return it->second;
  Formula t = target;
  for (auto it = premises.rbegin(); it != premises.rend(); ++it) t = imp(formula(*it), t);
  std::size_t cur = taut(t);
  for (std::size_t p : premises) cur = mp(p, cur);
  return cur;
}

std::size_t ProofBuilder::lift(std::size_t i, std::size_t k, const Modality& m) {
  std::size_t base = nec(i, m);
  if (k == 0) return base;
  std::vector<std::size_t> prem{base};
  std::vector<Formula> ants;
  Formula cur = formula(i);
  const char* kname = m.kind == Modality::Kind::Box ? "K_box" : m.kind == Modality::Kind::F ? "K_F" : "K_at";
  for (std::size_t j = 0; j < k; ++j) {
    if (!cur.is(Kind::Implies)) throw std::logic_error("lift: too few antecedents");
    UniformSubstitution s = subst({{"p", cur.lhs()}, {"q", cur.rhs()}});
    if (m.kind == Modality::Kind::At) s.noms["n"] = m.nominal;
    prem.push_back(axiom(kname, s));
    ants.push_back(m.apply(cur.lhs()));
    cur = cur.rhs();
  }
  Formula target = m.apply(cur);
  for (auto it = ants.rbegin(); it != ants.rend(); ++it) target = imp(*it, target);
  return prop(prem, target);
}

std::size_t ProofBuilder::lift_at_box(std::size_t i, std::size_t k, const Nominal& n) {
  return lift(lift(i, k, Modality::box()), k, Modality::at(n));
}

std::size_t ProofBuilder::lemma(const std::string& name, const UniformSubstitution& s) {
  auto it = lemmas_.find(name);
  std::size_t base = it != lemmas_.end() ? it->second : lemmas_[name] = build_lemma(name);
  return us(base, s);
}

// Schematic lemmas over p, q and 'n, 'm, 'e.
std::size_t ProofBuilder::build_lemma(const std::string& name) {
  const auto at = Modality::at("n");
  auto sd = [&](UniformSubstitution s) { return axiom("Selfdual", s); };
  if (name == "atimp_conv") {  // (@n p -> @n q) -> @n(p -> q)
    std::size_t a = lift(taut(P("!(p -> q) -> p")), 1, at);
    std::size_t b = lift(taut(P("!(p -> q) -> !q")), 1, at);
    return prop({a, b, sd(subst({{"p", P("p -> q")}})), sd(subst({{"p", P("q")}}))},
                P("(@'n p -> @'n q) -> @'n (p -> q)"));
  }
  if (name == "agree_conv") {  // @m p -> @n @m p
    std::size_t sdm = sd(subst({}, {{"n", "m"}}));
    std::size_t mono = lift(prop({sdm}, P("!@'m p -> @'m !p")), 1, at);
    return prop({axiom("Agree", subst({{"p", P("!p")}})), sdm, sd(subst({{"p", P("@'m p")}})), mono},
                P("@'m p -> @'n @'m p"));
  }
  if (name == "notbot") {  // !@n false
    return prop({sd(subst({{"p", P("false")}})), nec(taut(P("!false")), at)}, P("!@'n false"));
  }
  if (name == "intro") {  // n -> (p -> @n p)
    return prop({axiom("Elim", subst({{"p", P("!p")}})), sd({})}, P("'n -> (p -> @'n p)"));
  }
  if (name == "p3") {  // @n m -> (@n p -> @m p)
    std::size_t i = lift(lemma("intro", subst({}, {{"n", "m"}})), 2, at);
    return prop({i, axiom("Agree")}, P("@'n 'm -> (@'n p -> @'m p)"));
  }
  if (name == "sym") {  // @n m -> @m n
    return prop({lemma("p3", subst({{"p", P("'n")}})), axiom("Ref")}, P("@'n 'm -> @'m 'n"));
  }
  if (name == "rigid_down") {  // @n m -> @e [] @n m
    std::size_t r = lift(axiom("Rigid_eq"), 1, Modality::at("e"));
    std::size_t a = lemma("agree_conv", subst({{"p", P("'m")}}, {{"m", "n"}, {"n", "e"}}));
    return prop({a, r}, P("@'n 'm -> @'e [] @'n 'm"));
  }
  if (name == "rigid_up") {  // !@n m -> @e [] !@n m
    std::size_t r = lift(axiom("Rigid_neq"), 1, Modality::at("e"));
    std::size_t s = sd(subst({{"p", P("'m")}}));
    std::size_t a = lemma("agree_conv", subst({{"p", P("!'m")}}, {{"m", "n"}, {"n", "e"}}));
    std::size_t mono = lift(prop({s}, P("@'n !'m -> !@'n 'm")), 1, Modality::at("e"));
    return prop({r, s, a, mono}, P("!@'n 'm -> @'e [] !@'n 'm"));
  }
  if (name == "T_at") {  // @n [] p -> @n p
    return lift(axiom("T"), 1, at);
  }
  if (name == "4_at") {  // @n [] p -> @n [] @n [] p
    std::size_t a = lift(axiom("4"), 1, at);
    return prop({a, axiom("DCom", subst({{"p", P("[]p")}}))}, P("@'n []p -> @'n [] @'n []p"));
  }
  if (name == "5_at") {  // !@n [] p -> @n [] !@n [] p
    std::size_t b = axiom("B", subst({{"p", P("![]p")}}));
    std::size_t four = axiom("4");
    std::size_t dn = lift(taut(P("[]p -> !![]p")), 1, Modality::box());
    std::size_t back = lift(prop({four, dn}, P("<>![]p -> ![]p")), 1, Modality::box());
    std::size_t x = prop({b, back}, P("![]p -> []![]p"));
    std::size_t xa = lift(x, 1, at);
    std::size_t s = sd(subst({{"p", P("[]p")}}));
    std::size_t dc = axiom("DCom", subst({{"p", P("![]p")}}));
    std::size_t mono = lift_at_box(prop({s}, P("@'n ![]p -> !@'n []p")), 1, "n");
    return prop({xa, s, dc, mono}, P("!@'n []p -> @'n [] !@'n []p"));
  }
  if (name == "fl") {  // @n F p -> (@n <F>m -> @m p)
    std::size_t sdm = sd(subst({}, {{"n", "m"}}));
    std::size_t ac = lemma("agree_conv", subst({{"p", P("!p")}}));
    std::size_t back = lift(axiom("Back", subst({{"p", P("!p")}}, {{"n", "m"}})), 1, at);
    std::size_t el = prop({axiom("Elim", subst({{"p", P("!p")}}, {{"n", "m"}}))}, P("p -> (@'m !p -> !'m)"));
    std::size_t lf = lift(lift(el, 2, Modality::f()), 2, at);
    std::size_t s2 = sd(subst({{"p", P("F !'m")}}));
    return prop({sdm, ac, back, lf, s2}, P("@'n F p -> (@'n <F>'m -> @'m p)"));
  }
  if (name == "boxtop") {  // @n [](true -> @n p) -> @n [] p
    std::size_t a = lift_at_box(taut(P("(true -> @'n p) -> @'n p")), 1, "n");
    return prop({a, axiom("DCom")}, P("@'n [](true -> @'n p) -> @'n []p"));
  }
  if (name == "dcom_conv") {  // @n [] p -> @n [] @n p
    return prop({axiom("DCom")}, P("@'n []p -> @'n [] @'n p"));
  }
  throw std::logic_error("unknown lemma " + name);
}

std::size_t ProofBuilder::rep(const Nominal& n, const Nominal& m, const Nominal& k, const Formula& psi, bool forward) {
  const Formula E = Formula::at(n, nom(m));
  const Formula from = substitute_agent(psi, forward ? n : m, k);
  const Formula to = substitute_agent(psi, forward ? m : n, k);
  const Formula target = imp(E, imp(from, to));
  if (auto it = index_.find(target); it != index_.end()) return it->second;
  if (!occurs_nominal(psi, k)) return taut(target);
  switch (psi.kind()) {
    case Kind::Nom:
      if (forward) return axiom("Elim", subst({{"p", nom(m)}}, {{"n", n}}));
      return prop({lemma("sym", subst({}, {{"n", n}, {"m", m}})),
                   axiom("Elim", subst({{"p", nom(n)}}, {{"n", m}}))},
                  target);
    case Kind::Implies:
      return prop({rep(n, m, k, psi.lhs(), !forward), rep(n, m, k, psi.rhs(), forward)}, target);
    case Kind::KBox:
      return prop({lift(rep(n, m, k, psi.body(), forward), 2, Modality::box()),
                   axiom("Rigid_eq", subst({}, {{"n", n}, {"m", m}}))},
                  target);
    case Kind::FBox:
      return prop({lift(rep(n, m, k, psi.body(), forward), 2, Modality::f()),
                   axiom("Back", subst({{"p", nom(m)}}, {{"n", n}}))},
                  target);
    case Kind::At: {
      const Nominal& j = psi.name();
      std::size_t inner = rep(n, m, k, psi.body(), forward);
      if (j != k) {
        return prop({lift(inner, 2, Modality::at(j)),
                     lemma("agree_conv", subst({{"p", nom(m)}}, {{"m", n}, {"n", j}}))},
                    target);
      }
      const Formula An = substitute_agent(psi.body(), n, k);
      const Formula Am = substitute_agent(psi.body(), m, k);
      if (forward) {
        return prop({lift(inner, 2, Modality::at(n)),
                     lemma("agree_conv", subst({{"p", nom(m)}}, {{"m", n}, {"n", n}})),
                     lemma("p3", subst({{"p", Am}}, {{"n", n}, {"m", m}}))},
                    target);
      }
      return prop({lift(inner, 2, Modality::at(m)),
                   lemma("agree_conv", subst({{"p", nom(m)}}, {{"m", n}, {"n", m}})),
                   lemma("sym", subst({}, {{"n", n}, {"m", m}})),
                   lemma("p3", subst({{"p", An}}, {{"n", m}, {"m", n}}))},
                  target);
    }
    default: break;
  }
  throw std::logic_error("rep: unexpected formula");
}

}  // namespace efl::detail
