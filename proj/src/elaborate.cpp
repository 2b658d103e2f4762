// Derivations to Hilbert proofs. Each node yields a proof of
//   [[P1]] -> ... -> [[Pk]] -> [[C]]
// at the root. It is assembled label by label: at every label where something
// happens, a propositional step combines local facts with the lifted
// statements of the children. Facts that mention several labels are carried
// down the tree as hypotheses.

#include <map>
#include <stdexcept>

#include "efl/hilbert.hpp"
#include "proof_builder.hpp"

namespace efl {

namespace {

using detail::Modality;
using detail::ProofBuilder;
using detail::subst;

Formula nom(const Nominal& n) { return Formula::nom(n); }

// Translations of a sequent at every label, computed once.
class Translation {
 public:
  explicit Translation(const TreeSequent& s) : s_(s) {}
  const TreeSequent& sequent() const { return s_; }
  const Formula& at(const Label& l) {
    if (auto it = cache_.find(l); it != cache_.end()) return it->second;
    return cache_.emplace(l, formulaic_translation(s_, l)).first->second;
  }
  std::vector<Formula> ant(const Label& l) const { return side(s_.ant, l); }
  std::vector<Formula> suc(const Label& l) const { return side(s_.suc, l); }

 private:
  static std::vector<Formula> side(const FormulaSet& fs, const Label& l) {
    std::vector<Formula> out;
    for (const auto& f : fs) {
      if (f.label == l) out.push_back(f.formula);
    }
    return out;
  }
  const TreeSequent& s_;
  std::map<Label, Formula> cache_;
};

struct Plan {
  std::map<Label, std::vector<std::size_t>> facts;
  std::map<Label, std::vector<Formula>> hyps;
};

std::vector<Label> path_down(const Label& from_ancestor, const Label& to) {
  std::vector<Label> out;
  for (Label l = to; l != from_ancestor; l = l.parent()) out.push_back(l);
  return {out.rbegin(), out.rend()};
}

Label common_ancestor(const Label& a, const Label& b) {
  Label out = Label::root_label(a.root);
  for (std::size_t i = 0; i < a.path.size() && i < b.path.size() && a.path[i] == b.path[i]; ++i) {
    out.path.push_back(a.path[i]);
  }
  return out;
}

class Elaborator {
 public:
  explicit Elaborator(const SystemConfig& cfg) : cfg_(cfg), b_(cfg.spec) {}

  HilbertProof run(const Derivation& d) {
    std::size_t line = node(d);
    b_.conclude(line);
    return b_.take();
  }

 private:
  std::size_t node(const Derivation& d) {
    std::vector<std::size_t> prem_lines;
    for (const auto& p : d.premises) prem_lines.push_back(node(p));
    const RuleInstance& r = d.rule;
    const TreeSequent& c = d.sequent;
    // A premise that translates like the conclusion already proves it.
    const Formula goal = formulaic_translation(c, c.tree.root());
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      const TreeSequent& p = d.premises[i].sequent;
      if (p.tree.root() == c.tree.root() && formulaic_translation(p, p.tree.root()) == goal) return prem_lines[i];
    }
    if (r.rule == Rule::FR) return friend_right(d, prem_lines.at(0));

    Plan plan;
    auto fact = [&](const Label& l, std::size_t line) { plan.facts[l].push_back(line); };
    switch (r.rule) {
      case Rule::Bot:
        fact(r.principal->label, b_.lemma("notbot", subst({}, {{"n", r.principal->formula.name()}})));
        break;
      case Rule::Rep1:
      case Rule::Rep2: {
        const Formula& e = r.principal->formula;
        fact(r.principal->label, b_.rep(e.name(), e.body().name(), *r.nominal, *r.tmpl, r.rule == Rule::Rep2));
        break;
      }
      case Rule::Ref:
        fact(*r.label, b_.axiom("Ref", subst({}, {{"n", *r.nominal}})));
        break;
      case Rule::Rigid: rigid(plan, *r.principal, *r.label); break;
      case Rule::ImpR: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label, b_.lemma("atimp_conv", subst({{"p", f.body().lhs()}, {"q", f.body().rhs()}},
                                                               {{"n", f.name()}})));
        break;
      }
      case Rule::ImpL: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label,
             b_.axiom("K_at", subst({{"p", f.body().lhs()}, {"q", f.body().rhs()}}, {{"n", f.name()}})));
        break;
      }
      case Rule::AtR: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label, b_.lemma("agree_conv", subst({{"p", f.body().body()}},
                                                               {{"n", f.name()}, {"m", f.body().name()}})));
        break;
      }
      case Rule::AtL: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label,
             b_.axiom("Agree", subst({{"p", f.body().body()}}, {{"n", f.name()}, {"m", f.body().name()}})));
        break;
      }
      case Rule::FL: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label,
             b_.lemma("fl", subst({{"p", f.body().body()}}, {{"n", f.name()}, {"m", *r.nominal}})));
        break;
      }
      case Rule::BoxR: {
        const Formula& f = r.principal->formula;
        fact(r.principal->label, b_.lemma("boxtop", subst({{"p", f.body().body()}}, {{"n", f.name()}})));
        break;
      }
      case Rule::BoxL: box_left(plan, *r.principal, *r.label); break;
      case Rule::Ri: {
        std::size_t idx = 0;
        while (idx < cfg_.spec.theta.size() && !(cfg_.spec.theta[idx] == *r.theta)) ++idx;
        UniformSubstitution s;
        s.noms = r.inst;
        fact(*r.label, b_.axiom("ri" + std::to_string(idx), s));
        break;
      }
      case Rule::Id:
        plan.facts[r.principal->label];  // no fact, but the label must be visited
        break;
      case Rule::Wlab:
      case Rule::Cut:
      case Rule::FR: break;
    }

    Translation tc(c);
    std::vector<Translation> tp;
    tp.reserve(d.premises.size());
    for (const auto& p : d.premises) tp.emplace_back(p.sequent);
    auto [line, uses_premises] = combine(c.tree.root(), tc, tp, plan);
    if (!uses_premises) return line;
    for (std::size_t pl : prem_lines) line = b_.mp(pl, line);
    return line;
  }

  // Line for  H1 -> ... -> [[P1]] -> ... -> [[C]]  at label mu; the premises
  // are left out when no premise differs from the conclusion below mu.
  std::pair<std::size_t, bool> combine(const Label& mu, Translation& tc, std::vector<Translation>& tp, const Plan& plan) {
    bool differs = false;
    for (auto& p : tp) {
      if (p.sequent().tree.contains(mu) && p.at(mu) != tc.at(mu)) differs = true;
    }
    std::vector<std::size_t> prem;
    if (auto it = plan.facts.find(mu); it != plan.facts.end()) prem = it->second;
    for (const Label& nu : tc.sequent().tree.children(mu)) {
      if (!dirty(nu, tc, tp, plan)) continue;
      for (auto& p : tp) {
        if (!p.sequent().tree.contains(nu)) throw std::logic_error("elaboration: premise lacks label " + nu.str());
      }
      auto [line, with_prem] = combine(nu, tc, tp, plan);
      std::size_t arity = hyps_of(plan, nu).size() + (with_prem ? tp.size() : 0);
      prem.push_back(b_.lift_at_box(line, arity, nu.edge()));
    }
    Formula target = tc.at(mu);
    if (differs) {
      for (auto it = tp.rbegin(); it != tp.rend(); ++it) target = Formula::implies(it->at(mu), target);
    }
    const auto& hs = hyps_of(plan, mu);
    for (auto it = hs.rbegin(); it != hs.rend(); ++it) target = Formula::implies(*it, target);
    return {b_.prop(prem, target), differs};
  }

  static const std::vector<Formula>& hyps_of(const Plan& plan, const Label& l) {
    static const std::vector<Formula> none;
    auto it = plan.hyps.find(l);
    return it == plan.hyps.end() ? none : it->second;
  }

  static bool dirty(const Label& nu, Translation& tc, std::vector<Translation>& tp, const Plan& plan) {
    for (const auto& [l, v] : plan.facts) {
      if (nu.is_prefix_of(l)) return true;
    }
    for (const auto& [l, v] : plan.hyps) {
      if (nu.is_prefix_of(l)) return true;
    }
    for (auto& p : tp) {
      if (p.sequent().tree.contains(nu) && p.at(nu) != tc.at(nu)) return true;
    }
    return false;
  }

  // Moves gamma from `from` to `to` along the tree path: downward steps carry
  // gamma, the upward part carries its negation toward `from`.
  template <typename Up, typename Down>
  void transport(Plan& plan, const Formula& gamma, const Label& from, const Label& to, Up up, Down down) {
    const Label top = common_ancestor(from, to);
    for (const Label& nu : path_down(top, from)) {
      plan.facts[nu.parent()].push_back(up(nu.edge()));
      plan.hyps[nu].push_back(Formula::neg(gamma));
    }
    for (const Label& nu : path_down(top, to)) {
      plan.facts[nu.parent()].push_back(down(nu));
      plan.hyps[nu].push_back(gamma);
    }
  }

  void rigid(Plan& plan, const LabelledFormula& eq, const Label& target) {
    UniformSubstitution s = subst({}, {{"n", eq.formula.name()}, {"m", eq.formula.body().name()}});
    transport(
        plan, eq.formula, eq.label, target,
        [&](const Nominal& e) {
          auto t = s;
          t.noms["e"] = e;
          return b_.lemma("rigid_up", t);
        },
        [&](const Label& nu) {
          auto t = s;
          t.noms["e"] = nu.edge();
          return b_.lemma("rigid_down", t);
        });
  }

  void box_left(Plan& plan, const LabelledFormula& pr, const Label& beta) {
    const Nominal& n = pr.formula.name();
    const Formula& phi = pr.formula.body().body();
    UniformSubstitution s = subst({{"p", phi}}, {{"n", n}});
    if (cfg_.spec.logic == BoxLogic::K) {
      plan.facts[pr.label].push_back(b_.lemma("dcom_conv", s));
      plan.hyps[beta].push_back(Formula::at(n, phi));
      return;
    }
    transport(
        plan, pr.formula, pr.label, beta, [&](const Nominal&) { return b_.lemma("5_at", s); },
        [&](const Label&) { return b_.lemma("4_at", s); });
    plan.facts[beta].push_back(b_.lemma("T_at", s));
  }

  // FR through L(BG): the necessity form follows the path from the root to the
  // principal label, recording each level's context as an antecedent.
  std::size_t friend_right(const Derivation& d, std::size_t prem_line) {
    const TreeSequent& c = d.sequent;
    const LabelledFormula& pr = *d.rule.principal;
    const Nominal& n = pr.formula.name();
    const Nominal& m = *d.rule.nominal;
    const Formula phi = pr.formula.body().body();
    Translation tc(c);
    Translation tp(d.premises.at(0).sequent);

    std::vector<Label> path{c.tree.root()};
    for (const Label& l : path_down(c.tree.root(), pr.label)) path.push_back(l);
    auto context = [&](std::size_t j) {
      const Label& lam = path[j];
      std::vector<Formula> rest = tc.suc(lam);
      for (const Label& ch : c.tree.children(lam)) {
        if (j + 1 < path.size() && ch == path[j + 1]) continue;
        rest.push_back(Formula::at(ch.edge(), Formula::kbox(tc.at(ch))));
      }
      return Formula::conj(Formula::conj_all(tc.ant(lam)), Formula::neg(Formula::disj_all(rest)));
    };
    NecessityForm form;
    for (std::size_t j = 0; j < path.size(); ++j) {
      if (j > 0) form.push_back(NecessityStep::at_box(path[j].edge()));
      form.push_back(NecessityStep::antecedent(context(j)));
    }
    // suffix of the form starting at level j
    auto suffix = [&](std::size_t j, const Formula& hole) {
      NecessityForm f(form.begin() + static_cast<std::ptrdiff_t>(j == 0 ? 0 : 2 * j), form.end());
      return instantiate_necessity_form(f, hole);
    };
    const Formula core = Formula::implies(Formula::at(n, Formula::fdia(nom(m))), Formula::at(m, phi));
    const Formula goal = Formula::at(n, Formula::fbox(phi));

    // [[P]] -> L(core)  and  L(goal) -> [[C]], bottom-up along the path
    std::size_t down = b_.taut(Formula::implies(tp.at(path.back()), suffix(path.size() - 1, core)));
    std::size_t up = b_.taut(Formula::implies(suffix(path.size() - 1, goal), tc.at(path.back())));
    for (std::size_t j = path.size() - 1; j-- > 0;) {
      const Nominal& e = path[j + 1].edge();
      down = b_.prop({b_.lift_at_box(down, 1, e)}, Formula::implies(tp.at(path[j]), suffix(j, core)));
      up = b_.prop({b_.lift_at_box(up, 1, e)}, Formula::implies(suffix(j, goal), tc.at(path[j])));
    }
    std::size_t lform = b_.lbg(b_.mp(prem_line, down), form, n, m, phi);
    return b_.mp(lform, up);
  }

  const SystemConfig& cfg_;
  ProofBuilder b_;
};

}  // namespace

HilbertProof elaborate_to_hilbert(const Derivation& d, const SystemConfig& cfg) {
  if (auto chk = check_derivation(d, cfg); !chk.ok()) throw std::invalid_argument("derivation does not check:\n" + chk.report());
  return Elaborator(cfg).run(d);
}

}  // namespace efl
