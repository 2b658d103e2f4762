// Hilbert proofs to derivations, through the invertibility of ->R, boxR, @R
// and @L (each built with one cut).

#include <map>
#include <stdexcept>
#include <tuple>

#include "efl/hilbert.hpp"
#include "efl/parser.hpp"
#include "efl/search.hpp"

namespace efl {

namespace {

using LF = LabelledFormula;

RuleInstance instance(Rule r, std::optional<LF> principal = std::nullopt) {
  RuleInstance i;
  i.rule = r;
  i.principal = std::move(principal);
  return i;
}

Derivation leaf_id(TreeSequent s, const LF& x) { return Derivation{std::move(s), instance(Rule::Id, x), {}}; }

Derivation cut(TreeSequent conc, const LF& x, Derivation left, Derivation right) {
  Derivation d{std::move(conc), instance(Rule::Cut, x), {}};
  d.premises.push_back(std::move(left));
  d.premises.push_back(std::move(right));
  return d;
}

TreeSequent with(TreeSequent s, std::initializer_list<LF> ant, std::initializer_list<LF> suc) {
  s.ant.insert(ant.begin(), ant.end());
  s.suc.insert(suc.begin(), suc.end());
  return s;
}

Derivation weaken_all(Derivation d, const TreeSequent& target) {
  for (const auto& g : target.ant) {
    if (!d.sequent.ant.count(g)) d = weaken(d, g, Side::Left);
  }
  for (const auto& x : target.suc) {
    if (!d.sequent.suc.count(x)) d = weaken(d, x, Side::Right);
  }
  return d;
}

}  // namespace

Derivation invert_rule(const Derivation& d, const RuleInstance& target, const SystemConfig& cfg) {
  if (auto chk = check_derivation(d, cfg); !chk.ok()) throw std::invalid_argument("derivation does not check:\n" + chk.report());
  if (!target.principal) throw std::invalid_argument("inversion target needs a principal formula");
  const LF& p = *target.principal;
  const TreeSequent& c = d.sequent;
  const Formula& f = p.formula;
  auto shape = [&](bool ok) {
    if (!ok) throw std::invalid_argument("principal formula does not match the rule to invert");
  };
  shape(f.is(Kind::At));
  const Nominal& n = f.name();
  const Formula& b = f.body();
  switch (target.rule) {
    case Rule::ImpR: {
      shape(b.is(Kind::Implies) && c.suc.count(p));
      LF a{p.label, Formula::at(n, b.lhs())}, q{p.label, Formula::at(n, b.rhs())};
      TreeSequent prem = c;
      prem.suc.erase(p);
      prem = with(prem, {a}, {q});
      // Gamma, a, p => Delta, q   by ->L and two axioms
      TreeSequent right = with(prem, {p}, {});
      Derivation impl{right, instance(Rule::ImpL, p), {}};
      impl.premises.push_back(leaf_id(with(right, {}, {a}), a));
      impl.premises.push_back(leaf_id(with(right, {q}, {}), q));
      return cut(prem, p, weaken_all(d, with(prem, {}, {p})), std::move(impl));
    }
    case Rule::BoxR: {
      shape(b.is(Kind::KBox) && c.suc.count(p));
      Label beta = target.label ? *target.label : p.label.child(n, c.tree.fresh_index(p.label));
      if (!beta.is_child_of(p.label, n) || c.tree.contains(beta) || c.tree.index_used_under(p.label, beta.path.back().index)) {
        throw std::invalid_argument("boxR inversion needs a fresh n-child of the principal label");
      }
      LF q{beta, Formula::at(n, b.body())};
      TreeSequent prem = c;
      prem.suc.erase(p);
      prem.tree = c.tree.with(beta);
      prem.suc.insert(q);
      // d with the new label (wlab), then with q on the right
      TreeSequent grown = c;
      grown.tree = prem.tree;
      Derivation left = weaken(Derivation{grown, [&] {
                                            auto r = instance(Rule::Wlab);
                                            r.label = beta;
                                            return r;
                                          }(),
                                          {d}},
                               q, Side::Right);
      // Gamma, p => Delta, q   by boxL into beta
      TreeSequent right = with(prem, {p}, {});
      RuleInstance bl = instance(Rule::BoxL, p);
      bl.label = beta;
      Derivation box_left{right, bl, {}};
      box_left.premises.push_back(leaf_id(with(right, {q}, {}), q));
      return cut(prem, p, std::move(left), std::move(box_left));
    }
    case Rule::AtR: {
      shape(b.is(Kind::At) && c.suc.count(p));
      LF q{p.label, b};
      TreeSequent prem = c;
      prem.suc.erase(p);
      prem.suc.insert(q);
      TreeSequent right = with(prem, {p}, {});
      Derivation atl{right, instance(Rule::AtL, p), {}};
      atl.premises.push_back(leaf_id(with(right, {q}, {}), q));
      return cut(prem, p, weaken(d, q, Side::Right), std::move(atl));
    }
    case Rule::AtL: {
      shape(b.is(Kind::At) && c.ant.count(p));
      LF q{p.label, b};
      TreeSequent prem = c;
      prem.ant.erase(p);
      prem.ant.insert(q);
      TreeSequent left = with(prem, {}, {p});
      Derivation atr{left, instance(Rule::AtR, p), {}};
      atr.premises.push_back(leaf_id(with(left, {}, {q}), q));
      return cut(prem, p, std::move(atr), weaken(d, q, Side::Left));
    }
    default: throw std::invalid_argument("only ->R, boxR, @R and @L are inverted");
  }
}

namespace {

class Embedder {
 public:
  Embedder(const HilbertProof& proof, const SystemConfig& cfg, std::set<Nominal> used)
      : proof_(proof), cfg_{cfg.spec, true}, used_(std::move(used)) {
    for (const auto& l : proof.lines) {
      Symbols s = symbols_of(l.formula);
      const Justification& j = l.just;
      if (j.subst) {
        for (const auto& [a, b] : j.subst->noms) s.nominals.insert({a, b});
        for (const auto& [p, f] : j.subst->props) collect_symbols(f, s);
      }
      if (j.phi) collect_symbols(*j.phi, s);
      for (const auto& st : j.form) {
        if (st.kind == NecessityStep::Kind::Antecedent) collect_symbols(st.ante, s);
        s.nominals.insert(st.nominal);
      }
      s.nominals.insert({j.n, j.m});
      s.nominals.erase("");
      used_.insert(s.nominals.begin(), s.nominals.end());
    }
  }

  // A derivation of  =>_T alpha:@x phi_k.
  Derivation line(std::size_t k, const LabelTree& t, const Label& alpha, const Nominal& x) {
    auto key = std::make_tuple(k, t.labels(), alpha, x);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Derivation d = build(k, t, alpha, x);
    memo_.emplace(std::move(key), d);
    return d;
  }

 private:
  Nominal fresh(const std::string& base) {
    Nominal n = fresh_nominal(used_, base);
    used_.insert(n);
    return n;
  }

  static TreeSequent goal(const LabelTree& t, const Label& alpha, const Formula& f) {
    TreeSequent s;
    s.tree = t;
    s.suc.insert({alpha, f});
    return s;
  }

  Derivation build(std::size_t k, const LabelTree& t, const Label& alpha, const Nominal& x) {
    const HilbertLine& l = proof_.lines.at(k);
    const Justification& j = l.just;
    const TreeSequent conc = goal(t, alpha, Formula::at(x, l.formula));
    using K = Justification::Kind;
    switch (j.kind) {
      case K::Axiom: {
        auto out = prove(conc, SystemConfig{cfg_.spec, false});
        if (out.verdict != Verdict::Proved) {
          throw std::runtime_error("could not derive axiom line " + std::to_string(k) + ": " + render_formula(l.formula));
        }
        return std::move(*out.derivation);
      }
      case K::MP: {
        const Formula& a = proof_.lines.at(j.i).formula;
        LF pa{alpha, Formula::at(x, a)};
        Derivation imp = line(j.j, t, alpha, x);
        Derivation inv = invert_rule(imp, instance(Rule::ImpR, LF{alpha, Formula::at(x, proof_.lines.at(j.j).formula)}), cfg_);
        return cut(conc, pa, line(j.i, t, alpha, x), std::move(inv));
      }
      case K::NecBox: {
        Label beta = alpha.child(x, t.fresh_index(alpha));
        RuleInstance r = instance(Rule::BoxR, *conc.suc.begin());
        r.label = beta;
        return Derivation{conc, r, {line(j.i, t.with(beta), beta, x)}};
      }
      case K::NecF: {
        Nominal m = fresh("m");
        RuleInstance r = instance(Rule::FR, *conc.suc.begin());
        r.nominal = m;
        LF friend_atom{alpha, Formula::at(x, Formula::fdia(Formula::nom(m)))};
        return Derivation{conc, r, {weaken(line(j.i, t, alpha, m), friend_atom, Side::Left)}};
      }
      case K::NecAt:
        return Derivation{conc, instance(Rule::AtR, *conc.suc.begin()), {line(j.i, t, alpha, j.n)}};
      case K::US:
        return substituted(j.i, t, alpha, x, *j.subst);
      case K::Name: {
        // =>  alpha':@c(c -> phi), then @c c by ref, then c := x.
        const Nominal& c = j.n;
        Renaming rn = rename_apart(t, alpha);
        Derivation d = line(j.i, rn.tree, rn.alpha, c);
        LF self{rn.alpha, Formula::at(c, Formula::nom(c))};
        Derivation inv = invert_rule(d, instance(Rule::ImpR, *d.sequent.suc.begin()), cfg_);
        TreeSequent mid = inv.sequent;
        mid.ant.erase(self);
        TreeSequent refl = with(mid, {}, {self});
        RuleInstance r = instance(Rule::Ref);
        r.label = rn.alpha;
        r.nominal = c;
        Derivation ref{refl, r, {leaf_id(with(refl, {self}, {}), self)}};
        Derivation closed = cut(mid, self, std::move(ref), std::move(inv));
        UniformSubstitution back = rn.back;
        back.noms[c] = x;
        return substitute_derivation(closed, back);
      }
      case K::LBG: return lbg(k, t, alpha, x);
    }
    throw std::logic_error("unknown justification");
  }

  struct Renaming {
    LabelTree tree;
    Label alpha;
    UniformSubstitution back;
  };

  // The tree with every label nominal replaced by a fresh one.
  Renaming rename_apart(const LabelTree& t, const Label& alpha) {
    std::set<Nominal> label_noms;
    t.collect_nominals(label_noms);
    std::map<Nominal, Nominal> to;
    Renaming out;
    for (const auto& n : label_noms) {
      to[n] = fresh("w");
      out.back.noms[to[n]] = n;
    }
    std::set<Label> labels;
    for (const auto& l : t.labels()) labels.insert(rename_label(l, to));
    out.tree = LabelTree(labels);
    out.alpha = rename_label(alpha, to);
    return out;
  }

  // =>_T alpha:@x (phi_i sigma)
  Derivation substituted(std::size_t i, const LabelTree& t, const Label& alpha, const Nominal& x,
                         const UniformSubstitution& sigma) {
    Renaming rn = rename_apart(t, alpha);
    Nominal y = fresh("x");
    Derivation d = substitute_derivation(line(i, rn.tree, rn.alpha, y), sigma);
    UniformSubstitution back = rn.back;
    back.noms[y] = x;
    return substitute_derivation(d, back);
  }

  Derivation lbg(std::size_t k, const LabelTree& t, const Label& alpha, const Nominal& x) {
    const Justification& j = proof_.lines.at(k).just;
    const Nominal m = fresh("m");
    UniformSubstitution sm;
    sm.noms[j.m] = m;
    Derivation d = substituted(j.i, t, alpha, x, sm);

    // Invert down the necessity form, remembering each conclusion.
    struct Level {
      TreeSequent seq;
      NecessityStep step;
      Label label;
      Nominal nom;
    };
    std::vector<Level> levels;
    Label lam = alpha;
    Nominal y = x;
    for (const auto& st : j.form) {
      levels.push_back({d.sequent, st, lam, y});
      const LF pr = *d.sequent.suc.begin();
      if (st.kind == NecessityStep::Kind::Antecedent) {
        d = invert_rule(d, instance(Rule::ImpR, pr), cfg_);
      } else {
        d = invert_rule(d, instance(Rule::AtR, pr), cfg_);
        RuleInstance br = instance(Rule::BoxR, *d.sequent.suc.begin());
        Label beta = lam.child(st.nominal, d.sequent.tree.fresh_index(lam));
        br.label = beta;
        d = invert_rule(d, br, cfg_);
        lam = beta;
        y = st.nominal;
      }
    }
    // core: @y(@n <F>m -> @m phi)
    d = invert_rule(d, instance(Rule::ImpR, *d.sequent.suc.begin()), cfg_);
    LF friend_at{lam, Formula::at(y, Formula::at(j.n, Formula::fdia(Formula::nom(m))))};
    d = invert_rule(d, instance(Rule::AtL, friend_at), cfg_);
    d = invert_rule(d, instance(Rule::AtR, *d.sequent.suc.begin()), cfg_);

    // FR, then the inverted steps again with @n F phi in the hole.
    const Formula goal_core = Formula::at(j.n, Formula::fbox(*j.phi));
    TreeSequent s = d.sequent;
    s.ant.erase({lam, Formula::at(j.n, Formula::fdia(Formula::nom(m)))});
    s.suc.clear();
    s.suc.insert({lam, goal_core});
    RuleInstance fr = instance(Rule::FR, LF{lam, goal_core});
    fr.nominal = m;
    d = Derivation{s, fr, {std::move(d)}};
    s.suc.clear();
    s.suc.insert({lam, Formula::at(y, goal_core)});
    d = Derivation{s, instance(Rule::AtR, *s.suc.begin()), {std::move(d)}};

    for (std::size_t li = levels.size(); li-- > 0;) {
      const Level& lv = levels[li];
      NecessityForm rest(j.form.begin() + static_cast<std::ptrdiff_t>(li), j.form.end());
      TreeSequent conc = lv.seq;
      conc.suc.clear();
      LF pr{lv.label, Formula::at(lv.nom, instantiate_necessity_form(rest, goal_core))};
      conc.suc.insert(pr);
      if (lv.step.kind == NecessityStep::Kind::Antecedent) {
        d = Derivation{conc, instance(Rule::ImpR, pr), {std::move(d)}};
      } else {
        const Label beta = lam;
        TreeSequent mid = conc;
        LF boxed{lv.label, pr.formula.body()};
        mid.suc.clear();
        mid.suc.insert(boxed);
        RuleInstance br = instance(Rule::BoxR, boxed);
        br.label = beta;
        d = Derivation{mid, br, {std::move(d)}};
        d = Derivation{conc, instance(Rule::AtR, pr), {std::move(d)}};
        lam = lv.label;
      }
    }
    return d;
  }

  const HilbertProof& proof_;
  const SystemConfig cfg_;  // cut is always needed
  std::set<Nominal> used_;
  std::map<std::tuple<std::size_t, std::set<Label>, Label, Nominal>, Derivation> memo_;
};

}  // namespace

Derivation embed_hilbert(const HilbertProof& proof, const LabelTree& tree, const Label& alpha, const Nominal& n,
                         const SystemConfig& cfg) {
  if (auto chk = check_hilbert(proof, cfg.spec); !chk.ok()) throw std::invalid_argument("proof does not check:\n" + chk.report());
  if (!tree.contains(alpha)) throw std::invalid_argument("label " + alpha.str() + " is not in the tree");
  if (occurs_nominal(proof.conclusion(), n)) throw std::invalid_argument("nominal '" + n + " is not fresh in the conclusion");
  std::set<Nominal> used{n};
  tree.collect_nominals(used);
  Embedder e(proof, cfg, std::move(used));
  return e.line(proof.lines.size() - 1, tree, alpha, n);
}

}  // namespace efl
