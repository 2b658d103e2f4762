#include "efl/derivation.hpp"

#include <algorithm>
#include <stdexcept>

#include "efl/parser.hpp"

namespace efl {

namespace {

const std::pair<Rule, const char*> kRuleNames[] = {
    {Rule::Bot, "bot"},   {Rule::Id, "id"},     {Rule::Rep1, "rep1"}, {Rule::Rep2, "rep2"}, {Rule::Ref, "ref"},
    {Rule::Rigid, "rigid"}, {Rule::ImpR, "impR"}, {Rule::ImpL, "impL"}, {Rule::AtR, "atR"},   {Rule::AtL, "atL"},
    {Rule::FR, "FR"},     {Rule::FL, "FL"},     {Rule::BoxR, "boxR"}, {Rule::BoxL, "boxL"}, {Rule::Wlab, "wlab"},
    {Rule::Cut, "cut"},   {Rule::Ri, "ri"},
};

}  // namespace

std::string rule_name(Rule r) {
  for (const auto& [rule, name] : kRuleNames) {
    if (rule == r) return name;
  }
  return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
  for (const auto& [rule, n] : kRuleNames) {
    if (name == n) return rule;
  }
  return std::nullopt;
}

int Derivation::height() const {
  int h = -1;
  for (const auto& p : premises) h = std::max(h, p.height());
  return h + 1;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.node_count();
  return n;
}

bool Derivation::uses_cut() const {
  if (rule.rule == Rule::Cut) return true;
  return std::any_of(premises.begin(), premises.end(), [](const Derivation& p) { return p.uses_cut(); });
}

std::string CheckResult::report() const {
  std::string out;
  for (const auto& v : violations) out += v.path + " [" + v.rule + "]: " + v.message + "\n";
  return out;
}

bool reachable_box(const Label& from, const Label& to, const Nominal& n, const LabelTree& t, BoxLogic logic) {
  if (!t.contains(from) || !t.contains(to)) throw std::invalid_argument("label outside tree");
  switch (logic) {
    case BoxLogic::K: return to.is_child_of(from, n);
    case BoxLogic::S4:
      if (!from.is_prefix_of(to)) return false;
      for (std::size_t i = from.path.size(); i < to.path.size(); ++i) {
        if (to.path[i].nominal != n) return false;
      }
      return true;
    case BoxLogic::S5: {
      // Climb n-edges to the top of each label's n-component.
      auto top = [&](Label l) {
        while (!l.is_root() && l.edge() == n) l = l.parent();
        return l;
      };
      return top(from) == top(to);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Checker

namespace {

class Checker {
 public:
  explicit Checker(const SystemConfig& cfg) : cfg_(cfg) {}

  void check(const Derivation& d, const std::string& path) {
    path_ = path;
    rule_ = rule_name(d.rule.rule);
    bool ok = true;
    try {
      d.sequent.validate();
    } catch (const SchemaError& e) {
      fail(std::string("malformed sequent: ") + e.what());
      ok = false;
    }
    if (ok) node(d);
    for (std::size_t i = 0; i < d.premises.size(); ++i) check(d.premises[i], path + "." + std::to_string(i));
  }

  std::vector<Violation> violations;

 private:
  void fail(const std::string& msg) { violations.push_back({path_, rule_, msg}); }

  // Premise shape: new formulas on each side; the tree defaults to the
  // conclusion's tree.
  struct Prem {
    FormulaSet ant, suc;
    std::optional<LabelTree> tree;
  };

  static bool subset(const FormulaSet& a, const FormulaSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  static FormulaSet minus(const FormulaSet& a, const FormulaSet& b) {
    FormulaSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
  }

  static FormulaSet join(const FormulaSet& a, const FormulaSet& b) {
    FormulaSet out = a;
    out.insert(b.begin(), b.end());
    return out;
  }

  // Each premise i must satisfy  conc \ P  <=  prem_i  <=  conc u N_i  on both sides.
  void match(const Derivation& d, const FormulaSet& pa, const FormulaSet& ps, const std::vector<Prem>& prems) {
    const TreeSequent& c = d.sequent;
    if (d.premises.size() != prems.size()) {
      fail("expected " + std::to_string(prems.size()) + " premise(s), found " + std::to_string(d.premises.size()));
      return;
    }
    if (!subset(pa, c.ant)) fail("principal formula missing from the antecedent");
    if (!subset(ps, c.suc)) fail("principal formula missing from the succedent");
    FormulaSet ca = minus(c.ant, pa), cs = minus(c.suc, ps);
    for (std::size_t i = 0; i < prems.size(); ++i) {
      const TreeSequent& p = d.premises[i].sequent;
      std::string which = "premise " + std::to_string(i);
      if (!(p.tree == (prems[i].tree ? *prems[i].tree : c.tree))) fail(which + ": tree mismatch");
      if (!subset(prems[i].ant, p.ant)) fail(which + ": expected antecedent formula missing");
      if (!subset(prems[i].suc, p.suc)) fail(which + ": expected succedent formula missing");
      if (!subset(ca, p.ant)) fail(which + ": antecedent context not preserved");
      if (!subset(cs, p.suc)) fail(which + ": succedent context not preserved");
      if (!subset(p.ant, join(c.ant, prems[i].ant))) fail(which + ": unexpected antecedent formula");
      if (!subset(p.suc, join(c.suc, prems[i].suc))) fail(which + ": unexpected succedent formula");
    }
  }

  bool need(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
    return cond;
  }

  static LabelledFormula lf(const Label& l, Formula f) { return {l, std::move(f)}; }

  void node(const Derivation& d) {
    const RuleInstance& r = d.rule;
    const TreeSequent& c = d.sequent;
    auto principal = [&](Kind body) -> const LabelledFormula* {
      if (!need(r.principal.has_value(), "missing principal formula")) return nullptr;
      if (!need(r.principal->formula.is(Kind::At) && r.principal->formula.body().is(body),
                "principal formula has the wrong shape")) {
        return nullptr;
      }
      return &*r.principal;
    };
    switch (r.rule) {
      case Rule::Bot: {
        const auto* p = principal(Kind::Falsum);
        if (p) match(d, {*p}, {}, {});
        break;
      }
      case Rule::Id: {
        if (!need(r.principal.has_value(), "missing principal formula")) break;
        match(d, {*r.principal}, {*r.principal}, {});
        break;
      }
      case Rule::Rep1:
      case Rule::Rep2: {
        const auto* e = principal(Kind::Nom);
        if (!e || !need(r.tmpl && r.nominal, "rep needs a template and its variable")) break;
        const Nominal& n = e->formula.name();
        const Nominal& m = e->formula.body().name();
        Formula from = substitute_agent(*r.tmpl, r.rule == Rule::Rep1 ? m : n, *r.nominal);
        Formula to = substitute_agent(*r.tmpl, r.rule == Rule::Rep1 ? n : m, *r.nominal);
        if (!need(from.is(Kind::At) && to.is(Kind::At), "rewritten formula is not @-prefixed")) break;
        need(c.ant.count(*e) != 0, "equality missing from the antecedent");
        match(d, {lf(e->label, from)}, {}, {Prem{{lf(e->label, to)}, {}, {}}});
        break;
      }
      case Rule::Ref: {
        if (!need(r.label && r.nominal, "ref needs a label and a nominal")) break;
        need(c.tree.contains(*r.label), "label not in tree");
        Formula eq = Formula::at(*r.nominal, Formula::nom(*r.nominal));
        match(d, {}, {}, {Prem{{lf(*r.label, eq)}, {}, {}}});
        break;
      }
      case Rule::Rigid: {
        const auto* e = principal(Kind::Nom);
        if (!e || !need(r.label.has_value(), "rigid needs a target label")) break;
        need(c.tree.contains(*r.label), "target label not in tree");
        match(d, {*e}, {}, {Prem{{lf(*r.label, e->formula)}, {}, {}}});
        break;
      }
      case Rule::ImpR: {
        const auto* p = principal(Kind::Implies);
        if (!p) break;
        const Formula& b = p->formula.body();
        const Nominal& n = p->formula.name();
        match(d, {}, {*p}, {Prem{{lf(p->label, Formula::at(n, b.lhs()))}, {lf(p->label, Formula::at(n, b.rhs()))}, {}}});
        break;
      }
      case Rule::ImpL: {
        const auto* p = principal(Kind::Implies);
        if (!p) break;
        const Formula& b = p->formula.body();
        const Nominal& n = p->formula.name();
        match(d, {*p}, {},
              {Prem{{}, {lf(p->label, Formula::at(n, b.lhs()))}, {}}, Prem{{lf(p->label, Formula::at(n, b.rhs()))}, {}, {}}});
        break;
      }
      case Rule::AtR: {
        const auto* p = principal(Kind::At);
        if (p) match(d, {}, {*p}, {Prem{{}, {lf(p->label, p->formula.body())}, {}}});
        break;
      }
      case Rule::AtL: {
        const auto* p = principal(Kind::At);
        if (p) match(d, {*p}, {}, {Prem{{lf(p->label, p->formula.body())}, {}, {}}});
        break;
      }
      case Rule::FR: {
        const auto* p = principal(Kind::FBox);
        if (!p || !need(r.nominal.has_value(), "FR needs its fresh nominal")) break;
        need(!c.nominals().count(*r.nominal), "freshness of '" + *r.nominal + " in the conclusion");
        const Nominal& n = p->formula.name();
        Formula friend_atom = Formula::at(n, Formula::fdia(Formula::nom(*r.nominal)));
        match(d, {}, {*p},
              {Prem{{lf(p->label, friend_atom)}, {lf(p->label, Formula::at(*r.nominal, p->formula.body().body()))}, {}}});
        break;
      }
      case Rule::FL: {
        const auto* p = principal(Kind::FBox);
        if (!p || !need(r.nominal.has_value(), "FL needs its instance nominal")) break;
        const Nominal& n = p->formula.name();
        Formula friend_atom = Formula::at(n, Formula::fdia(Formula::nom(*r.nominal)));
        match(d, {*p}, {},
              {Prem{{}, {lf(p->label, friend_atom)}, {}},
               Prem{{lf(p->label, Formula::at(*r.nominal, p->formula.body().body()))}, {}, {}}});
        break;
      }
      case Rule::BoxR: {
        const auto* p = principal(Kind::KBox);
        if (!p || !need(r.label.has_value(), "boxR needs the new child label")) break;
        const Nominal& n = p->formula.name();
        const Label& beta = *r.label;
        if (!need(beta.is_child_of(p->label, n), "new label is not an n-child of the principal label")) break;
        need(!c.tree.contains(beta) && !c.tree.index_used_under(p->label, beta.path.back().index),
             "freshness of child index " + std::to_string(beta.path.back().index));
        match(d, {}, {*p}, {Prem{{}, {lf(beta, Formula::at(n, p->formula.body().body()))}, c.tree.with(beta)}});
        break;
      }
      case Rule::BoxL: {
        const auto* p = principal(Kind::KBox);
        if (!p || !need(r.label.has_value(), "boxL needs a target label")) break;
        const Nominal& n = p->formula.name();
        if (!need(c.tree.contains(*r.label), "target label not in tree")) break;
        need(reachable_box(p->label, *r.label, n, c.tree, cfg_.spec.logic),
             "target label not reachable (" + to_string(cfg_.spec.logic) + ")");
        match(d, {*p}, {}, {Prem{{lf(*r.label, Formula::at(n, p->formula.body().body()))}, {}, {}}});
        break;
      }
      case Rule::Wlab: {
        if (!need(r.label.has_value(), "wlab needs a label")) break;
        if (!need(c.tree.contains(*r.label) && !r.label->is_root(), "added label must be a non-root label of the tree")) break;
        std::set<Label> rest = c.tree.labels();
        rest.erase(*r.label);
        if (!need(LabelTree::is_tree(rest), "tree without the added label is not a tree")) break;
        match(d, {}, {}, {Prem{{}, {}, LabelTree(rest)}});
        break;
      }
      case Rule::Cut: {
        need(cfg_.allow_cut, "cut is not allowed");
        if (!need(r.principal.has_value(), "cut needs its cut formula")) break;
        if (!need(d.premises.size() == 2, "cut needs two premises")) break;
        const TreeSequent& p1 = d.premises[0].sequent;
        const TreeSequent& p2 = d.premises[1].sequent;
        const FormulaSet x = {*r.principal};
        need(p1.tree == c.tree && p2.tree == c.tree, "tree mismatch");
        need(p1.suc.count(*r.principal) && p2.ant.count(*r.principal), "cut formula missing from a premise");
        need(subset(join(p1.ant, minus(p2.ant, x)), c.ant) && subset(c.ant, join(p1.ant, p2.ant)),
             "antecedent is not the union of the premises'");
        need(subset(join(p2.suc, minus(p1.suc, x)), c.suc) && subset(c.suc, join(p1.suc, p2.suc)),
             "succedent is not the union of the premises'");
        break;
      }
      case Rule::Ri: {
        if (!need(r.theta && r.label, "ri needs a rule and a label")) break;
        if (!need(cfg_.spec.has_rule(*r.theta), "rule '" + r.theta->str() + "' is not in the frame class")) break;
        need(c.tree.contains(*r.label), "label not in tree");
        bool total = true;
        for (const auto& v : r.theta->variables()) total = total && r.inst.count(v);
        if (!need(total, "instantiation does not cover the rule's variables")) break;
        std::vector<Prem> prems;
        for (const auto& a : r.theta->antecedents) prems.push_back({{}, {lf(*r.label, a.renamed(r.inst).formula())}, {}});
        for (const auto& a : r.theta->consequents) prems.push_back({{lf(*r.label, a.renamed(r.inst).formula())}, {}, {}});
        match(d, {}, {}, prems);
        break;
      }
    }
  }

  const SystemConfig& cfg_;
  std::string path_, rule_;
};

}  // namespace

CheckResult check_derivation(const Derivation& d, const SystemConfig& cfg) {
  Checker ch(cfg);
  ch.check(d, "root");
  return CheckResult{std::move(ch.violations)};
}

// ---------------------------------------------------------------------------
// Admissible transformations

namespace {

void instance_nominals(const RuleInstance& r, std::set<Nominal>& out) {
  Symbols s;
  if (r.principal) {
    collect_symbols(r.principal->formula, s);
    for (const auto& st : r.principal->label.path) out.insert(st.nominal);
  }
  if (r.tmpl) collect_symbols(*r.tmpl, s);
  if (r.label) {
    for (const auto& st : r.label->path) out.insert(st.nominal);
  }
  if (r.nominal) out.insert(*r.nominal);
  for (const auto& [k, v] : r.inst) out.insert(v);
  out.insert(s.nominals.begin(), s.nominals.end());
}

FormulaSet map_set(const FormulaSet& s, const std::function<LabelledFormula(const LabelledFormula&)>& f) {
  FormulaSet out;
  for (const auto& x : s) out.insert(f(x));
  return out;
}

LabelTree map_tree(const LabelTree& t, const std::function<Label(const Label&)>& f) {
  std::set<Label> out;
  for (const auto& l : t.labels()) out.insert(f(l));
  if (out.size() != t.size()) throw std::invalid_argument("substitution collapses two labels of a tree");
  return LabelTree(out);
}

// Replace the prefix `from` by `to` in every label of the derivation.
Label relabel(const Label& l, const Label& from, const Label& to) {
  if (!from.is_prefix_of(l)) return l;
  Label out = to;
  out.path.insert(out.path.end(), l.path.begin() + from.path.size(), l.path.end());
  return out;
}

Derivation relabel_derivation(const Derivation& d, const Label& from, const Label& to) {
  auto fl = [&](const LabelledFormula& x) { return LabelledFormula{relabel(x.label, from, to), x.formula}; };
  auto tl = [&](const Label& l) { return relabel(l, from, to); };
  Derivation out;
  out.sequent = {map_set(d.sequent.ant, fl), map_tree(d.sequent.tree, tl), map_set(d.sequent.suc, fl)};
  out.rule = d.rule;
  if (out.rule.principal) out.rule.principal = fl(*out.rule.principal);
  if (out.rule.label) out.rule.label = tl(*out.rule.label);
  for (const auto& p : d.premises) out.premises.push_back(relabel_derivation(p, from, to));
  return out;
}

unsigned max_child_index(const Derivation& d, const Label& parent) {
  unsigned mx = 0;
  for (const auto& l : d.sequent.tree.labels()) {
    if (l.path.size() == parent.path.size() + 1 && parent.is_prefix_of(l)) mx = std::max(mx, l.path.back().index);
  }
  for (const auto& p : d.premises) mx = std::max(mx, max_child_index(p, parent));
  return mx;
}

// Adds label `a` (whose parent is in every tree below) to each node's tree.
Derivation add_label(const Derivation& d, const Label& a) {
  if (d.sequent.tree.contains(a)) return d;
  if (d.rule.rule == Rule::Wlab && d.rule.label == a) {
    // The premise lacks `a`; the weakened premise already has it.
    return add_label(d.premises[0], a);
  }
  Derivation out = d;
  out.sequent.tree = d.sequent.tree.with(a);
  out.premises.clear();
  if (d.rule.rule == Rule::BoxR) {
    const Label& beta = *d.rule.label;
    const Label parent = beta.parent();
    if (beta == a || out.sequent.tree.index_used_under(parent, beta.path.back().index)) {
      unsigned i = std::max(out.sequent.tree.fresh_index(parent), max_child_index(d.premises[0], parent) + 1);
      Label fresh = parent.child(beta.edge(), i);
      out.rule.label = fresh;
      out.premises.push_back(add_label(relabel_derivation(d.premises[0], beta, fresh), a));
      return out;
    }
  }
  for (const auto& p : d.premises) out.premises.push_back(add_label(p, a));
  return out;
}

Derivation subst_rec(const Derivation& d, const UniformSubstitution& s, std::set<Nominal>& avoid);

}  // namespace

std::set<Nominal> derivation_nominals(const Derivation& d) {
  std::set<Nominal> out = d.sequent.nominals();
  instance_nominals(d.rule, out);
  for (const auto& p : d.premises) {
    auto sub = derivation_nominals(p);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

Derivation weaken(const Derivation& d, const LabelledFormula& extra, Side side) {
  if (!d.sequent.tree.contains(extra.label)) throw std::invalid_argument("label " + extra.label.str() + " outside tree");
  if (!extra.formula.is(Kind::At)) throw std::invalid_argument("weakening formula is not @-prefixed");
  Derivation out = d;
  (side == Side::Left ? out.sequent.ant : out.sequent.suc).insert(extra);
  out.premises.clear();
  std::set<Nominal> extra_noms = symbols_of(extra.formula).nominals;
  for (const auto& st : extra.label.path) extra_noms.insert(st.nominal);

  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    Derivation p = d.premises[i];
    if (d.rule.rule == Rule::FR && extra_noms.count(*d.rule.nominal)) {
      std::set<Nominal> used = derivation_nominals(d);
      used.insert(extra_noms.begin(), extra_noms.end());
      Nominal fresh = fresh_nominal(used, *d.rule.nominal);
      UniformSubstitution s;
      s.noms[*d.rule.nominal] = fresh;
      p = substitute_derivation(p, s);
      out.rule.nominal = fresh;
    }
    if (d.rule.rule == Rule::Wlab && *d.rule.label == extra.label) {
      // Drop the wlab step: the premise gets the label instead.
      Derivation q = add_label(d.premises[0], extra.label);
      return weaken(q, extra, side);
    }
    out.premises.push_back(weaken(p, extra, side));
  }
  return out;
}

namespace {

Derivation subst_rec(const Derivation& d, const UniformSubstitution& s, std::set<Nominal>& avoid) {
  auto fl = [&](const LabelledFormula& x) {
    return LabelledFormula{rename_label(x.label, s.noms), apply_substitution(x.formula, s)};
  };
  auto tl = [&](const Label& l) { return rename_label(l, s.noms); };
  Derivation out;
  out.sequent = {map_set(d.sequent.ant, fl), map_tree(d.sequent.tree, tl), map_set(d.sequent.suc, fl)};
  out.rule = d.rule;
  const RuleInstance& r = d.rule;
  if (r.principal) out.rule.principal = fl(*r.principal);
  if (r.label) out.rule.label = tl(*r.label);
  for (auto& [k, v] : out.rule.inst) v = s.nominal(v);

  UniformSubstitution inner = s;
  if (r.rule == Rule::FR || r.rule == Rule::Rep1 || r.rule == Rule::Rep2) {
    // The bound nominal is renamed apart from everything the substitution touches.
    Nominal fresh = fresh_nominal(avoid, *r.nominal);
    avoid.insert(fresh);
    inner.noms[*r.nominal] = fresh;
    out.rule.nominal = fresh;
    if (r.tmpl) out.rule.tmpl = apply_substitution(*r.tmpl, inner);
  } else if (r.nominal) {
    out.rule.nominal = s.nominal(*r.nominal);
  }
  const UniformSubstitution& below = r.rule == Rule::FR ? inner : s;
  for (const auto& p : d.premises) out.premises.push_back(subst_rec(p, below, avoid));
  return out;
}

}  // namespace

Derivation substitute_derivation(const Derivation& d, const UniformSubstitution& s) {
  if (s.empty()) return d;
  std::set<Nominal> avoid = derivation_nominals(d);
  for (const auto& [k, v] : s.noms) {
    avoid.insert(k);
    avoid.insert(v);
  }
  for (const auto& [p, f] : s.props) {
    auto sym = symbols_of(f);
    avoid.insert(sym.nominals.begin(), sym.nominals.end());
  }
  return subst_rec(d, s, avoid);
}

}  // namespace efl
