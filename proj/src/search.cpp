#include "efl/search.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace efl {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "proved";
    case Verdict::Refuted: return "refuted";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

TreeSequent formula_sequent(const Formula& phi, const std::string& base) {
  std::set<Nominal> used = symbols_of(phi).nominals;
  Nominal n = used.count(base) ? fresh_nominal(used, base) : base;
  TreeSequent s;
  s.tree = LabelTree::single(0);
  s.suc.insert({Label::root_label(0), Formula::at(n, phi)});
  return s;
}

namespace {

using LF = LabelledFormula;

std::optional<std::pair<Nominal, Nominal>> as_equality(const Formula& f) {
  if (f.is(Kind::At) && f.body().is(Kind::Nom)) return std::make_pair(f.name(), f.body().name());
  return std::nullopt;
}

bool is_friend_atom(const Formula& f) { return f.is(Kind::At) && as_friend_of(f.body()).has_value(); }

// Equalities of an antecedent as an undirected graph over nominals.
class EqGraph {
 public:
  struct Edge {
    Nominal to;
    LF atom;
  };

  void build(const FormulaSet& ant, const std::set<Nominal>& noms) {
    adj_.clear();
    rename_.clear();
    for (const auto& g : ant) {
      auto e = as_equality(g.formula);
      if (!e || e->first == e->second) continue;
      adj_[e->first].push_back({e->second, g});
      adj_[e->second].push_back({e->first, g});
    }
    // Representative: least nominal of each component.
    std::set<Nominal> seen;
    for (const auto& n : noms) {
      if (seen.count(n) || !adj_.count(n)) continue;
      std::vector<Nominal> comp{n};
      seen.insert(n);
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (const auto& e : adj_[comp[i]]) {
          if (seen.insert(e.to).second) comp.push_back(e.to);
        }
      }
      const Nominal& rep = *std::min_element(comp.begin(), comp.end());
      for (const auto& x : comp) {
        if (x != rep) rename_[x] = rep;
      }
    }
  }

  Nominal rep(const Nominal& n) const {
    auto it = rename_.find(n);
    return it == rename_.end() ? n : it->second;
  }
  const std::map<Nominal, Nominal>& renaming() const { return rename_; }

  // Equality steps leading from x to y; empty if x == y.
  std::vector<std::pair<Nominal, Edge>> path(const Nominal& x, const Nominal& y) const {
    std::map<Nominal, std::pair<Nominal, const Edge*>> prev;
    std::deque<Nominal> q{x};
    prev[x] = {x, nullptr};
    while (!q.empty() && !prev.count(y)) {
      Nominal cur = q.front();
      q.pop_front();
      auto it = adj_.find(cur);
      if (it == adj_.end()) continue;
      for (const auto& e : it->second) {
        if (prev.count(e.to)) continue;
        prev[e.to] = {cur, &e};
        q.push_back(e.to);
      }
    }
    if (!prev.count(y)) throw std::logic_error("no equality path between '" + x + " and '" + y);
    std::vector<std::pair<Nominal, Edge>> out;  // (from, edge) in order
    for (Nominal cur = y; cur != x; cur = prev[cur].first) out.push_back({prev[cur].first, *prev[cur].second});
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  std::map<Nominal, std::vector<Edge>> adj_;
  std::map<Nominal, Nominal> rename_;
};

// A box witness left to an ancestor with the same content; the derived model
// gets an edge back to it.
struct Loop {
  Label from, to;
  Nominal nominal;
};

struct Closure {
  enum Kind { Bot, Id, Match, Eq } kind;
  LF from;  // Bot: principal; Match: antecedent witness
  LF to;    // Id/Match/Eq: succedent formula
};

// A linear step, stored as what it added to the branch.
struct Premise {
  Side side;
  LabelledFormula lf;
};

struct Pending {
  RuleInstance rule;
  std::vector<Derivation> before;  // premises left of the continuation
  std::vector<LabelledFormula> ant, suc;
  std::optional<Label> label;
};

struct Branch {
  TreeSequent s;
  EqGraph eq;
  std::map<LF, LF> cant, csuc;  // canonical form -> first literal witness
  std::optional<Closure> closable;

  std::deque<std::pair<Side, LF>> agenda;  // @L, @R, ->R
  std::vector<LF> imps_ant, fbox_ant, box_ant, friends_ant, fbox_suc, box_suc;
  std::set<LF> done;
  std::set<std::pair<LF, Nominal>> fl_done;
  std::set<std::tuple<LF, Label, Nominal>> boxl_done;
  std::set<LF> witnessed;
  std::vector<Loop> loops;
  Pending* journal = nullptr;  // the step being applied, if any
  std::size_t depth = 0;       // longest label path

  Branch fork() const {
    Branch c = *this;
    c.journal = nullptr;
    return c;
  }

  LF canon(const LF& x) const { return {x.label, rename_nominals(x.formula, eq.renaming())}; }
  bool in_ant(const LF& x) const { return cant.count(canon(x)) != 0; }
  bool in_suc(const LF& x) const { return csuc.count(canon(x)) != 0; }

  void note_suc_closure(const LF& d) {
    if (closable) return;
    if (s.ant.count(d)) {
      closable = Closure{Closure::Id, d, d};
    } else if (auto it = cant.find(canon(d)); it != cant.end()) {
      closable = Closure{Closure::Match, it->second, d};
    } else if (auto e = as_equality(d.formula); e && eq.rep(e->first) == eq.rep(e->second)) {
      closable = Closure{Closure::Eq, d, d};
    }
  }

  void note_ant_closure(const LF& g) {
    if (closable) return;
    if (g.formula.body().is(Kind::Falsum)) {
      closable = Closure{Closure::Bot, g, g};
    } else if (s.suc.count(g)) {
      closable = Closure{Closure::Id, g, g};
    } else if (auto it = csuc.find(canon(g)); it != csuc.end()) {
      closable = Closure{Closure::Match, g, it->second};
    }
  }

  void rebuild() {
    eq.build(s.ant, s.nominals());
    cant.clear();
    csuc.clear();
    closable.reset();
    for (const auto& g : s.ant) cant.emplace(canon(g), g);
    for (const auto& d : s.suc) csuc.emplace(canon(d), d);
    for (const auto& g : s.ant) note_ant_closure(g);
    for (const auto& d : s.suc) note_suc_closure(d);
  }

  void index(Side side, const LF& x) {
    const Formula& b = x.formula.body();
    if (side == Side::Left) {
      if (b.is(Kind::At)) agenda.push_back({side, x});
      if (is_friend_atom(x.formula)) friends_ant.push_back(x);
      else if (b.is(Kind::Implies)) imps_ant.push_back(x);
      if (b.is(Kind::FBox)) fbox_ant.push_back(x);
      if (b.is(Kind::KBox)) box_ant.push_back(x);
    } else {
      if (b.is(Kind::At) || (b.is(Kind::Implies) && !is_friend_atom(x.formula))) agenda.push_back({side, x});
      if (b.is(Kind::FBox)) fbox_suc.push_back(x);
      if (b.is(Kind::KBox)) box_suc.push_back(x);
    }
  }

  void add_ant(const LF& g) {
    if (!s.ant.insert(g).second) return;
    if (journal) journal->ant.push_back(g);
    index(Side::Left, g);
    auto e = as_equality(g.formula);
    if (e && e->first != e->second && eq.rep(e->first) != eq.rep(e->second)) {
      rebuild();
      return;
    }
    if (e && e->first != e->second) {
      // Same classes, but the graph gains an edge usable by rewriting.
      eq.build(s.ant, s.nominals());
    }
    cant.emplace(canon(g), g);
    note_ant_closure(g);
  }

  void add_suc(const LF& d) {
    if (!s.suc.insert(d).second) return;
    if (journal) journal->suc.push_back(d);
    index(Side::Right, d);
    csuc.emplace(canon(d), d);
    note_suc_closure(d);
  }

  std::pair<std::set<Formula>, std::set<Formula>> content(const Label& l) const {
    std::pair<std::set<Formula>, std::set<Formula>> out;
    for (const auto& g : s.ant) {
      if (g.label == l) out.first.insert(canon(g).formula);
    }
    for (const auto& d : s.suc) {
      if (d.label == l) out.second.insert(canon(d).formula);
    }
    return out;
  }

  std::optional<Label> blocker(const Label& l) const {
    auto mine = content(l);
    for (Label a = l; !a.is_root();) {
      a = a.parent();
      if (content(a) == mine) return a;
    }
    return std::nullopt;
  }

  std::vector<Nominal> reps() const {
    std::set<Nominal> out;
    for (const auto& n : s.nominals()) out.insert(eq.rep(n));
    return {out.begin(), out.end()};
  }
};

// Weight of a sequent as held in memory: labels carry their path.
std::size_t sequent_weight(const TreeSequent& s) {
  std::size_t depth = 0;
  for (const auto& l : s.tree.labels()) depth = std::max(depth, l.path.size());
  return (s.ant.size() + s.suc.size()) * (1 + depth);
}

// `retained` grows by the weight of the nodes built here.
Derivation fold(std::vector<Pending>& stack, Derivation top, std::size_t& retained) {
  retained += (stack.size() + 1) * sequent_weight(top.sequent);
  // Conclusions are recovered from the premise by dropping what the step added.
  for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
    TreeSequent conc = top.sequent;
    for (const auto& g : it->ant) conc.ant.erase(g);
    for (const auto& d : it->suc) conc.suc.erase(d);
    if (it->label) {
      std::set<Label> labels = conc.tree.labels();
      labels.erase(*it->label);
      conc.tree = LabelTree(std::move(labels));
    }
    Derivation d{std::move(conc), std::move(it->rule), std::move(it->before)};
    d.premises.push_back(std::move(top));
    top = std::move(d);
  }
  stack.clear();
  return top;
}

RuleInstance instance(Rule r) {
  RuleInstance i;
  i.rule = r;
  return i;
}

class Engine {
 public:
  Engine(const SystemConfig& cfg, const SearchConfig& sc) : cfg_(cfg), sc_(sc) {}

  struct Result {
    enum Kind { Closed, Open, OutOfFuel, Stepped } kind;
    std::optional<Derivation> derivation;
    std::optional<TreeSequent> open;
    std::vector<Loop> loops;
  };

  Result run(Branch b) {
    std::vector<Pending> stack;
    while (true) {
      if (b.closable) return {Result::Closed, fold(stack, close(b, stack), retained_), {}, {}};
      if (stats.rules >= sc_.fuel || live_ + retained_ + weight(b) > kLiveBudget) {
        return {Result::OutOfFuel, {}, {}, {}};
      }
      if (linear_step(b, stack)) continue;
      if (auto r = branching_step(b, stack)) {
        if (r->kind == Result::Stepped) continue;
        return std::move(*r);
      }
      if (witness_step(b, stack)) continue;
      return {Result::Open, {}, b.s, b.loops};
    }
  }

  SearchStats stats;

 private:
  void step(Branch& b, std::vector<Pending>& stack, RuleInstance r, std::vector<Derivation> before = {}) {
    stack.push_back({std::move(r), std::move(before), {}, {}, {}});
    b.journal = &stack.back();
    ++stats.rules;
  }

  // Rewrites the nominal occurrences of `g` (in the antecedent) one at a time
  // along equality paths until it reads `target`.
  void rewrite(Branch& b, std::vector<Pending>& stack, const LF& g, const Formula& target) {
    Formula cur = g.formula;
    auto want = nominal_occurrences(target);
    for (std::size_t idx = 0; idx < want.size(); ++idx) {
      auto have = nominal_occurrences(cur);
      if (have[idx] == want[idx]) continue;
      for (const auto& [from, edge] : b.eq.path(have[idx], want[idx])) {
        const LF& atom = edge.atom;
        const Nominal& to = edge.to;
        LF here{g.label, atom.formula};
        if (!b.s.ant.count(here)) {
          RuleInstance r = instance(Rule::Rigid);
          r.principal = atom;
          r.label = g.label;
          step(b, stack, r);
          b.add_ant(here);
        }
        auto [n, m] = *as_equality(atom.formula);
        Symbols sym = symbols_of(cur);
        sym.nominals.insert(n);
        sym.nominals.insert(m);
        Nominal k = fresh_nominal(sym.nominals, "k");
        Formula next = replace_occurrence(cur, idx, to);
        if (!b.s.ant.count({g.label, next})) {
          RuleInstance r = instance(from == n ? Rule::Rep2 : Rule::Rep1);
          r.principal = here;
          r.tmpl = replace_occurrence(cur, idx, k);
          r.nominal = k;
          step(b, stack, r);
          b.add_ant({g.label, next});
        }
        cur = next;
      }
    }
  }

  Derivation close(Branch& b, std::vector<Pending>& stack) {
    Closure c = *b.closable;
    auto leaf = [&](Rule rule, const LF& p) {
      RuleInstance r = instance(rule);
      r.principal = p;
      return Derivation{b.s, r, {}};
    };
    switch (c.kind) {
      case Closure::Bot: return leaf(Rule::Bot, c.from);
      case Closure::Id: return leaf(Rule::Id, c.to);
      case Closure::Match:
        rewrite(b, stack, c.from, c.to.formula);
        return leaf(Rule::Id, c.to);
      case Closure::Eq: {
        auto [x, y] = *as_equality(c.to.formula);
        LF refl{c.to.label, Formula::at(x, Formula::nom(x))};
        if (!b.s.ant.count(refl)) {
          RuleInstance r = instance(Rule::Ref);
          r.label = c.to.label;
          r.nominal = x;
          step(b, stack, r);
          b.add_ant(refl);
        }
        if (x != y) rewrite(b, stack, refl, c.to.formula);
        return leaf(Rule::Id, c.to);
      }
    }
    throw std::logic_error("unreachable");
  }

  // Closes a side premise that is closable by construction.
  Derivation close_now(Branch b) {
    if (!b.closable) throw std::logic_error("side premise expected to close does not");
    std::vector<Pending> stack;
    Derivation top = close(b, stack);
    return fold(stack, std::move(top), retained_);
  }

  bool linear_step(Branch& b, std::vector<Pending>& stack) {
    while (!b.agenda.empty()) {
      auto [side, x] = b.agenda.front();
      b.agenda.pop_front();
      if (!b.done.insert(x).second) continue;
      const Formula& body = x.formula.body();
      if (body.is(Kind::At)) {
        LF inner{x.label, body};
        if (side == Side::Left ? b.s.ant.count(inner) : b.s.suc.count(inner)) continue;
        RuleInstance r = instance(side == Side::Left ? Rule::AtL : Rule::AtR);
        r.principal = x;
        step(b, stack, r);
        side == Side::Left ? b.add_ant(inner) : b.add_suc(inner);
        return true;
      }
      // ->R
      LF a{x.label, Formula::at(x.formula.name(), body.lhs())};
      LF c{x.label, Formula::at(x.formula.name(), body.rhs())};
      if (b.s.ant.count(a) && b.s.suc.count(c)) continue;
      RuleInstance r = instance(Rule::ImpR);
      r.principal = x;
      step(b, stack, r);
      b.add_ant(a);
      b.add_suc(c);
      return true;
    }

    // FL, instantiated with the friends recorded in the antecedent.
    for (std::size_t i = 0; i < b.fbox_ant.size(); ++i) {
      LF g = b.fbox_ant[i];
      const Nominal n = g.formula.name();
      for (std::size_t j = 0; j < b.friends_ant.size(); ++j) {
        LF fa = b.friends_ant[j];
        if (fa.label != g.label || b.eq.rep(fa.formula.name()) != b.eq.rep(n)) continue;
        Nominal y = *as_friend_of(fa.formula.body());
        if (!b.fl_done.insert({g, y}).second) continue;
        LF conc{g.label, Formula::at(y, g.formula.body().body())};
        if (b.in_ant(conc)) continue;
        Branch side = b.fork();
        side.add_suc({g.label, Formula::at(n, Formula::fdia(Formula::nom(y)))});
        RuleInstance r = instance(Rule::FL);
        r.principal = g;
        r.nominal = y;
        std::vector<Derivation> before;
        before.push_back(close_now(std::move(side)));
        step(b, stack, r, std::move(before));
        b.add_ant(conc);
        return true;
      }
    }

    // boxL to every reachable label, via any nominal of the subscript's class.
    for (std::size_t i = 0; i < b.box_ant.size(); ++i) {
      LF g = b.box_ant[i];
      const Nominal n = g.formula.name();
      for (const auto& [beta, x] : box_targets(b, g.label, n)) {
        if (!b.boxl_done.insert({g, beta, x}).second) continue;
        LF conc{beta, Formula::at(x, g.formula.body().body())};
        if (b.in_ant(conc)) continue;
        LF principal{g.label, Formula::at(x, g.formula.body())};
        if (!b.s.ant.count(principal)) rewrite(b, stack, g, principal.formula);
        RuleInstance r = instance(Rule::BoxL);
        r.principal = principal;
        r.label = beta;
        step(b, stack, r);
        b.add_ant(conc);
        return true;
      }
    }
    return false;
  }

  // Labels reachable from `alpha` for a box with subscript class of n, with
  // the literal edge nominal to use.
  std::vector<std::pair<Label, Nominal>> box_targets(const Branch& b, const Label& alpha, const Nominal& n) {
    std::vector<std::pair<Label, Nominal>> out;
    const Nominal rn = b.eq.rep(n);
    const BoxLogic logic = cfg_.spec.logic;
    if (logic != BoxLogic::K) out.push_back({alpha, n});
    std::set<Nominal> edge_noms;
    for (const auto& l : b.s.tree.labels()) {
      if (!l.is_root() && b.eq.rep(l.edge()) == rn) edge_noms.insert(l.edge());
    }
    for (const auto& x : edge_noms) {
      for (const auto& beta : b.s.tree.labels()) {
        if (beta == alpha) continue;
        if (reachable_box(alpha, beta, x, b.s.tree, logic)) out.push_back({beta, x});
      }
    }
    return out;
  }

  std::optional<Result> branching_step(Branch& b, std::vector<Pending>& stack) {
    // ->L, preferring instances with a premise that closes at once.
    std::optional<LF> pick;
    for (const auto& g : b.imps_ant) {
      if (b.done.count(g)) continue;
      const Formula& body = g.formula.body();
      LF a{g.label, Formula::at(g.formula.name(), body.lhs())};
      LF c{g.label, Formula::at(g.formula.name(), body.rhs())};
      if (b.in_suc(a) || b.in_ant(c)) {
        b.done.insert(g);
        continue;
      }
      bool quick = b.in_ant(a) || body.rhs().is(Kind::Falsum) || b.in_suc(c);
      if (quick) {
        pick = g;
        break;
      }
      if (!pick) pick = g;
    }
    if (pick) {
      const LF g = *pick;
      b.done.insert(g);
      const Formula& body = g.formula.body();
      RuleInstance r = instance(Rule::ImpL);
      r.principal = g;
      return split(b, stack, r, {},
                   {{Side::Right, {g.label, Formula::at(g.formula.name(), body.lhs())}},
                    {Side::Left, {g.label, Formula::at(g.formula.name(), body.rhs())}}});
    }

    // Regular-implication rules whose antecedent holds and consequent fails.
    const auto& theta = cfg_.spec.theta;
    if (theta.empty()) return std::nullopt;
    std::vector<Nominal> reps = b.reps();
    for (const auto& ri : theta) {
      const auto var_set = ri.variables();
      std::vector<Nominal> vars(var_set.begin(), var_set.end());
      for (const auto& alpha : b.s.tree.labels()) {
        std::vector<std::size_t> v(vars.size(), 0);
        if (reps.empty() && !vars.empty()) break;
        while (true) {
          std::map<Nominal, Nominal> inst;
          for (std::size_t i = 0; i < vars.size(); ++i) inst[vars[i]] = reps[v[i]];
          auto holds = [&](const RelAtom& a) {
            RelAtom x = a.renamed(inst);
            if (x.type == RelAtom::Type::Eq) return b.eq.rep(x.lhs) == b.eq.rep(x.rhs);
            return b.in_ant({alpha, x.formula()});
          };
          if (std::all_of(ri.antecedents.begin(), ri.antecedents.end(), holds) &&
              std::none_of(ri.consequents.begin(), ri.consequents.end(), holds)) {
            if (auto res = fire_ri(b, stack, ri, alpha, inst)) return res;
            return Result{Result::Stepped, {}, {}, {}};
          }
          std::size_t i = 0;
          while (i < v.size() && ++v[i] == reps.size()) v[i++] = 0;
          if (i == v.size()) break;
        }
      }
    }
    return std::nullopt;
  }

  std::optional<Result> fire_ri(Branch& b, std::vector<Pending>& stack, const RegularImplication& ri,
                                const Label& alpha, const std::map<Nominal, Nominal>& inst) {
    RuleInstance r = instance(Rule::Ri);
    r.theta = ri;
    r.label = alpha;
    r.inst = inst;
    std::vector<Premise> closed, open;
    for (const auto& a : ri.antecedents) closed.push_back({Side::Right, {alpha, a.renamed(inst).formula()}});
    for (const auto& a : ri.consequents) open.push_back({Side::Left, {alpha, a.renamed(inst).formula()}});
    if (open.size() != 1) return split(b, stack, r, closed, open);
    std::vector<Derivation> before;
    for (const auto& p : closed) before.push_back(close_now(extend(b.fork(), p)));
    step(b, stack, r, std::move(before));
    b.add_ant(open.front().lf);
    return std::nullopt;
  }

  static Branch extend(Branch br, const Premise& p) {
    p.side == Side::Left ? br.add_ant(p.lf) : br.add_suc(p.lf);
    return br;
  }

  // Closes the `closed` premises at once and explores the others depth-first;
  // the first one left open decides. The parent branch is consumed.
  Result split(Branch& b, std::vector<Pending>& stack, const RuleInstance& r, const std::vector<Premise>& closed,
               const std::vector<Premise>& open) {
    ++stats.rules;
    TreeSequent conc;
    if (closed.empty() && open.empty()) conc = b.s;
    bool had = false;
    if (!closed.empty() || !open.empty()) {
      const Premise& p = closed.empty() ? open.front() : closed.front();
      had = (p.side == Side::Left ? b.s.ant : b.s.suc).count(p.lf) != 0;
    }
    std::vector<Derivation> premises;
    const std::size_t size = weight(b);
    live_ += size;
    for (std::size_t i = 0; i < closed.size() + open.size(); ++i) {
      const bool is_open = i >= closed.size();
      const Premise& p = is_open ? open[i - closed.size()] : closed[i];
      const bool last = i + 1 == closed.size() + open.size();
      if (last) live_ -= size;
      Branch br = extend(last ? std::move(b) : b.fork(), p);
      if (!is_open) {
        premises.push_back(close_now(std::move(br)));
        continue;
      }
      Result sub = run(std::move(br));
      if (sub.kind != Result::Closed) {
        if (!last) live_ -= size;
        return sub;
      }
      premises.push_back(std::move(*sub.derivation));
    }
    if (!premises.empty()) {
      // The conclusion is the first premise without what that premise added.
      const Premise& p = closed.empty() ? open.front() : closed.front();
      conc = premises.front().sequent;
      auto& set = p.side == Side::Left ? conc.ant : conc.suc;
      if (!had) set.erase(p.lf);
    }
    return {Result::Closed, fold(stack, Derivation{std::move(conc), r, std::move(premises)}, retained_), {}, {}};
  }

  bool witness_step(Branch& b, std::vector<Pending>& stack) {
    for (std::size_t i = 0; i < b.box_suc.size(); ++i) {
      LF d = b.box_suc[i];
      if (!b.witnessed.insert(b.canon(d)).second) continue;
      const Nominal n = d.formula.name();
      const Formula& phi = d.formula.body().body();
      bool satisfied = false;
      for (const auto& beta : b.s.tree.children(d.label)) {
        if (b.eq.rep(beta.edge()) == b.eq.rep(n) && b.in_suc({beta, Formula::at(beta.edge(), phi)})) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      if (sc_.blocking && cfg_.spec.logic != BoxLogic::K) {
        if (auto to = b.blocker(d.label)) {
          b.loops.push_back({d.label, *to, n});
          continue;
        }
      }
      Label beta = d.label.child(n, b.s.tree.fresh_index(d.label));
      RuleInstance r = instance(Rule::BoxR);
      r.principal = d;
      r.label = beta;
      step(b, stack, r);
      ++stats.labels;
      b.s.tree = b.s.tree.with(beta);
      b.depth = std::max(b.depth, beta.path.size());
      b.journal->label = beta;
      b.add_suc({beta, Formula::at(n, phi)});
      return true;
    }
    for (std::size_t i = 0; i < b.fbox_suc.size(); ++i) {
      LF d = b.fbox_suc[i];
      if (!b.witnessed.insert(b.canon(d)).second) continue;
      const Nominal n = d.formula.name();
      const Formula& phi = d.formula.body().body();
      bool satisfied = false;
      for (const auto& fa : b.friends_ant) {
        if (fa.label == d.label && b.eq.rep(fa.formula.name()) == b.eq.rep(n) &&
            b.in_suc({d.label, Formula::at(*as_friend_of(fa.formula.body()), phi)})) {
          satisfied = true;
          break;
        }
      }
      if (satisfied) continue;
      Nominal m = fresh_nominal(b.s.nominals(), "m");
      RuleInstance r = instance(Rule::FR);
      r.principal = d;
      r.nominal = m;
      step(b, stack, r);
      ++stats.nominals;
      b.add_ant({d.label, Formula::at(n, Formula::fdia(Formula::nom(m)))});
      b.add_suc({d.label, Formula::at(m, phi)});
      return true;
    }
    return false;
  }

  // Formulas held by branches waiting on a sibling and by finished
  // subderivations; bounds memory on searches that grow large before running
  // out of fuel.
  static constexpr std::size_t kLiveBudget = 4000000;
  // Labels carry their path, so deep trees cost more per formula.
  // The index maps and bookkeeping sets are counted as well.
  static std::size_t weight(const Branch& b) {
    const std::size_t entries = 3 * (b.s.ant.size() + b.s.suc.size()) + 2 * b.boxl_done.size() + b.done.size() +
                                b.fl_done.size() + b.witnessed.size();
    return entries * (1 + b.depth);
  }
  std::size_t live_ = 0;
  std::size_t retained_ = 0;
  const SystemConfig& cfg_;
  const SearchConfig& sc_;
};

void close_relation(Model& m, int a, BoxLogic logic) {
  const int W = static_cast<int>(m.num_worlds());
  if (logic == BoxLogic::K) return;
  for (int w = 0; w < W; ++w) m.set_r(a, w, w);
  if (logic == BoxLogic::S5) {
    for (int w = 0; w < W; ++w) {
      for (int v = 0; v < W; ++v) {
        if (m.r(a, w, v)) m.set_r(a, v, w);
      }
    }
  }
  for (int k = 0; k < W; ++k) {
    for (int i = 0; i < W; ++i) {
      if (!m.r(a, i, k)) continue;
      for (int j = 0; j < W; ++j) {
        if (m.r(a, k, j)) m.set_r(a, i, j);
      }
    }
  }
}

Countermodel extract(const TreeSequent& s, BoxLogic logic, const std::vector<Loop>& loops) {
  std::set<Nominal> noms = s.nominals();
  if (noms.empty()) noms.insert(fresh_nominal(noms, "a"));
  EqGraph eq;
  eq.build(s.ant, noms);
  std::vector<std::string> worlds, agents;
  std::map<Label, int> world;
  for (const auto& l : s.tree.labels()) {
    world[l] = static_cast<int>(worlds.size());
    worlds.push_back(l.str());
  }
  std::set<Nominal> reps;
  for (const auto& n : noms) reps.insert(eq.rep(n));
  agents.assign(reps.begin(), reps.end());
  Countermodel cm;
  Model& m = cm.model;
  m = Model(worlds, agents);
  for (const auto& n : noms) m.nominals[n] = m.agent_index(eq.rep(n));
  for (const auto& l : s.tree.labels()) {
    if (!l.is_root()) m.set_r(m.denotation(l.edge()), world[l.parent()], world[l]);
  }
  for (const auto& l : loops) m.set_r(m.denotation(l.nominal), world[l.from], world[l.to]);
  for (int a = 0; a < static_cast<int>(agents.size()); ++a) close_relation(m, a, logic);
  for (const auto& g : s.ant) {
    const Formula& body = g.formula.body();
    int a = m.denotation(g.formula.name());
    if (auto y = as_friend_of(body)) m.set_fr(world[g.label], a, m.denotation(*y));
    if (body.is(Kind::Prop)) m.set_val(body.name(), world[g.label], a);
  }
  Symbols props;
  for (const auto* side : {&s.ant, &s.suc}) {
    for (const auto& x : *side) collect_symbols(x.formula, props);
  }
  for (const auto& p : props.props) {
    if (!m.val.count(p)) m.val[p].assign(worlds.size() * agents.size(), 0);
  }
  for (const auto& [l, w] : world) cm.assignment[l] = w;
  return cm;
}

}  // namespace

Countermodel extract_countermodel(const TreeSequent& s, BoxLogic logic) { return extract(s, logic, {}); }

SearchOutcome prove(const TreeSequent& s, const SystemConfig& cfg, const SearchConfig& sc) {
  s.validate();
  if (sc.fuel < 1) throw std::invalid_argument("fuel must be at least 1");
  Engine engine(cfg, sc);
  Branch root;
  root.s = s;
  for (const auto& g : s.ant) root.index(Side::Left, g);
  for (const auto& d : s.suc) root.index(Side::Right, d);
  for (const auto& l : s.tree.labels()) root.depth = std::max(root.depth, l.path.size());
  root.rebuild();
  Engine::Result r = engine.run(std::move(root));
  SearchOutcome out;
  out.stats = engine.stats;
  switch (r.kind) {
    case Engine::Result::Closed:
      out.verdict = Verdict::Proved;
      out.derivation = std::move(r.derivation);
      break;
    case Engine::Result::Stepped:
    case Engine::Result::OutOfFuel: out.verdict = Verdict::Unknown; break;
    case Engine::Result::Open: {
      Countermodel cm = extract(*r.open, cfg.spec.logic, r.loops);
      Assignment f;
      for (const auto& l : s.tree.labels()) f[l] = cm.assignment.at(l);
      cm.assignment = f;
      if (frame_in_class(cm.model, cfg.spec) && !sequent_true(cm.model, f, s)) {
        out.verdict = Verdict::Refuted;
        out.countermodel = std::move(cm);
      } else {
        out.verdict = Verdict::Unknown;
        out.stats.unverified = 1;
      }
      break;
    }
  }
  return out;
}

}  // namespace efl
