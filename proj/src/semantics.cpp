#include "efl/semantics.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace efl {

Model::Model(std::vector<std::string> w, std::vector<std::string> a) : worlds(std::move(w)), agents(std::move(a)) {
  R.assign(agents.size(), std::vector<std::uint8_t>(worlds.size() * worlds.size(), 0));
  friends.assign(worlds.size(), std::vector<std::uint8_t>(agents.size() * agents.size(), 0));
}

bool Model::holds(const Prop& p, int w, int a) const {
  auto it = val.find(p);
  return it != val.end() && it->second[w * agents.size() + a] != 0;
}

void Model::set_val(const Prop& p, int w, int a, bool on) {
  auto& v = val[p];
  if (v.empty()) v.assign(worlds.size() * agents.size(), 0);
  v[w * agents.size() + a] = on;
}

int Model::world_index(const std::string& id) const {
  auto it = std::find(worlds.begin(), worlds.end(), id);
  return it == worlds.end() ? -1 : static_cast<int>(it - worlds.begin());
}

int Model::agent_index(const std::string& id) const {
  auto it = std::find(agents.begin(), agents.end(), id);
  return it == agents.end() ? -1 : static_cast<int>(it - agents.begin());
}

int Model::denotation(const Nominal& n) const {
  auto it = nominals.find(n);
  if (it == nominals.end()) throw SemanticsError("nominal '" + n + " has no denotation");
  return it->second;
}

bool satisfies(const Model& m, int w, int a, const Formula& f) {
  switch (f.kind()) {
    case Kind::Nom: return m.denotation(f.name()) == a;
    case Kind::Prop: return m.holds(f.name(), w, a);
    case Kind::Falsum: return false;
    case Kind::Implies: return !satisfies(m, w, a, f.lhs()) || satisfies(m, w, a, f.rhs());
    case Kind::At: return satisfies(m, w, m.denotation(f.name()), f.body());
    case Kind::FBox:
      for (int b = 0; b < static_cast<int>(m.num_agents()); ++b) {
        if (m.fr(w, a, b) && !satisfies(m, w, b, f.body())) return false;
      }
      return true;
    case Kind::KBox:
      for (int v = 0; v < static_cast<int>(m.num_worlds()); ++v) {
        if (m.r(a, w, v) && !satisfies(m, v, a, f.body())) return false;
      }
      return true;
  }
  return false;
}

bool satisfies(const Model& m, const std::string& w, const std::string& a, const Formula& f) {
  int wi = m.world_index(w), ai = m.agent_index(a);
  if (wi < 0) throw SemanticsError("unknown world '" + w + "'");
  if (ai < 0) throw SemanticsError("unknown agent '" + a + "'");
  Symbols s = symbols_of(f);
  for (const auto& n : s.nominals) m.denotation(n);
  return satisfies(m, wi, ai, f);
}

bool labelled_true(const Model& m, const Assignment& f, const LabelledFormula& lf) {
  auto it = f.find(lf.label);
  if (it == f.end()) throw SemanticsError("assignment does not cover label " + lf.label.str());
  return satisfies(m, it->second, 0, lf.formula);
}

bool is_assignment(const Model& m, const LabelTree& t, const Assignment& f) {
  if (f.size() != t.size()) return false;
  for (const auto& l : t.labels()) {
    auto it = f.find(l);
    if (it == f.end() || it->second < 0 || it->second >= static_cast<int>(m.num_worlds())) return false;
    if (!l.is_root()) {
      auto nit = m.nominals.find(l.edge());
      if (nit == m.nominals.end()) return false;
      if (!m.r(nit->second, f.at(l.parent()), it->second)) return false;
    }
  }
  return true;
}

bool sequent_true(const Model& m, const Assignment& f, const TreeSequent& s) {
  if (!is_assignment(m, s.tree, f)) throw SemanticsError("assignment does not match the sequent's tree");
  for (const auto& lf : s.ant) {
    if (!labelled_true(m, f, lf)) return true;
  }
  for (const auto& lf : s.suc) {
    if (labelled_true(m, f, lf)) return true;
  }
  return false;
}

void enumerate_assignments(const Model& m, const LabelTree& t, const std::function<bool(const Assignment&)>& visit) {
  std::vector<Label> order(t.labels().begin(), t.labels().end());
  // Parents precede children: sort by depth.
  std::stable_sort(order.begin(), order.end(), [](const Label& a, const Label& b) { return a.path.size() < b.path.size(); });
  std::vector<int> edge_agent(order.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i].is_root()) continue;
    auto it = m.nominals.find(order[i].edge());
    if (it == m.nominals.end()) return;  // an undenoted edge admits no assignment
    edge_agent[i] = it->second;
  }
  Assignment f;
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (stop) return;
    if (i == order.size()) {
      if (!visit(f)) stop = true;
      return;
    }
    for (int w = 0; w < static_cast<int>(m.num_worlds()) && !stop; ++w) {
      if (!order[i].is_root() && !m.r(edge_agent[i], f.at(order[i].parent()), w)) continue;
      f[order[i]] = w;
      go(i + 1);
    }
    f.erase(order[i]);
  };
  go(0);
}

std::vector<Assignment> all_assignments(const Model& m, const LabelTree& t) {
  std::vector<Assignment> out;
  enumerate_assignments(m, t, [&](const Assignment& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

namespace {

bool relation_ok(const std::vector<std::uint8_t>& r, std::size_t n, BoxLogic logic) {
  if (logic == BoxLogic::K) return true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!r[i * n + i]) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!r[i * n + j]) continue;
      if (logic == BoxLogic::S5 && !r[j * n + i]) return false;
      for (std::size_t k = 0; k < n; ++k) {
        if (r[j * n + k] && !r[i * n + k]) return false;
      }
    }
  }
  return true;
}

// Does one world's friendship relation satisfy the regular implication for
// every agent instantiation of its variables?
bool friendship_ok(const std::vector<std::uint8_t>& fr, std::size_t A, const RegularImplication& ri) {
  const auto var_set = ri.variables();
  std::vector<Nominal> vars(var_set.begin(), var_set.end());
  std::map<Nominal, std::size_t> slot;
  for (std::size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;
  std::vector<std::size_t> val(vars.size(), 0);
  auto atom = [&](const RelAtom& r) {
    std::size_t a = val[slot[r.lhs]], b = val[slot[r.rhs]];
    return r.type == RelAtom::Type::Eq ? a == b : fr[a * A + b] != 0;
  };
  while (true) {
    bool ante = std::all_of(ri.antecedents.begin(), ri.antecedents.end(), atom);
    if (ante && std::none_of(ri.consequents.begin(), ri.consequents.end(), atom)) return false;
    std::size_t i = 0;
    while (i < val.size() && ++val[i] == A) val[i++] = 0;
    if (i == val.size()) return true;
  }
}

bool friendship_ok(const std::vector<std::uint8_t>& fr, std::size_t A, const FrameClassSpec& spec) {
  return std::all_of(spec.theta.begin(), spec.theta.end(), [&](const auto& ri) { return friendship_ok(fr, A, ri); });
}

}  // namespace

bool frame_in_class(const Model& m, const FrameClassSpec& spec) {
  for (const auto& r : m.R) {
    if (!relation_ok(r, m.num_worlds(), spec.logic)) return false;
  }
  for (const auto& f : m.friends) {
    if (!friendship_ok(f, m.num_agents(), spec)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Brute-force oracle. Truth sets are bitmasks over (world, agent) pairs,
// bit w * A + a, so models are limited to 64 pairs.

namespace {

using Mask = std::uint64_t;

struct Op {
  Kind kind;
  int lhs = -1, rhs = -1;
  int nominal = -1;  // slot into the nominal table
  int prop = -1;     // slot into the prop table
};

struct Program {
  std::vector<Op> ops;
  std::unordered_map<Formula, int> index;
  std::vector<Nominal> nominals;
  std::vector<Prop> props;

  int slot(std::vector<std::string>& table, const std::string& s) {
    auto it = std::find(table.begin(), table.end(), s);
    if (it != table.end()) return static_cast<int>(it - table.begin());
    table.push_back(s);
    return static_cast<int>(table.size()) - 1;
  }

  int compile(const Formula& f) {
    if (auto it = index.find(f); it != index.end()) return it->second;
    Op op{f.kind()};
    switch (f.kind()) {
      case Kind::Nom: op.nominal = slot(nominals, f.name()); break;
      case Kind::Prop: op.prop = slot(props, f.name()); break;
      case Kind::Falsum: break;
      case Kind::Implies:
        op.lhs = compile(f.lhs());
        op.rhs = compile(f.rhs());
        break;
      case Kind::At:
        op.nominal = slot(nominals, f.name());
        op.lhs = compile(f.body());
        break;
      case Kind::FBox:
      case Kind::KBox: op.lhs = compile(f.body()); break;
    }
    ops.push_back(op);
    int id = static_cast<int>(ops.size()) - 1;
    index.emplace(f, id);
    return id;
  }
};

struct SmallModel {
  int W = 0, A = 0;
  Mask all = 0;
  std::vector<int> denot;             // per nominal slot
  std::vector<Mask> prop;             // per prop slot
  std::vector<std::uint32_t> R;       // per agent: bit w*W+v
  std::vector<std::uint32_t> friends;  // per world: bit a*A+b

  Mask eval_box(Mask in) const {
    Mask out = 0;
    for (int a = 0; a < A; ++a) {
      for (int w = 0; w < W; ++w) {
        bool ok = true;
        for (int v = 0; v < W && ok; ++v) {
          if ((R[a] >> (w * W + v) & 1) && !(in >> (v * A + a) & 1)) ok = false;
        }
        if (ok) out |= Mask(1) << (w * A + a);
      }
    }
    return out;
  }

  Mask eval_f(Mask in) const {
    Mask out = 0;
    for (int w = 0; w < W; ++w) {
      for (int a = 0; a < A; ++a) {
        bool ok = true;
        for (int b = 0; b < A && ok; ++b) {
          if ((friends[w] >> (a * A + b) & 1) && !(in >> (w * A + b) & 1)) ok = false;
        }
        if (ok) out |= Mask(1) << (w * A + a);
      }
    }
    return out;
  }

  // Pairs whose agent is `a`, i.e. the column for a.
  Mask column(int a) const {
    Mask out = 0;
    for (int w = 0; w < W; ++w) out |= Mask(1) << (w * A + a);
    return out;
  }

  // Spread the column of `a` across every agent of the same world.
  Mask at(int a, Mask in) const {
    Mask out = 0;
    for (int w = 0; w < W; ++w) {
      if (in >> (w * A + a) & 1) {
        for (int b = 0; b < A; ++b) out |= Mask(1) << (w * A + b);
      }
    }
    return out;
  }

  void run(const Program& p, std::vector<Mask>& out) const {
    out.resize(p.ops.size());
    for (std::size_t i = 0; i < p.ops.size(); ++i) {
      const Op& op = p.ops[i];
      switch (op.kind) {
        case Kind::Nom: out[i] = column(denot[op.nominal]); break;
        case Kind::Prop: out[i] = prop[op.prop]; break;
        case Kind::Falsum: out[i] = 0; break;
        case Kind::Implies: out[i] = (~out[op.lhs] | out[op.rhs]) & all; break;
        case Kind::At: out[i] = at(denot[op.nominal], out[op.lhs]); break;
        case Kind::FBox: out[i] = eval_f(out[op.lhs]); break;
        case Kind::KBox: out[i] = eval_box(out[op.lhs]); break;
      }
    }
  }
};

std::vector<std::uint32_t> relations(int n, const std::function<bool(const std::vector<std::uint8_t>&)>& ok) {
  std::vector<std::uint32_t> out;
  std::uint32_t count = 1u << (n * n);
  std::vector<std::uint8_t> dense(n * n);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    for (int i = 0; i < n * n; ++i) dense[i] = bits >> i & 1;
    if (ok(dense)) out.push_back(bits);
  }
  return out;
}

bool contains_kind(const Formula& f, Kind k) {
  if (f.is(k)) return true;
  switch (f.kind()) {
    case Kind::Implies: return contains_kind(f.lhs(), k) || contains_kind(f.rhs(), k);
    case Kind::At:
    case Kind::FBox:
    case Kind::KBox: return contains_kind(f.body(), k);
    default: return false;
  }
}

// Restricted-growth enumeration of nominal denotations: agents are
// interchangeable, so the first nominal always denotes agent 0.
bool next_denotation(std::vector<int>& d, int A) {
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) {
    int mx = -1;
    for (int j = 0; j < i; ++j) mx = std::max(mx, d[j]);
    if (d[i] < std::min(A - 1, mx + 1)) {
      ++d[i];
      for (std::size_t j = i + 1; j < d.size(); ++j) d[j] = 0;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<Countermodel> find_countermodel(const TreeSequent& s, int max_worlds, int max_agents,
                                              const FrameClassSpec& spec) {
  if (max_worlds < 1 || max_agents < 1) throw std::invalid_argument("oracle bounds must be positive");
  if (max_worlds * max_agents > 64 || max_worlds > 5 || max_agents > 5) {
    throw std::invalid_argument("oracle bounds too large (at most 5 worlds and 5 agents)");
  }

  Program prog;
  std::vector<int> ant_ops, suc_ops;
  std::vector<Label> ant_labels, suc_labels;
  bool need_box = s.tree.size() > 1, need_f = false;
  for (const auto& lf : s.ant) {
    ant_ops.push_back(prog.compile(lf.formula));
    ant_labels.push_back(lf.label);
  }
  for (const auto& lf : s.suc) {
    suc_ops.push_back(prog.compile(lf.formula));
    suc_labels.push_back(lf.label);
  }
  for (const auto* side : {&s.ant, &s.suc}) {
    for (const auto& lf : *side) {
      need_box = need_box || contains_kind(lf.formula, Kind::KBox);
      need_f = need_f || contains_kind(lf.formula, Kind::FBox);
    }
  }
  std::set<Nominal> edge_noms;
  s.tree.collect_nominals(edge_noms);
  for (const auto& n : edge_noms) prog.slot(prog.nominals, n);

  std::vector<Label> order(s.tree.labels().begin(), s.tree.labels().end());
  std::stable_sort(order.begin(), order.end(), [](const Label& a, const Label& b) { return a.path.size() < b.path.size(); });
  std::map<Label, int> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
  std::vector<int> parent(order.size(), -1), edge_slot(order.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i].is_root()) continue;
    parent[i] = pos[order[i].parent()];
    edge_slot[i] = prog.slot(prog.nominals, order[i].edge());
  }

  std::vector<Mask> masks;
  for (int W = 1; W <= max_worlds; ++W) {
    for (int A = 1; A <= max_agents; ++A) {
      auto rel_ok = [&](const std::vector<std::uint8_t>& r) { return relation_ok(r, W, spec.logic); };
      auto fr_ok = [&](const std::vector<std::uint8_t>& f) { return friendship_ok(f, A, spec); };
      std::vector<std::uint32_t> candR = relations(W, rel_ok), candF = relations(A, fr_ok);
      if (candF.empty()) continue;
      if (!need_box) candR.resize(1);
      if (!need_f) candF.resize(1);

      SmallModel sm;
      sm.W = W;
      sm.A = A;
      sm.all = (W * A == 64) ? ~Mask(0) : (Mask(1) << (W * A)) - 1;
      sm.R.assign(A, 0);
      sm.friends.assign(W, 0);
      sm.prop.assign(prog.props.size(), 0);
      sm.denot.assign(prog.nominals.size(), 0);
      const Mask prop_count = Mask(1) << (W * A);

      std::vector<std::size_t> ri(A, 0), fi(W, 0);
      std::vector<Mask> pv(prog.props.size(), 0);
      std::vector<std::uint32_t> allowed(order.size());
      std::vector<std::uint32_t> ok(order.size());

      do {
        std::fill(ri.begin(), ri.end(), 0);
        while (true) {
          for (int a = 0; a < A; ++a) sm.R[a] = candR[ri[a]];
          std::fill(fi.begin(), fi.end(), 0);
          while (true) {
            for (int w = 0; w < W; ++w) sm.friends[w] = candF[fi[w]];
            std::fill(pv.begin(), pv.end(), 0);
            while (true) {
              for (std::size_t i = 0; i < pv.size(); ++i) sm.prop[i] = pv[i];
              sm.run(prog, masks);
              // World sets where each label's constraints hold.
              std::fill(allowed.begin(), allowed.end(), (1u << W) - 1);
              auto restrict = [&](const std::vector<Label>& labels, const std::vector<int>& ops, bool want) {
                for (std::size_t i = 0; i < ops.size(); ++i) {
                  std::uint32_t ws = 0;
                  for (int w = 0; w < W; ++w) {
                    if (((masks[ops[i]] >> (w * A)) & 1) == static_cast<Mask>(want)) ws |= 1u << w;
                  }
                  allowed[pos[labels[i]]] &= ws;
                }
              };
              restrict(ant_labels, ant_ops, true);
              restrict(suc_labels, suc_ops, false);
              // Bottom-up: ok[i] = worlds for label i extendable to its subtree.
              for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) ok[i] = allowed[i];
              for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
                int a = sm.denot[edge_slot[i]];
                std::uint32_t pw = 0;
                for (int w = 0; w < W; ++w) {
                  for (int v = 0; v < W; ++v) {
                    if ((ok[i] >> v & 1) && (sm.R[a] >> (w * W + v) & 1)) pw |= 1u << w;
                  }
                }
                ok[parent[i]] &= pw;
              }
              if (ok[0]) {
                Countermodel cm;
                std::vector<std::string> wids, aids;
                for (int w = 0; w < W; ++w) wids.push_back("w" + std::to_string(w));
                for (int a = 0; a < A; ++a) aids.push_back("a" + std::to_string(a));
                Model& m = cm.model;
                m = Model(wids, aids);
                for (int a = 0; a < A; ++a) {
                  for (int i = 0; i < W * W; ++i) m.R[a][i] = sm.R[a] >> i & 1;
                }
                for (int w = 0; w < W; ++w) {
                  for (int i = 0; i < A * A; ++i) m.friends[w][i] = sm.friends[w] >> i & 1;
                }
                for (std::size_t p = 0; p < prog.props.size(); ++p) {
                  auto& v = m.val[prog.props[p]];
                  v.assign(W * A, 0);
                  for (int i = 0; i < W * A; ++i) v[i] = sm.prop[p] >> i & 1;
                }
                for (std::size_t n = 0; n < prog.nominals.size(); ++n) m.nominals[prog.nominals[n]] = sm.denot[n];
                std::vector<int> world(order.size(), -1);
                for (std::size_t i = 0; i < order.size(); ++i) {
                  for (int w = 0; w < W; ++w) {
                    if (!(ok[i] >> w & 1)) continue;
                    if (i > 0 && !(sm.R[sm.denot[edge_slot[i]]] >> (world[parent[i]] * W + w) & 1)) continue;
                    world[i] = w;
                    break;
                  }
                  cm.assignment[order[i]] = world[i];
                }
                return cm;
              }
              std::size_t i = 0;
              while (i < pv.size() && ++pv[i] == prop_count) pv[i++] = 0;
              if (i == pv.size()) break;
            }
            std::size_t i = 0;
            while (i < fi.size() && ++fi[i] == candF.size()) fi[i++] = 0;
            if (i == fi.size()) break;
          }
          std::size_t i = 0;
          while (i < ri.size() && ++ri[i] == candR.size()) ri[i++] = 0;
          if (i == ri.size()) break;
        }
      } while (next_denotation(sm.denot, A));
    }
  }
  return std::nullopt;
}

}  // namespace efl
