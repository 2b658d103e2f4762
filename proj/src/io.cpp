#include "efl/io.hpp"

#include <set>

#include "efl/parser.hpp"
#include "json.hpp"

namespace efl {

using json = nlohmann::ordered_json;

namespace {

// A JSON value with the pointer path used in error messages.
struct Node {
  const json& v;
  std::string path;

  [[noreturn]] void fail(const std::string& what) const { throw SchemaError(path.empty() ? "/" : path, what); }

  Node at(const std::string& key) const {
    if (!v.is_object()) fail("expected an object");
    auto it = v.find(key);
    if (it == v.end()) fail("missing field \"" + key + "\"");
    return {*it, path + "/" + key};
  }
  Node at(std::size_t i) const {
    if (!v.is_array() || i >= v.size()) fail("expected an array with element " + std::to_string(i));
    return {v[i], path + "/" + std::to_string(i)};
  }
  bool has(const std::string& key) const { return v.is_object() && v.contains(key); }

  const json::object_t& object() const {
    if (!v.is_object()) fail("expected an object");
    return v.get_ref<const json::object_t&>();
  }
  std::vector<Node> array() const {
    if (!v.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back({v[i], path + "/" + std::to_string(i)});
    return out;
  }
  Node member(const std::string& key, const json& value) const { return {value, path + "/" + key}; }

  std::string str() const {
    if (!v.is_string()) fail("expected a string");
    return v.get<std::string>();
  }
  // Ids may be written as strings or integers.
  std::string id() const {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return str();
  }
  std::size_t index() const {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) fail("expected a line index");
    return v.get<std::size_t>();
  }

  template <class F>
  auto wrap(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const SchemaError& e) {
      if (!e.path().empty()) throw;
      fail(e.what());
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }
  Formula formula() const {
    std::string text = str();
    return wrap([&] { return parse_formula(text); });
  }
  Nominal nominal() const {
    std::string text = str();
    return wrap([&] { return parse_nominal(text); });
  }
  Label label() const {
    std::string text = str();
    return wrap([&] { return Label::parse(text); });
  }
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), SourceSpan{e.byte ? e.byte - 1 : 0, e.byte});
  }
}

Node document(const json& root) {
  Node n{root, ""};
  const Node v = n.at("version");
  if (!v.v.is_number_integer() || v.v.get<long long>() != kFormatVersion) v.fail("unsupported version");
  return n;
}

std::string dump(json j) {
  return j.dump(2) + "\n";
}

json with_version(json body) {
  json out = json::object();
  out["version"] = kFormatVersion;
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  return out;
}

// --- models -----------------------------------------------------------------

Model model_from(const Node& n) {
  std::vector<std::string> worlds, agents;
  for (const auto& w : n.at("worlds").array()) worlds.push_back(w.id());
  for (const auto& a : n.at("agents").array()) agents.push_back(a.id());
  if (worlds.empty()) n.at("worlds").fail("a model needs at least one world");
  if (agents.empty()) n.at("agents").fail("a model needs at least one agent");
  if (std::set<std::string>(worlds.begin(), worlds.end()).size() != worlds.size()) n.at("worlds").fail("duplicate world");
  if (std::set<std::string>(agents.begin(), agents.end()).size() != agents.size()) n.at("agents").fail("duplicate agent");
  Model m(worlds, agents);

  auto world_id = [&](const Node& at, const std::string& id) {
    int i = m.world_index(id);
    if (i < 0) at.fail("undeclared world " + id);
    return i;
  };
  auto agent_id = [&](const Node& at, const std::string& id) {
    int i = m.agent_index(id);
    if (i < 0) at.fail("undeclared agent " + id);
    return i;
  };
  auto world = [&](const Node& x) { return world_id(x, x.id()); };
  auto agent = [&](const Node& x) { return agent_id(x, x.id()); };
  auto pairs = [](const Node& x) {
    std::vector<std::pair<Node, Node>> out;
    for (const auto& p : x.array()) {
      if (!p.v.is_array() || p.v.size() != 2) p.fail("expected a pair");
      out.emplace_back(p.at(std::size_t{0}), p.at(std::size_t{1}));
    }
    return out;
  };

  if (n.has("R")) {
    const Node r = n.at("R");
    for (const auto& [a, rel] : r.object()) {
      const Node edges = r.member(a, rel);
      const int ai = agent_id(edges, a);
      for (const auto& [w, v] : pairs(edges)) m.set_r(ai, world(w), world(v));
    }
  }
  if (n.has("friend")) {
    const Node f = n.at("friend");
    for (const auto& [w, rel] : f.object()) {
      const int wi = world_id(f.member(w, rel), w);
      for (const auto& [a, b] : pairs(f.member(w, rel))) m.set_fr(wi, agent(a), agent(b));
    }
  }
  if (n.has("val")) {
    const Node val = n.at("val");
    for (const auto& [p, cells] : val.object()) {
      const Node cn = val.member(p, cells);
      if (!is_valid_identifier(p)) cn.fail("invalid proposition name " + p);
      m.val[p].assign(m.num_worlds() * m.num_agents(), 0);
      for (const auto& [w, a] : pairs(cn)) m.set_val(p, world(w), agent(a));
    }
  }
  if (n.has("nominals")) {
    const Node noms = n.at("nominals");
    for (const auto& [k, a] : noms.object()) {
      const Node an = noms.member(k, a);
      Nominal nom = k.size() > 1 && k[0] == '\'' ? k.substr(1) : k;
      if (!is_valid_identifier(nom)) an.fail("invalid nominal " + k);
      m.nominals[nom] = agent(an);
    }
  }
  return m;
}

json model_to(const Model& m) {
  json j = json::object();
  j["worlds"] = m.worlds;
  j["agents"] = m.agents;
  json r = json::object();
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    json edges = json::array();
    for (std::size_t w = 0; w < m.num_worlds(); ++w) {
      for (std::size_t v = 0; v < m.num_worlds(); ++v) {
        if (m.r(int(a), int(w), int(v))) edges.push_back({m.worlds[w], m.worlds[v]});
      }
    }
    r[m.agents[a]] = std::move(edges);
  }
  j["R"] = std::move(r);
  json f = json::object();
  for (std::size_t w = 0; w < m.num_worlds(); ++w) {
    json edges = json::array();
    for (std::size_t a = 0; a < m.num_agents(); ++a) {
      for (std::size_t b = 0; b < m.num_agents(); ++b) {
        if (m.fr(int(w), int(a), int(b))) edges.push_back({m.agents[a], m.agents[b]});
      }
    }
    f[m.worlds[w]] = std::move(edges);
  }
  j["friend"] = std::move(f);
  json val = json::object();
  for (const auto& [p, cells] : m.val) {
    json c = json::array();
    for (std::size_t w = 0; w < m.num_worlds(); ++w) {
      for (std::size_t a = 0; a < m.num_agents(); ++a) {
        if (m.holds(p, int(w), int(a))) c.push_back({m.worlds[w], m.agents[a]});
      }
    }
    val[p] = std::move(c);
  }
  j["val"] = std::move(val);
  json noms = json::object();
  for (const auto& [n, a] : m.nominals) noms[render_nominal(n)] = m.agents.at(a);
  j["nominals"] = std::move(noms);
  return j;
}

// --- sequents ---------------------------------------------------------------

LabelledFormula labelled_from(const Node& n) { return {n.at("label").label(), n.at("formula").formula()}; }

json labelled_to(const LabelledFormula& lf) {
  return json{{"label", lf.label.str()}, {"formula", render_formula(lf.formula)}};
}

TreeSequent sequent_from(const Node& n) {
  TreeSequent s;
  std::set<Label> labels;
  for (const auto& l : n.at("tree").array()) labels.insert(l.label());
  n.at("tree").wrap([&] {
    if (!LabelTree::is_tree(labels)) throw SchemaError("", "labels do not form a tree");
    s.tree = LabelTree(labels);
    return 0;
  });
  for (const auto& x : n.at("ant").array()) s.ant.insert(labelled_from(x));
  for (const auto& x : n.at("suc").array()) s.suc.insert(labelled_from(x));
  n.wrap([&] {
    s.validate();
    return 0;
  });
  return s;
}

json sequent_to(const TreeSequent& s) {
  json tree = json::array();
  for (const auto& l : s.tree.labels()) tree.push_back(l.str());
  json ant = json::array(), suc = json::array();
  for (const auto& lf : s.ant) ant.push_back(labelled_to(lf));
  for (const auto& lf : s.suc) suc.push_back(labelled_to(lf));
  return json{{"tree", std::move(tree)}, {"ant", std::move(ant)}, {"suc", std::move(suc)}};
}

// --- derivations ------------------------------------------------------------

std::map<Nominal, Nominal> nominal_map_from(const Node& n) {
  std::map<Nominal, Nominal> out;
  for (const auto& [k, v] : n.object()) {
    const json key(k);
    out[n.member(k, key).nominal()] = n.member(k, v).nominal();
  }
  return out;
}

json nominal_map_to(const std::map<Nominal, Nominal>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[render_nominal(k)] = render_nominal(v);
  return j;
}

Derivation derivation_from(const Node& n) {
  Derivation d;
  d.sequent = sequent_from(n.at("sequent"));
  const Node rn = n.at("rule");
  auto rule = rule_from_name(rn.str());
  if (!rule) rn.fail("unknown rule " + rn.str());
  d.rule.rule = *rule;
  if (n.has("principal")) d.rule.principal = labelled_from(n.at("principal"));
  if (n.has("label")) d.rule.label = n.at("label").label();
  if (n.has("nominal")) d.rule.nominal = n.at("nominal").nominal();
  if (n.has("template")) d.rule.tmpl = n.at("template").formula();
  if (n.has("theta")) {
    const Node t = n.at("theta");
    std::string text = t.str();
    d.rule.theta = t.wrap([&] { return RegularImplication::parse(text); });
  }
  if (n.has("inst")) d.rule.inst = nominal_map_from(n.at("inst"));
  if (n.has("premises")) {
    for (const auto& p : n.at("premises").array()) d.premises.push_back(derivation_from(p));
  }
  return d;
}

json derivation_to(const Derivation& d) {
  json j = json::object();
  j["sequent"] = sequent_to(d.sequent);
  j["rule"] = rule_name(d.rule.rule);
  if (d.rule.principal) j["principal"] = labelled_to(*d.rule.principal);
  if (d.rule.label) j["label"] = d.rule.label->str();
  if (d.rule.nominal) j["nominal"] = render_nominal(*d.rule.nominal);
  if (d.rule.tmpl) j["template"] = render_formula(*d.rule.tmpl);
  if (d.rule.theta) j["theta"] = d.rule.theta->str();
  if (!d.rule.inst.empty()) j["inst"] = nominal_map_to(d.rule.inst);
  json prem = json::array();
  for (const auto& p : d.premises) prem.push_back(derivation_to(p));
  j["premises"] = std::move(prem);
  return j;
}

// --- Hilbert proofs ---------------------------------------------------------

// Substitutions are flat objects: "p": formula, "'n": nominal.
UniformSubstitution subst_from(const Node& n) {
  UniformSubstitution s;
  for (const auto& [k, v] : n.object()) {
    const Node val = n.member(k, v);
    if (!k.empty() && k[0] == '\'') {
      const json key(k);
      s.noms[n.member(k, key).nominal()] = val.nominal();
    } else {
      if (!is_valid_identifier(k)) val.fail("invalid proposition name " + k);
      s.props.insert_or_assign(k, val.formula());
    }
  }
  return s;
}

json subst_to(const UniformSubstitution& s) {
  json j = json::object();
  for (const auto& [p, f] : s.props) j[p] = render_formula(f);
  for (const auto& [a, b] : s.noms) j[render_nominal(a)] = render_nominal(b);
  return j;
}

NecessityForm form_from(const Node& n) {
  NecessityForm out;
  for (const auto& step : n.array()) {
    if (step.has("ante")) {
      out.push_back(NecessityStep::antecedent(step.at("ante").formula()));
    } else if (step.has("at_box")) {
      out.push_back(NecessityStep::at_box(step.at("at_box").nominal()));
    } else {
      step.fail("expected {\"ante\": ...} or {\"at_box\": ...}");
    }
  }
  return out;
}

json form_to(const NecessityForm& form) {
  json j = json::array();
  for (const auto& s : form) {
    if (s.kind == NecessityStep::Kind::Antecedent) {
      j.push_back(json{{"ante", render_formula(s.ante)}});
    } else {
      j.push_back(json{{"at_box", render_nominal(s.nominal)}});
    }
  }
  return j;
}

Justification just_from(const Node& n, std::size_t line) {
  using K = Justification::Kind;
  Justification j;
  const auto& obj = n.object();
  // An axiom may carry its instantiating substitution alongside the name.
  const bool axiom_subst = obj.size() == 2 && n.has("axiom") && n.has("subst");
  if (obj.size() != 1 && !axiom_subst) n.fail("expected exactly one justification");
  const std::string key = axiom_subst ? "axiom" : obj.begin()->first;
  const Node arg = n.at(key);
  auto premise = [&](const Node& x) {
    std::size_t i = x.index();
    if (i >= line) x.fail("premise must be an earlier line");
    return i;
  };
  if (key == "axiom") {
    j.kind = K::Axiom;
    j.axiom = arg.str();
    if (axiom_subst) j.subst = subst_from(n.at("subst"));
  } else if (key == "mp") {
    j.kind = K::MP;
    j.i = premise(arg.at(std::size_t{0}));
    j.j = premise(arg.at(std::size_t{1}));
  } else if (key == "nec_box" || key == "nec_f") {
    j.kind = key == "nec_box" ? K::NecBox : K::NecF;
    j.i = premise(arg);
  } else if (key == "nec_at" || key == "name") {
    j.kind = key == "nec_at" ? K::NecAt : K::Name;
    j.i = premise(arg.at(std::size_t{0}));
    j.n = arg.at(std::size_t{1}).nominal();
  } else if (key == "us") {
    j.kind = K::US;
    j.i = premise(arg.at(std::size_t{0}));
    j.subst = subst_from(arg.at(std::size_t{1}));
  } else if (key == "lbg") {
    j.kind = K::LBG;
    j.i = premise(arg.at(std::size_t{0}));
    j.form = form_from(arg.at(std::size_t{1}));
    j.n = arg.at(std::size_t{2}).nominal();
    j.m = arg.at(std::size_t{3}).nominal();
    j.phi = arg.at(std::size_t{4}).formula();
  } else {
    n.fail("unknown justification " + key);
  }
  return j;
}

json by_to(const Justification& j) {
  using K = Justification::Kind;
  switch (j.kind) {
    case K::Axiom: {
      json out{{"axiom", j.axiom}};
      if (j.subst) out["subst"] = subst_to(*j.subst);
      return out;
    }
    case K::MP: return json{{"mp", {j.i, j.j}}};
    case K::NecBox: return json{{"nec_box", j.i}};
    case K::NecF: return json{{"nec_f", j.i}};
    case K::NecAt: return json{{"nec_at", {j.i, render_nominal(j.n)}}};
    case K::US: return json{{"us", {j.i, subst_to(j.subst.value_or(UniformSubstitution{}))}}};
    case K::Name: return json{{"name", {j.i, render_nominal(j.n)}}};
    case K::LBG:
      return json{{"lbg", {j.i, form_to(j.form), render_nominal(j.n), render_nominal(j.m),
                           render_formula(j.phi.value_or(Formula::falsum()))}}};
  }
  return json();
}

}  // namespace

Model parse_model(std::string_view text) {
  const json root = parse_json(text);
  return model_from(document(root));
}

std::string render_model(const Model& m) { return dump(with_version(model_to(m))); }

TreeSequent parse_sequent(std::string_view text) {
  const json root = parse_json(text);
  return sequent_from(document(root));
}

std::string render_sequent_json(const TreeSequent& s) { return dump(with_version(sequent_to(s))); }

Derivation parse_derivation(std::string_view text) {
  const json root = parse_json(text);
  return derivation_from(document(root));
}

std::string render_derivation(const Derivation& d) { return dump(with_version(derivation_to(d))); }

HilbertProof parse_hilbert(std::string_view text) {
  const json root = parse_json(text);
  const Node doc = document(root);
  HilbertProof p;
  const auto lines = doc.at("lines").array();
  for (std::size_t k = 0; k < lines.size(); ++k) {
    HilbertLine line{lines[k].at("formula").formula(), {}};
    const Node by = lines[k].at("by");
    line.just = just_from(by, k);
    p.lines.push_back(std::move(line));
  }
  return p;
}

std::string render_hilbert(const HilbertProof& p) {
  json lines = json::array();
  for (const auto& l : p.lines) {
    lines.push_back(json{{"formula", render_formula(l.formula)}, {"by", by_to(l.just)}});
  }
  return dump(with_version(json{{"lines", std::move(lines)}}));
}

Countermodel parse_countermodel(std::string_view text) {
  const json root = parse_json(text);
  const Node doc = document(root);
  Countermodel c{model_from(doc.at("model")), {}};
  const Node asg = doc.at("assignment");
  for (const auto& [l, w] : asg.object()) {
    const Node wn = asg.member(l, w);
    const json key(l);
    const Label label = asg.member(l, key).label();
    const int wi = c.model.world_index(wn.id());
    if (wi < 0) wn.fail("undeclared world " + wn.id());
    c.assignment[label] = wi;
  }
  return c;
}

std::string render_countermodel(const Countermodel& c) {
  json asg = json::object();
  for (const auto& [l, w] : c.assignment) asg[l.str()] = c.model.worlds.at(w);
  return dump(with_version(json{{"model", model_to(c.model)}, {"assignment", std::move(asg)}}));
}

}  // namespace efl
