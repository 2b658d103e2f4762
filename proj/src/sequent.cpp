#include "efl/sequent.hpp"

#include <algorithm>
#include <charconv>

#include "efl/parser.hpp"

namespace efl {

namespace {

unsigned parse_number(std::string_view s, std::string_view whole) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw SchemaError("", "malformed label '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Label Label::parse(std::string_view text) {
  Label l;
  std::size_t slash = text.find('/');
  l.root = parse_number(text.substr(0, slash), text);
  while (slash != std::string_view::npos) {
    std::size_t next = text.find('/', slash + 1);
    std::string_view step = text.substr(slash + 1, next == std::string_view::npos ? next : next - slash - 1);
    std::size_t colon = step.rfind(':');
    if (colon == std::string_view::npos) throw SchemaError("", "malformed label '" + std::string(text) + "'");
    Nominal n;
    try {
      n = parse_nominal(step.substr(0, colon));
    } catch (const ParseError&) {
      throw SchemaError("", "malformed label '" + std::string(text) + "'");
    }
    l.path.push_back({n, parse_number(step.substr(colon + 1), text)});
    slash = next;
  }
  return l;
}

std::string Label::str() const {
  std::string s = std::to_string(root);
  for (const auto& st : path) s += "/'" + st.nominal + ":" + std::to_string(st.index);
  return s;
}

Label Label::parent() const {
  Label p = *this;
  p.path.pop_back();
  return p;
}

Label Label::child(const Nominal& n, unsigned i) const {
  Label c = *this;
  c.path.push_back({n, i});
  return c;
}

bool Label::is_child_of(const Label& p, const Nominal& n) const {
  if (path.empty() || root != p.root || path.size() != p.path.size() + 1) return false;
  if (path.back().nominal != n) return false;
  return std::equal(p.path.begin(), p.path.end(), path.begin());
}

bool Label::is_prefix_of(const Label& o) const {
  return root == o.root && path.size() <= o.path.size() && std::equal(path.begin(), path.end(), o.path.begin());
}

Label rename_label(const Label& l, const std::map<Nominal, Nominal>& m) {
  Label r = l;
  for (auto& st : r.path) {
    auto it = m.find(st.nominal);
    if (it != m.end()) st.nominal = it->second;
  }
  return r;
}

bool LabelTree::is_tree(const std::set<Label>& labels) {
  if (labels.empty()) return false;
  unsigned roots = 0;
  for (const auto& l : labels) {
    if (l.is_root()) {
      ++roots;
    } else if (!labels.count(l.parent())) {
      return false;
    }
  }
  return roots == 1;
}

LabelTree::LabelTree(std::set<Label> labels) : labels_(std::move(labels)) {
  if (!is_tree(labels_)) throw SchemaError("tree", "label set is not a tree");
}

std::vector<Label> LabelTree::children(const Label& l) const {
  std::vector<Label> out;
  for (const auto& c : labels_) {
    if (c.path.size() == l.path.size() + 1 && l.is_prefix_of(c)) out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const Label& a, const Label& b) {
    return a.path.back().index < b.path.back().index;
  });
  return out;
}

bool LabelTree::index_used_under(const Label& parent, unsigned index) const {
  for (const auto& c : labels_) {
    if (c.path.size() == parent.path.size() + 1 && parent.is_prefix_of(c) && c.path.back().index == index) return true;
  }
  return false;
}

unsigned LabelTree::fresh_index(const Label& parent) const {
  unsigned i = 0;
  while (index_used_under(parent, i)) ++i;
  return i;
}

LabelTree LabelTree::with(const Label& l) const {
  LabelTree t = *this;
  if (!l.is_root() && !contains(l.parent())) throw SchemaError("tree", "parent of " + l.str() + " missing");
  if (l.is_root() && !contains(l)) throw SchemaError("tree", "second root " + l.str());
  t.labels_.insert(l);
  return t;
}

void LabelTree::collect_nominals(std::set<Nominal>& out) const {
  for (const auto& l : labels_) {
    for (const auto& st : l.path) out.insert(st.nominal);
  }
}

void TreeSequent::validate() const {
  if (!LabelTree::is_tree(tree.labels())) throw SchemaError("tree", "label set is not a tree");
  auto check = [&](const FormulaSet& side, const char* name) {
    for (const auto& lf : side) {
      if (!is_at_prefixed(lf.formula)) {
        throw SchemaError(name, "formula '" + render_formula(lf.formula) + "' is not @-prefixed");
      }
      if (!tree.contains(lf.label)) throw SchemaError(name, "label " + lf.label.str() + " not in tree");
    }
  };
  check(ant, "ant");
  check(suc, "suc");
}

std::set<Nominal> TreeSequent::nominals() const {
  Symbols s;
  for (const auto& lf : ant) collect_symbols(lf.formula, s);
  for (const auto& lf : suc) collect_symbols(lf.formula, s);
  tree.collect_nominals(s.nominals);
  return s.nominals;
}

std::string render_labelled(const LabelledFormula& lf) { return lf.label.str() + ": " + render_formula(lf.formula); }

std::string render_sequent(const TreeSequent& s) {
  std::string out;
  bool first = true;
  for (const auto& lf : s.ant) {
    out += (first ? "" : ", ") + render_labelled(lf);
    first = false;
  }
  out += " =>{";
  first = true;
  for (const auto& l : s.tree.labels()) {
    out += (first ? "" : ", ") + l.str();
    first = false;
  }
  out += "} ";
  first = true;
  for (const auto& lf : s.suc) {
    out += (first ? "" : ", ") + render_labelled(lf);
    first = false;
  }
  return out;
}

}  // namespace efl
