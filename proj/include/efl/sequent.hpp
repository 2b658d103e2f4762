#pragma once

// Labels, label trees, labelled formulas, and tree sequents.

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "efl/formula.hpp"

namespace efl {

class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct LabelStep {
  Nominal nominal;
  unsigned index = 0;
  auto operator<=>(const LabelStep&) const = default;
};

// A root number followed by (nominal, index) steps; 0 . n 1 is written "0/'n:1".
struct Label {
  unsigned root = 0;
  std::vector<LabelStep> path;

  static Label root_label(unsigned r) { return Label{r, {}}; }
  static Label parse(std::string_view text);
  std::string str() const;

  bool is_root() const { return path.empty(); }
  Label parent() const;
  Label child(const Nominal& n, unsigned i) const;
  // Nominal on the edge from the parent; requires !is_root().
  const Nominal& edge() const { return path.back().nominal; }
  bool is_child_of(const Label& parent, const Nominal& n) const;
  bool is_prefix_of(const Label& other) const;

  auto operator<=>(const Label&) const = default;
};

class LabelTree {
 public:
  LabelTree() = default;
  explicit LabelTree(std::set<Label> labels);  // validates
  static LabelTree single(unsigned root = 0) { return LabelTree({Label::root_label(root)}); }

  const std::set<Label>& labels() const { return labels_; }
  bool contains(const Label& l) const { return labels_.count(l) != 0; }
  const Label& root() const { return *labels_.begin(); }
  std::size_t size() const { return labels_.size(); }
  // Children of `l`, ordered by child index.
  std::vector<Label> children(const Label& l) const;
  bool index_used_under(const Label& parent, unsigned index) const;
  unsigned fresh_index(const Label& parent) const;
  // Adds a label whose parent is already present.
  LabelTree with(const Label& l) const;
  void collect_nominals(std::set<Nominal>& out) const;

  bool operator==(const LabelTree& o) const { return labels_ == o.labels_; }

  // True iff the set has exactly one pure-number label and is parent-closed.
  static bool is_tree(const std::set<Label>& labels);

 private:
  std::set<Label> labels_;
};

struct LabelledFormula {
  Label label;
  Formula formula;

  auto operator<=>(const LabelledFormula& o) const {
    if (auto c = label <=> o.label; c != 0) return c;
    int c = compare(formula, o.formula);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  bool operator==(const LabelledFormula& o) const { return label == o.label && formula == o.formula; }
};

using FormulaSet = std::set<LabelledFormula>;

struct TreeSequent {
  FormulaSet ant;
  LabelTree tree;
  FormulaSet suc;

  // Throws SchemaError if a formula is not @-prefixed or a label is outside the tree.
  void validate() const;
  std::set<Nominal> nominals() const;  // in formulas and tree labels
  bool operator==(const TreeSequent&) const = default;
};

std::string render_labelled(const LabelledFormula& lf);
std::string render_sequent(const TreeSequent& s);

// Label-level nominal renaming.
Label rename_label(const Label& l, const std::map<Nominal, Nominal>& m);

}  // namespace efl
