#pragma once

// Finite two-dimensional Kripke models and the satisfaction relation.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "efl/formula.hpp"
#include "efl/frame.hpp"
#include "efl/sequent.hpp"

namespace efl {

// Worlds and agents are addressed by index; their ids are kept for I/O.
// Relations are dense boolean matrices, row-major.
struct Model {
  std::vector<std::string> worlds;
  std::vector<std::string> agents;
  std::vector<std::vector<std::uint8_t>> R;       // per agent, W x W
  std::vector<std::vector<std::uint8_t>> friends;  // per world, A x A
  std::map<Prop, std::vector<std::uint8_t>> val;   // per prop, W x A
  std::map<Nominal, int> nominals;                 // denotation

  Model() = default;
  Model(std::vector<std::string> worlds, std::vector<std::string> agents);

  std::size_t num_worlds() const { return worlds.size(); }
  std::size_t num_agents() const { return agents.size(); }

  bool r(int a, int w, int v) const { return R[a][w * worlds.size() + v] != 0; }
  void set_r(int a, int w, int v, bool on = true) { R[a][w * worlds.size() + v] = on; }
  bool fr(int w, int a, int b) const { return friends[w][a * agents.size() + b] != 0; }
  void set_fr(int w, int a, int b, bool on = true) { friends[w][a * agents.size() + b] = on; }
  bool holds(const Prop& p, int w, int a) const;
  void set_val(const Prop& p, int w, int a, bool on = true);

  int world_index(const std::string& id) const;  // -1 if absent
  int agent_index(const std::string& id) const;
  int denotation(const Nominal& n) const;  // throws std::out_of_range if undenoted
};

// Label -> world index.
using Assignment = std::map<Label, int>;

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool satisfies(const Model& m, int w, int a, const Formula& f);
// By id; throws SemanticsError for unknown ids or undenoted nominals.
bool satisfies(const Model& m, const std::string& w, const std::string& a, const Formula& f);

bool labelled_true(const Model& m, const Assignment& f, const LabelledFormula& lf);
bool is_assignment(const Model& m, const LabelTree& t, const Assignment& f);
bool sequent_true(const Model& m, const Assignment& f, const TreeSequent& s);

// Calls `visit` on each valid assignment; stops early when it returns false.
void enumerate_assignments(const Model& m, const LabelTree& t, const std::function<bool(const Assignment&)>& visit);
std::vector<Assignment> all_assignments(const Model& m, const LabelTree& t);

bool frame_in_class(const Model& m, const FrameClassSpec& spec);

struct Countermodel {
  Model model;
  Assignment assignment;
};

// Exhaustive search over all models with at most max_worlds worlds and
// max_agents agents whose valuation is restricted to the symbols of `s`.
std::optional<Countermodel> find_countermodel(const TreeSequent& s, int max_worlds, int max_agents,
                                              const FrameClassSpec& spec);

}  // namespace efl
