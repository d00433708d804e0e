/* automaton.hpp
 * Deterministic parity automaton over letters = subsets of named predicates.
 * File format (plain text, '#' comments):
 *   STATES    one "name:priority" per line (priority >= 1; max even class wins)
 *   INITIAL   one state name
 *   ALPHABET  predicate names, whitespace separated (may be empty)
 *   TRANS     one "src <guard> dst" per line; guard is a boolean expression
 *             over predicate names with ! & | ( ) and literals 1/0/true/false
 * Determinism and totality are enforced over the letters that actually arise
 * from a labeled grid, at binding time.
 */
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "grid.hpp"

namespace synth {

using Letter = std::uint32_t;  // bitmask over alphabet indices

// boolean guard over predicate indices, compiled from the text expression
struct Guard {
  enum class Op { var, cnst, nt, nd, r };
  Op op = Op::cnst;
  int var = 0;
  bool value = false;
  std::unique_ptr<Guard> a, b;

  bool eval(Letter l) const {
    switch (op) {
      case Op::var: return (l >> var) & 1u;
      case Op::cnst: return value;
      case Op::nt: return !a->eval(l);
      case Op::nd: return a->eval(l) && b->eval(l);
      case Op::r: return a->eval(l) || b->eval(l);
    }
    return false;
  }
};

struct Edge {
  int src = 0;
  int dst = 0;
  std::string guard_text;
  std::shared_ptr<Guard> guard;
};

struct ParityAutomaton {
  std::vector<std::string> state_names;
  std::vector<int> priority;          // per state, 1..max_priority
  int initial = 0;
  std::vector<std::string> alphabet;  // predicate names; bit i of a Letter
  std::vector<Edge> edges;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int max_priority() const;

  // deterministic successor on a letter; throws if undefined or ambiguous
  int step(int q, Letter l) const;

  // stable content hash used to pin controllers to the automaton they came from
  std::uint64_t hash() const;
};

ParityAutomaton parse_automaton(const std::string& text);
ParityAutomaton load_automaton(const std::string& path);

// named regions; each predicate is a finite union of boxes
struct PredicateSet {
  std::vector<std::string> names;
  std::vector<std::vector<Box>> regions;  // parallel to names

  int index_of(const std::string& name) const;
};

// every region boundary must lie on grid lines so cell labels are uniform
void check_predicate_alignment(const PredicateSet& preds, const Grid& grid);

// letter of each cell (bit order = automaton alphabet order); membership is
// decided at the cell center, valid because of the alignment precondition
std::vector<Letter> label_cells(const PredicateSet& preds, const ParityAutomaton& aut,
                                const Grid& grid);

}  // namespace synth
