/* controller.hpp
 * State-feedback controller refined from an adversarial winning region of the
 * product game: one input index per winning (cell, automaton-state) pair.
 * Pinned to its grid geometry and to a content hash of the automaton so a
 * controller can never silently be replayed against a different product.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"
#include "product.hpp"
#include "solver.hpp"

namespace synth {

struct Controller {
  int dim = 0;
  Vec eta;
  Box domain;
  std::uint64_t automaton_hash = 0;
  int aut_states = 0;
  int initial = 0;      // automaton initial state (before the first advance)
  int num_inputs = 0;
  CellId num_cells = 0;
  std::vector<std::int32_t> table;  // [q*num_cells + cell]; -1 = no decision

  bool defined(CellId c, int q) const {
    if (c < 0 || c >= num_cells || q < 0 || q >= aut_states) return false;
    return table[static_cast<std::size_t>(q) * static_cast<std::size_t>(num_cells) +
                 static_cast<std::size_t>(c)] >= 0;
  }
  // throws std::out_of_range when no decision exists for (c, q)
  int lookup(CellId c, int q) const;
  std::size_t entries() const;
};

// turns an adversarial product solve into a controller; refuses cooperative
// results (they certify possibility, not enforceability)
Controller refine(const SolveResult& r, const ProductView& view);

void save_controller(const Controller& c, const std::string& path);
Controller load_controller(const std::string& path);

}  // namespace synth
