/* reach.hpp
 * One-step reachable-set boxes and the grid transition approximations.
 * For a source box X and input u with reach box R = interval(X,u):
 *   S1 = D + R         covers every f(s,u)+d               -> over rows
 *   S2 = D - (-R)      reachable from *every* s in X       -> under rows
 * Over rows take cells overlapping S1 with positive area (saturate mode clamps
 * S1 first; a dimension collapsed by clamping falls back to the quantize
 * convention, since saturated mass really lands on that boundary cell). Under
 * rows take cells whose overlap with S2 has positive measure. In sink mode,
 * mass leaving the domain sets the row's sink flag instead.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitset.hpp"
#include "grid.hpp"
#include "system.hpp"

namespace synth {

inline Box reach_box(const SystemModel& m, const Box& source, const Vec& u) {
  return m.dyn.interval(source, u);
}

struct CellPost {
  std::vector<std::int32_t> cells;  // ascending cell ids
  bool sink = false;                // sink mode only
};

CellPost overapprox_post(const SystemModel& m, const Grid& g, const Box& source, const Vec& u);
CellPost underapprox_post(const SystemModel& m, const Grid& g, const Box& source, const Vec& u);

// dense-by-row sparse transition tables; row r = cell*num_inputs + input
class Abstraction {
public:
  Grid grid;
  int num_inputs = 0;
  BoundaryMode boundary = BoundaryMode::saturate;

  std::size_t rows() const { return static_cast<std::size_t>(grid.num_cells()) * num_inputs; }
  std::size_t row(CellId c, int u) const { return static_cast<std::size_t>(c) * num_inputs + u; }

  const std::int32_t* over_begin(std::size_t r) const { return over_dat.data() + over_off[r]; }
  const std::int32_t* over_end(std::size_t r) const { return over_dat.data() + over_off[r + 1]; }
  const std::int32_t* under_begin(std::size_t r) const { return under_dat.data() + under_off[r]; }
  const std::int32_t* under_end(std::size_t r) const { return under_dat.data() + under_off[r + 1]; }
  std::size_t over_size(std::size_t r) const { return over_off[r + 1] - over_off[r]; }
  std::size_t under_size(std::size_t r) const { return under_off[r + 1] - under_off[r]; }
  bool sink_over(std::size_t r) const { return sink_over_.test(r); }
  bool sink_under(std::size_t r) const { return sink_under_.test(r); }

  std::vector<std::uint64_t> over_off, under_off;
  std::vector<std::int32_t> over_dat, under_dat;
  Bitset sink_over_, sink_under_;
};

Abstraction build_abstraction(const SystemModel& m, const Grid& g);

void export_abstraction_csv(const Abstraction& a, const std::string& path);
// reads rows back into tables shaped by (grid, num_inputs); used for debugging
// and round-trip checks
Abstraction import_abstraction_csv(const Grid& g, int num_inputs, BoundaryMode boundary,
                                   const std::string& path);

}  // namespace synth
