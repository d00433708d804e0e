/* pipeline.hpp
 * End-to-end run: build the grid abstraction, label cells, form the lazy
 * automaton product, solve cooperatively (over-approximation / possibility
 * bound) and adversarially (under-approximation, warm-started from the
 * cooperative region when enabled - sound because the adversarial region is
 * contained in the cooperative one and the cooperative fixpoint is a
 * pre-fixpoint of the adversarial functional), refine the controller, write
 * reports, and optionally validate by closed-loop simulation.
 *
 * Outputs in cfg.out_dir:
 *   winning_under.csv / winning_over.csv   per (cell, automaton state) rows
 *   controller.txt                         refined controller (when computed)
 *   error.txt                              cell counts and volume of over\under
 *   region.pgm                             2=under 1=over-only 0=outside (2D)
 *   stats.txt                              timings, iteration counts, sim summary
 */
#pragma once

#include <string>

#include "config.hpp"
#include "controller.hpp"
#include "product.hpp"
#include "simulate.hpp"
#include "solver.hpp"

namespace synth {

struct StageTimes {
  double abstraction = 0, solve_over = 0, solve_under = 0, simulate = 0, total = 0;
};

struct PipelineResult {
  long long product_states = 0;
  bool have_under = false, have_over = false;
  SolveResult under, over;                 // product-level winning regions
  Bitset cells_under, cells_over;          // cell-level: from-start winning cells
  double volume_under = 0, volume_over = 0, volume_diff = 0;
  StageTimes times;
  Controller controller;                   // valid when have_under
  long long sim_runs = 0, sim_violations = 0, sim_lookup_failures = 0, sim_tail_even = 0;
};

PipelineResult run_pipeline(const RunConfig& cfg, bool write_outputs = true);

// bench suite: one INI section per entry, keys `config` (path relative to the
// suite file) and `etas` (list). Writes per-run outputs plus bench_summary.csv
// under out_dir.
int run_bench(const std::string& suite_path, const std::string& out_dir, std::uint64_t seed);

}  // namespace synth
