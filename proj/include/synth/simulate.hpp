/* simulate.hpp
 * Monte-Carlo validation of refined controllers. Noise is drawn from the box
 * support with a counter-based generator (SplitMix64 finalizer over
 * key + counter), so every run is reproducible from (seed, run index) alone
 * and runs are independent of evaluation order.
 *
 * A closed-loop run tracks (state, cell, automaton state); the automaton reads
 * the letter of the cell the state ARRIVES in, matching the product
 * construction. The run records whether it ever left the over-approximation
 * winning region, whether a controller lookup failed, and the maximum
 * priority seen in the tail window (even = the parity objective held on the
 * sampled suffix).
 */
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bitset.hpp"
#include "controller.hpp"
#include "product.hpp"
#include "system.hpp"

namespace synth {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// counter-mode generator: value i of stream (seed, stream) is pure function of
// (seed, stream, i)
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream ^ 0x5851f42d4c957f2dull))) {}
  std::uint64_t next() { return mix64(key_ + 0x632be59bd9b4e019ull * ++ctr_); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

inline Vec sample_noise(CounterRng& rng, const Box& support) {
  Vec d(support.lo.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = rng.uniform(support.lo[i], support.hi[i]);
  return d;
}

struct SimOptions {
  long long horizon = 10000;
  double tail_fraction = 0.2;  // suffix window for the parity check
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  bool record_trajectory = false;
};

struct SimResult {
  bool stayed_in_winning = true;  // never visited a product state outside winning_over
  bool lookup_failed = false;     // hit a (cell, q) with no controller decision
  bool left_domain = false;       // sink mode: raw+noise exited (clamped, run continues)
  int tail_max_priority = 0;
  long long steps = 0;
  std::vector<Vec> trajectory;

  bool tail_parity_even() const { return tail_max_priority % 2 == 0; }
};

SimResult simulate(const SystemModel& m, const ProductView& view, const Controller& ctl,
                   const Bitset& winning_over, const Vec& s0, const SimOptions& opt);

struct WilsonInterval {
  double lo = 0, hi = 0, point = 0;
  long long hits = 0, runs = 0;
  bool covers(double p) const { return lo <= p && p <= hi; }
};

WilsonInterval wilson_interval(long long hits, long long runs, double z = 1.959963985);

// open-loop hit-probability estimate: fixed input index, run ends on first
// visit to the target (counted) or at the horizon (not counted)
WilsonInterval estimate_hit_probability(const SystemModel& m,
                                        const std::function<bool(const Vec&)>& in_target,
                                        const Vec& s0, int input_idx, long long horizon,
                                        long long runs, std::uint64_t seed,
                                        double z = 1.959963985);

}  // namespace synth
