/* oracle.hpp
 * Ground-truth solver for small support games, by brute force: enumerate all
 * positional controller maps pi0 (one input per state) and, for each, all
 * positional support resolutions pi1 over the random-vertex families the
 * chosen inputs induce. Each (pi0, pi1) pair fixes a finite Markov chain whose
 * almost-sure parity verdict depends only on its support: a state wins iff no
 * path reaches a bottom SCC whose maximum priority is odd. Positional
 * strategies suffice for almost-sure parity on both sides, so
 *   adversarial: win(pi0) = intersection over pi1; overall = union over pi0;
 *   cooperative: union over both.
 * Exponential, deliberately so - this is the oracle the fixpoint solver is
 * validated against. Work is exactly prod_s sum_u |Vr(s,u)| chains; callers
 * stay under the work cap (the random-game generator enforces one).
 */
#pragma once

#include <cstdint>

#include "bitset.hpp"
#include "game.hpp"

namespace synth {

struct OracleLimits {
  int max_states = 16;                     // chain analysis uses 16-bit masks
  long long max_chains = 10'000'000;       // refuse blowups
};

// total chain count prod_s sum_u |Vr(s,u)|
long long oracle_chain_count(const SupportTable& g);

Bitset oracle_winning(const SupportTable& g, Mode mode, const OracleLimits& lim = {});

struct RandomGameParams {
  int min_states = 3, max_states = 8;
  int min_inputs = 1, max_inputs = 2;
  int max_priority = 4;
  long long work_cap = 50'000;  // resample games whose oracle work exceeds this
};

SupportTable random_support_game(std::uint64_t seed, const RandomGameParams& p = {});

}  // namespace synth
