#include "synth/oracle.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace synth {
namespace {

// the support-resolution choices Vr(s,u) as successor masks, same family the
// explicit game uses
std::vector<std::uint32_t> vr_choices(const SupportTable& g, int s, int u) {
  std::uint32_t base = 0;
  bool under_empty = true;
  g.for_each_under(s, u, [&](int x) {
    base |= 1u << x;
    under_empty = false;
    return true;
  });
  std::vector<std::uint32_t> out;
  if (!under_empty) out.push_back(base);
  g.for_each_over_not_under(s, u, [&](int x) {
    out.push_back(base | (1u << x));
    return true;
  });
  return out;
}

}  // namespace

long long oracle_chain_count(const SupportTable& g) {
  long long total = 1;
  for (int s = 0; s < g.n; ++s) {
    long long per_state = 0;
    for (int u = 0; u < g.m; ++u) {
      std::size_t under = 0, extra = 0;
      g.for_each_under(s, u, [&](int) {
        ++under;
        return true;
      });
      g.for_each_over_not_under(s, u, [&](int) {
        ++extra;
        return true;
      });
      per_state += under == 0 ? static_cast<long long>(extra) : 1 + static_cast<long long>(extra);
    }
    if (per_state <= 0) throw std::invalid_argument("oracle: state with no resolutions");
    if (total > (1LL << 62) / per_state) return 1LL << 62;
    total *= per_state;
  }
  return total;
}

Bitset oracle_winning(const SupportTable& g, Mode mode, const OracleLimits& lim) {
  g.validate();
  const int n = g.n, m = g.m;
  if (n < 1 || n > lim.max_states) throw std::invalid_argument("oracle: state count out of range");
  if (oracle_chain_count(g) > lim.max_chains)
    throw std::invalid_argument("oracle: instance exceeds the chain budget");

  // choices[s][u] = list of successor masks
  std::vector<std::vector<std::vector<std::uint32_t>>> choices(
      static_cast<std::size_t>(n), std::vector<std::vector<std::uint32_t>>(static_cast<std::size_t>(m)));
  for (int s = 0; s < n; ++s)
    for (int u = 0; u < m; ++u)
      choices[static_cast<std::size_t>(s)][static_cast<std::size_t>(u)] = vr_choices(g, s, u);

  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::uint32_t overall = 0;

  std::vector<int> pi0(static_cast<std::size_t>(n), 0);
  std::vector<int> pi1(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> succ(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> reach(static_cast<std::size_t>(n), 0);

  // almost-sure parity verdict of the chain succ[]: win = no path to a bottom
  // SCC with odd maximum priority
  auto chain_win = [&]() -> std::uint32_t {
    for (int s = 0; s < n; ++s) reach[static_cast<std::size_t>(s)] = (1u << s) | succ[static_cast<std::size_t>(s)];
    for (int k = 0; k < n; ++k)
      for (int s = 0; s < n; ++s)
        if (reach[static_cast<std::size_t>(s)] >> k & 1u) reach[static_cast<std::size_t>(s)] |= reach[static_cast<std::size_t>(k)];
    std::uint32_t bad = 0;
    for (int s = 0; s < n; ++s) {
      const std::uint32_t r = reach[static_cast<std::size_t>(s)];
      if (bad & (1u << s)) continue;
      bool bottom = true;
      int maxp = 0;
      for (int t = 0; t < n && bottom; ++t)
        if (r >> t & 1u) {
          if (!(reach[static_cast<std::size_t>(t)] >> s & 1u)) bottom = false;
          else if (g.prio[static_cast<std::size_t>(t)] > maxp) maxp = g.prio[static_cast<std::size_t>(t)];
        }
      if (bottom && maxp % 2 == 1) bad |= r;
    }
    std::uint32_t losing = 0;
    for (int s = 0; s < n; ++s)
      if (reach[static_cast<std::size_t>(s)] & bad) losing |= 1u << s;
    return full & ~losing;
  };

  for (;;) {  // odometer over pi0
    std::uint32_t acc = (mode == Mode::adversarial) ? full : 0;
    std::fill(pi1.begin(), pi1.end(), 0);
    for (;;) {  // odometer over pi1 (resolution per selected (s, pi0[s]))
      for (int s = 0; s < n; ++s)
        succ[static_cast<std::size_t>(s)] =
            choices[static_cast<std::size_t>(s)][static_cast<std::size_t>(pi0[static_cast<std::size_t>(s)])]
                   [static_cast<std::size_t>(pi1[static_cast<std::size_t>(s)])];
      const std::uint32_t w = chain_win();
      if (mode == Mode::adversarial) {
        acc &= w;
        if (acc == 0) break;
      } else {
        acc |= w;
      }
      int d = 0;
      while (d < n) {
        auto& k = pi1[static_cast<std::size_t>(d)];
        const auto lim_d = choices[static_cast<std::size_t>(d)][static_cast<std::size_t>(pi0[static_cast<std::size_t>(d)])].size();
        if (static_cast<std::size_t>(++k) < lim_d) break;
        k = 0;
        ++d;
      }
      if (d == n) break;
    }
    overall |= acc;
    if (overall == full) break;
    int d = 0;
    while (d < n) {
      auto& k = pi0[static_cast<std::size_t>(d)];
      if (++k < m) break;
      k = 0;
      ++d;
    }
    if (d == n) break;
  }

  Bitset out(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    if (overall >> s & 1u) out.set(static_cast<std::size_t>(s));
  return out;
}

SupportTable random_support_game(std::uint64_t seed, const RandomGameParams& p) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) {  // inclusive; avoids distribution portability gaps
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  for (;;) {
    const int n = pick(p.min_states, p.max_states);
    const int m = pick(p.min_inputs, p.max_inputs);
    SupportTable g(n, m);
    for (int s = 0; s < n; ++s) g.prio[static_cast<std::size_t>(s)] = pick(1, p.max_priority);
    for (int s = 0; s < n; ++s)
      for (int u = 0; u < m; ++u) {
        auto pick_distinct = [&](int count, std::vector<std::int32_t> avoid) {
          std::vector<std::int32_t> out;
          while (static_cast<int>(out.size()) < count) {
            const auto x = static_cast<std::int32_t>(pick(0, n - 1));
            bool dup = false;
            for (auto y : out) dup = dup || y == x;
            for (auto y : avoid) dup = dup || y == x;
            if (!dup) out.push_back(x);
          }
          std::sort(out.begin(), out.end());
          return out;
        };
        auto& over = g.over[g.row(s, u)];
        auto& under = g.under[g.row(s, u)];
        if (pick(0, 3) == 0) {  // empty under row: up to 3 singleton resolutions
          under.clear();
          over = pick_distinct(pick(1, std::min(3, n)), {});
        } else {
          under = pick_distinct(pick(1, std::min(2, n)), {});
          const int extra = pick(0, std::min(2, n - static_cast<int>(under.size())));
          auto add = pick_distinct(extra, under);
          over = under;
          over.insert(over.end(), add.begin(), add.end());
          std::sort(over.begin(), over.end());
        }
      }
    if (oracle_chain_count(g) <= p.work_cap) return g;
  }
}

}  // namespace synth
