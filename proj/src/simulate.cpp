#include "synth/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace synth {

SimResult simulate(const SystemModel& m, const ProductView& view, const Controller& ctl,
                   const Bitset& winning_over, const Vec& s0, const SimOptions& opt) {
  if (ctl.automaton_hash != view.automaton().hash())
    throw std::invalid_argument("simulate: controller pinned to a different automaton");
  if (winning_over.size() != static_cast<std::size_t>(view.num_states()))
    throw std::invalid_argument("simulate: winning set size mismatch");
  const Grid& grid = view.abstraction().grid;
  SimResult out;
  if (opt.record_trajectory) out.trajectory.reserve(static_cast<std::size_t>(opt.horizon) + 1);
  CounterRng rng(opt.seed, opt.run_index);

  Vec s = s0;
  CellId c = grid.quantize(s);
  int q = view.initial_aut(static_cast<int>(c));
  const long long tail_start =
      opt.horizon - static_cast<long long>(std::floor(opt.tail_fraction * opt.horizon));
  auto visit = [&](long long k) {
    if (opt.record_trajectory) out.trajectory.push_back(s);
    if (!winning_over.test(static_cast<std::size_t>(view.compose(q, static_cast<int>(c)))))
      out.stayed_in_winning = false;
    if (k >= tail_start) {
      const int p = view.automaton().priority[static_cast<std::size_t>(q)];
      if (p > out.tail_max_priority) out.tail_max_priority = p;
    }
  };
  visit(0);
  const Vec zero(static_cast<std::size_t>(m.dim), 0.0);
  for (long long k = 0; k < opt.horizon; ++k) {
    const Vec* u = &zero;
    if (ctl.defined(c, q)) {
      u = &m.inputs[static_cast<std::size_t>(ctl.lookup(c, q))];
    } else {
      out.lookup_failed = true;  // violation event; diagnostic mode keeps going on zero input
    }
    Vec next = m.raw(s, *u);
    const Vec d = sample_noise(rng, m.noise);
    for (int i = 0; i < m.dim; ++i) next[i] += d[i];
    if (!m.domain.contains(next)) {
      if (m.boundary == BoundaryMode::sink) out.left_domain = true;  // diagnose, clamp, go on
      next = m.domain.clamp(next);
    }
    s = std::move(next);
    c = grid.quantize(s);
    q = view.advance(q, static_cast<int>(c));
    out.steps = k + 1;
    visit(k + 1);
  }
  return out;
}

WilsonInterval wilson_interval(long long hits, long long runs, double z) {
  if (runs <= 0) throw std::invalid_argument("wilson: no runs");
  WilsonInterval w;
  w.hits = hits;
  w.runs = runs;
  const double n = static_cast<double>(runs);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.point = p;
  w.lo = center - half;
  w.hi = center + half;
  return w;
}

WilsonInterval estimate_hit_probability(const SystemModel& m,
                                        const std::function<bool(const Vec&)>& in_target,
                                        const Vec& s0, int input_idx, long long horizon,
                                        long long runs, std::uint64_t seed, double z) {
  const Vec& u = m.inputs.at(static_cast<std::size_t>(input_idx));
  long long hits = 0;
  for (long long r = 0; r < runs; ++r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    Vec s = s0;
    for (long long k = 0;; ++k) {
      if (in_target(s)) {
        ++hits;
        break;
      }
      if (k >= horizon) break;
      Vec next = m.raw(s, u);
      const Vec d = sample_noise(rng, m.noise);
      for (int i = 0; i < m.dim; ++i) next[i] += d[i];
      if (!m.domain.contains(next)) next = m.domain.clamp(next);
      s = std::move(next);
    }
  }
  return wilson_interval(hits, runs, z);
}

}  // namespace synth
