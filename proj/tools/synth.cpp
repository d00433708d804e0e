// synth: grid-abstraction controller synthesis against parity specifications.
// Exit codes: 0 success, 2 configuration error, 3 solver invariant violation,
// 4 oracle mismatch.
#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

#include "synth/config.hpp"
#include "synth/oracle.hpp"
#include "synth/pipeline.hpp"

namespace {

int cmd_run(const std::string& config, const synth::Overrides& ov) {
  const synth::RunConfig rc = synth::load_run_config(config, ov);
  const auto res = synth::run_pipeline(rc, true);
  std::cout << "grid cells " << rc.grid.num_cells() << ", product states " << res.product_states
            << "\n";
  if (res.have_over)
    std::cout << "over  (cooperative): " << res.cells_over.count() << " cells, volume "
              << res.volume_over << ", " << res.times.solve_over << " s\n";
  if (res.have_under)
    std::cout << "under (adversarial): " << res.cells_under.count() << " cells, volume "
              << res.volume_under << ", " << res.times.solve_under << " s, controller entries "
              << res.controller.entries() << "\n";
  if (res.have_under && res.have_over)
    std::cout << "approximation gap volume " << res.volume_diff << "\n";
  if (res.sim_runs > 0)
    std::cout << "simulation: " << res.sim_runs << " runs, " << res.sim_violations
              << " region violations, " << res.sim_lookup_failures << " lookup failures, "
              << res.sim_tail_even << " even-tail runs\n";
  std::cout << "outputs in " << rc.out_dir << "\n";
  return 0;
}

int cmd_oracle(long long games, std::uint64_t seed) {
  using namespace synth;
  const auto fail = [](long long game, std::uint64_t sd, const char* what, const Bitset& a,
                       const Bitset& b, const SupportTable& g) {
    std::cerr << "oracle mismatch on game " << game << " (seed " << sd << "): " << what
              << "\nleft:";
    a.for_each([&](std::size_t s) { std::cerr << ' ' << s; });
    std::cerr << "\nright:";
    b.for_each([&](std::size_t s) { std::cerr << ' ' << s; });
    std::cerr << "\n" << build_explicit_game(g).dump();
    return 4;
  };
  for (long long i = 0; i < games; ++i) {
    const SupportTable g = random_support_game(seed + static_cast<std::uint64_t>(i));
    int ell = 1;
    for (int s = 0; s < g.n; ++s) ell = std::max(ell, g.prio[static_cast<std::size_t>(s)]);
    SolveOptions so;
    so.mode = Mode::adversarial;
    const auto adv = solve_parity(g, priorities_of(g), ell, so);
    const auto truth = oracle_winning(g, Mode::adversarial);
    if (!(adv.winning == truth))
      return fail(i, seed, "adversarial winning set differs from enumeration", adv.winning,
                  truth, g);
    so.mode = Mode::cooperative;
    const auto coop = solve_parity(g, priorities_of(g), ell, so);
    const auto coop_truth = oracle_winning(g, Mode::cooperative);
    if (!(coop.winning == coop_truth))
      return fail(i, seed, "cooperative winning set differs from enumeration", coop.winning,
                  coop_truth, g);
    if (!adv.winning.is_subset_of(coop.winning))
      return fail(i, seed, "adversarial region not contained in cooperative region",
                  adv.winning, coop.winning, g);
  }
  std::cout << games
            << " random games: both solve modes match the enumerative oracle exactly\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"abstraction-based controller synthesis for stochastic systems"};
  app.require_subcommand(1);

  std::string config_path, suite_path, out_dir, spec_path, mode;
  double eta = 0;
  std::uint64_t seed = 0;
  long long games = 100;

  auto* run = app.add_subcommand("run", "synthesize from a config file");
  run->add_option("config", config_path, "INI run configuration")->required();
  auto* o_eta = run->add_option("--eta", eta, "override grid resolution (uniform)");
  auto* o_spec = run->add_option("--spec", spec_path, "override automaton file");
  auto* o_out = run->add_option("--out", out_dir, "override output directory");
  auto* o_seed = run->add_option("--seed", seed, "override simulation seed");
  auto* o_mode =
      run->add_option("--mode", mode, "under | over | both")->check(CLI::IsMember({"under", "over", "both"}));

  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("suite", suite_path, "INI bench suite")->required();
  bench->add_option("--out", out_dir, "output directory")->capture_default_str();
  bench->add_option("--seed", seed, "simulation seed");

  auto* oracle = app.add_subcommand("oracle", "cross-check the solver on random games");
  oracle->add_option("games", games, "number of random games")->required();
  oracle->add_option("seed", seed, "generator seed")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      synth::Overrides ov;
      if (*o_eta) ov.eta = eta;
      if (*o_spec) ov.spec = spec_path;
      if (*o_out) ov.out = out_dir;
      if (*o_seed) ov.seed = seed;
      if (*o_mode) ov.mode = mode;
      return cmd_run(config_path, ov);
    }
    if (bench->parsed())
      return synth::run_bench(suite_path, out_dir.empty() ? "bench_out" : out_dir, seed);
    if (oracle->parsed()) return cmd_oracle(games, seed);
  } catch (const synth::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const synth::SolverAssertion& e) {
    std::cerr << "solver assertion: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
