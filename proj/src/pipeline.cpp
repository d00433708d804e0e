#include "synth/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace synth {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_winning_csv(const std::string& path, const ProductView& view, const Grid& grid,
                       const SolveResult& r) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (int i = 0; i < grid.dim(); ++i) f << 'i' << i << ',';
  f << "q,winning,input\n";
  const int C = view.num_cells();
  for (int q = 0; q < view.automaton().num_states(); ++q)
    for (int c = 0; c < C; ++c) {
      for (auto k : grid.unflatten(c)) f << k << ',';
      const auto s = static_cast<std::size_t>(view.compose(q, c));
      const bool win = r.winning.test(s);
      f << q << ',' << (win ? 1 : 0) << ',';
      if (win && r.strategy[s] >= 0)
        f << r.strategy[s];
      else
        f << '-';
      f << '\n';
    }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_region_pgm(const std::string& path, const Grid& grid, const Bitset& under,
                      const Bitset& over) {
  if (grid.dim() != 2) return;
  const auto nx = grid.cells_per_dim()[0], ny = grid.cells_per_dim()[1];
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "P2\n" << nx << ' ' << ny << "\n2\n";
  for (long long y = ny - 1; y >= 0; --y) {  // top image row = top of the domain
    for (long long x = 0; x < nx; ++x) {
      const auto c = static_cast<std::size_t>(grid.flatten({x, y}));
      const int v = under.test(c) ? 2 : over.test(c) ? 1 : 0;
      f << v << (x + 1 == nx ? '\n' : ' ');
    }
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

Bitset cell_region(const ProductView& view, const Bitset& winning) {
  Bitset cells(static_cast<std::size_t>(view.num_cells()));
  for (int c = 0; c < view.num_cells(); ++c) {
    const int q0 = view.initial_aut(c);
    if (winning.test(static_cast<std::size_t>(view.compose(q0, c)))) cells.set(static_cast<std::size_t>(c));
  }
  return cells;
}

std::string iters_to_string(const SolveResult& r) {
  std::ostringstream os;
  for (std::size_t i = 1; i < r.iterations.size(); ++i) {
    if (i > 1) os << ' ';
    os << 'v' << i << '=' << r.iterations[i];
  }
  return os.str();
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, bool write_outputs) {
  const auto t_total = std::chrono::steady_clock::now();
  PipelineResult out;

  auto t0 = std::chrono::steady_clock::now();
  const Abstraction abs = build_abstraction(cfg.model, cfg.grid);
  const auto letters = label_cells(cfg.preds, cfg.aut, cfg.grid);
  const ProductView view(abs, cfg.aut, letters);
  out.times.abstraction = seconds_since(t0);
  out.product_states = view.num_states();

  const auto prio = priorities_of(view);
  const int ell = cfg.aut.max_priority();

  if (cfg.solve_over) {
    t0 = std::chrono::steady_clock::now();
    SolveOptions so;
    so.mode = Mode::cooperative;
    so.extract_strategy = false;  // the over-approximation only bounds the region
    out.over = solve_parity(view, prio, ell, so);
    out.times.solve_over = seconds_since(t0);
    out.have_over = true;
  }
  if (cfg.solve_under) {
    t0 = std::chrono::steady_clock::now();
    SolveOptions so;
    so.mode = Mode::adversarial;
    if (cfg.warm_start && out.have_over) so.warm_start = &out.over.winning;
    out.under = solve_parity(view, prio, ell, so);
    out.times.solve_under = seconds_since(t0);
    out.have_under = true;
    out.controller = refine(out.under, view);
  }

  const double cell_vol = [&] {
    double v = 1;
    for (auto e : cfg.grid.eta()) v *= e;
    return v;
  }();
  if (out.have_under) {
    out.cells_under = cell_region(view, out.under.winning);
    out.volume_under = static_cast<double>(out.cells_under.count()) * cell_vol;
  } else {
    out.cells_under = Bitset(static_cast<std::size_t>(view.num_cells()));
  }
  if (out.have_over) {
    out.cells_over = cell_region(view, out.over.winning);
    out.volume_over = static_cast<double>(out.cells_over.count()) * cell_vol;
  } else {
    out.cells_over = Bitset(static_cast<std::size_t>(view.num_cells()));
  }
  if (out.have_under && out.have_over) {
    Bitset diff = out.cells_over;
    diff.subtract(out.cells_under);
    out.volume_diff = static_cast<double>(diff.count()) * cell_vol;
  }

  // closed-loop validation from under-region cell centers
  if (cfg.sim_runs > 0 && out.have_under && out.cells_under.count() > 0) {
    t0 = std::chrono::steady_clock::now();
    const auto starts = out.cells_under.to_indices();
    const Bitset& stay = out.have_over ? out.over.winning : out.under.winning;
    for (long long r = 0; r < cfg.sim_runs; ++r) {
      SimOptions so;
      so.horizon = cfg.horizon;
      so.tail_fraction = cfg.tail;
      so.seed = cfg.seed;
      so.run_index = static_cast<std::uint64_t>(r);
      const auto c0 = starts[static_cast<std::size_t>(r) % starts.size()];
      const auto res = simulate(cfg.model, view, out.controller, stay,
                                cfg.grid.cell_center(static_cast<CellId>(c0)), so);
      ++out.sim_runs;
      if (!res.stayed_in_winning) ++out.sim_violations;
      if (res.lookup_failed) ++out.sim_lookup_failures;
      if (res.tail_parity_even()) ++out.sim_tail_even;
    }
    out.times.simulate = seconds_since(t0);
  }
  out.times.total = seconds_since(t_total);

  if (write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const auto in_dir = [&](const char* n) { return (fs::path(cfg.out_dir) / n).string(); };
    if (out.have_under) {
      write_winning_csv(in_dir("winning_under.csv"), view, cfg.grid, out.under);
      save_controller(out.controller, in_dir("controller.txt"));
    }
    if (out.have_over) write_winning_csv(in_dir("winning_over.csv"), view, cfg.grid, out.over);
    write_region_pgm(in_dir("region.pgm"), cfg.grid, out.cells_under, out.cells_over);
    {
      std::ofstream f(in_dir("error.txt"));
      f << std::setprecision(17);
      f << "cells_under " << out.cells_under.count() << "\n";
      f << "cells_over " << out.cells_over.count() << "\n";
      Bitset diff = out.cells_over;
      diff.subtract(out.cells_under);
      f << "cells_diff " << (out.have_under && out.have_over ? diff.count() : 0) << "\n";
      f << "volume_under " << out.volume_under << "\n";
      f << "volume_over " << out.volume_over << "\n";
      f << "volume_diff " << out.volume_diff << "\n";
    }
    {
      std::ofstream f(in_dir("stats.txt"));
      f << std::setprecision(6);
      f << "system " << cfg.name << "\n";
      f << "automaton " << cfg.automaton_path << " hash " << std::hex << cfg.aut.hash()
        << std::dec << "\n";
      f << "grid";
      for (auto n : cfg.grid.cells_per_dim()) f << ' ' << n;
      f << " cells " << cfg.grid.num_cells() << " eta";
      for (auto e : cfg.grid.eta()) f << ' ' << e;
      f << "\nproduct_states " << out.product_states << "\n";
      f << "t_abstraction " << out.times.abstraction << "\n";
      if (out.have_over)
        f << "t_solve_over " << out.times.solve_over << " iters " << iters_to_string(out.over)
          << "\n";
      if (out.have_under)
        f << "t_solve_under " << out.times.solve_under << " iters " << iters_to_string(out.under)
          << "\n";
      f << "cells_under " << out.cells_under.count() << " volume_under " << out.volume_under
        << "\n";
      f << "cells_over " << out.cells_over.count() << " volume_over " << out.volume_over << "\n";
      f << "volume_diff " << out.volume_diff << "\n";
      if (out.sim_runs > 0)
        f << "sim runs " << out.sim_runs << " violations " << out.sim_violations
          << " lookup_failures " << out.sim_lookup_failures << " tail_even " << out.sim_tail_even
          << " t_sim " << out.times.simulate << "\n";
      f << "t_total " << out.times.total << "\n";
    }
  }
  return out;
}

int run_bench(const std::string& suite_path, const std::string& out_dir, std::uint64_t seed) {
  namespace fs = std::filesystem;
  const IniFile suite = IniFile::parse_file(suite_path);
  if (suite.sections.empty()) throw ConfigError(suite_path + ": empty bench suite");
  fs::create_directories(out_dir);
  std::ofstream sum((fs::path(out_dir) / "bench_summary.csv").string());
  sum << "entry,eta,cells,product_states,cells_under,cells_over,volume_under,volume_over,"
         "volume_diff,t_abstraction,t_solve_over,t_solve_under,t_total\n";
  const std::string base = [&] {
    const auto p = suite_path.find_last_of('/');
    return p == std::string::npos ? std::string(".") : suite_path.substr(0, p);
  }();
  for (const auto& [entry, kv] : suite.sections) {
    auto cfg_it = kv.find("config");
    auto eta_it = kv.find("etas");
    if (cfg_it == kv.end() || eta_it == kv.end())
      throw ConfigError(suite_path + ": [" + entry + "] needs config and etas");
    std::istringstream es(eta_it->second);
    double eta;
    int k = 0;
    while (es >> eta) {
      Overrides ov;
      ov.eta = eta;
      ov.seed = seed;
      std::string cfg_path = cfg_it->second;
      if (!cfg_path.empty() && cfg_path.front() != '/') cfg_path = base + "/" + cfg_path;
      RunConfig rc = load_run_config(cfg_path, ov);
      rc.sim_runs = 0;  // benchmarks measure synthesis, not simulation
      std::ostringstream sub;
      sub << entry << "_eta" << k;
      rc.out_dir = (fs::path(out_dir) / sub.str()).string();
      const auto res = run_pipeline(rc, true);
      sum << entry << ',' << std::setprecision(17) << eta << ',' << rc.grid.num_cells() << ','
          << res.product_states << ',' << res.cells_under.count() << ','
          << res.cells_over.count() << ',' << res.volume_under << ',' << res.volume_over << ','
          << res.volume_diff << ',' << std::setprecision(6) << res.times.abstraction << ','
          << res.times.solve_over << ',' << res.times.solve_under << ',' << res.times.total
          << '\n';
      sum.flush();
      ++k;
    }
  }
  return 0;
}

}  // namespace synth
