/* config.hpp
 * INI run configurations:
 *
 *   [system]  name = bistable_switch | affine
 *             a/b/tau (bistable)  or  A / c (affine, rows ';'-separated)
 *             domain   = lo1 hi1 lo2 hi2 ...      (interleaved per dimension)
 *             noise    = lo1 hi1 lo2 hi2 ...
 *             input_grid = v v v ; v v v          (per-dim value lists, product)
 *             boundary = saturate | sink
 *   [grid]    eta = e  (uniform)  or  e1 e2 ...
 *   [spec]    predicate.<NAME> = l h l h ; l h l h   (union of boxes)
 *             automaton = file.aut                   (relative to the config)
 *   [solve]   mode = both | under | over,  warm_start = true|false
 *   [sim]     runs, horizon, tail, seed
 *   [output]  dir
 *
 * '#' starts a comment. All validation failures throw ConfigError (CLI exit 2).
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "automaton.hpp"
#include "grid.hpp"
#include "system.hpp"

namespace synth {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniFile parse_file(const std::string& path);
  static IniFile parse(const std::string& text, const std::string& origin);

  bool has(const std::string& sec, const std::string& key) const;
  const std::string& get(const std::string& sec, const std::string& key) const;
  std::string get_or(const std::string& sec, const std::string& key,
                     const std::string& fallback) const;
};

struct Overrides {
  std::optional<double> eta;
  std::optional<std::string> spec;  // replacement automaton file
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;  // under | over | both
};

struct RunConfig {
  std::string name;
  SystemModel model;
  Grid grid;
  PredicateSet preds;
  ParityAutomaton aut;
  std::string automaton_path;
  bool solve_under = true;   // adversarial solve (guaranteed region + controller)
  bool solve_over = true;    // cooperative solve (possibility bound)
  bool warm_start = true;
  long long sim_runs = 0;
  long long horizon = 10000;
  double tail = 0.2;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

RunConfig load_run_config(const std::string& path, const Overrides& ov = {});

}  // namespace synth
