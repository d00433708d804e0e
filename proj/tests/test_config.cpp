#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include <synth/config.hpp>

using namespace synth;

#ifndef SYNTH_SOURCE_DIR
#error "SYNTH_SOURCE_DIR must point at the repository root"
#endif

namespace {

namespace fs = std::filesystem;

struct TempConfigDir {
  fs::path dir;
  TempConfigDir() {
    dir = fs::temp_directory_path() / "synth_cfg_test";
    fs::create_directories(dir);
    std::ofstream aut(dir / "mini.aut");
    aut << "STATES\nq:2\nINITIAL\nq\nALPHABET\nA\nTRANS\nq true q\n";
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << text;
    return p.string();
  }
};

// minimal loadable configuration; callers patch single lines to break it
std::string base_config(const std::string& patch_key = "", const std::string& patch_val = "") {
  std::string text = R"([system]
name = bistable_switch
a = 1.3
b = 0.25
tau = 0.05
domain = 0 4 0 4
noise = -0.4 -0.2 -0.4 -0.2
input_grid = 0 ; 0
boundary = saturate

[grid]
eta = 0.5

[spec]
predicate.A = 1 3 1 2
automaton = mini.aut

[solve]
mode = both
warm_start = true

[sim]
runs = 10
horizon = 100
tail = 0.2
seed = 7

[output]
dir = out/test
)";
  if (!patch_key.empty()) {
    const std::string needle = patch_key + " = ";
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    const auto eol = text.find('\n', pos);
    text.replace(pos, eol - pos, needle + patch_val);
  }
  return text;
}

}  // namespace

TEST_CASE("ini parser: sections, comments, whitespace, fallbacks") {
  const IniFile ini = IniFile::parse(R"(
# leading comment
[alpha]
key = value with spaces
num=42
# mid comment
[beta]
flag = true
)",
                                     "inline");
  CHECK(ini.has("alpha", "key"));
  CHECK(ini.get("alpha", "key") == "value with spaces");
  CHECK(ini.get("alpha", "num") == "42");
  CHECK(ini.get("beta", "flag") == "true");
  CHECK(!ini.has("alpha", "missing"));
  CHECK(ini.get_or("alpha", "missing", "fb") == "fb");
  CHECK(ini.get_or("gamma", "anything", "fb") == "fb");
  CHECK_THROWS_AS(ini.get("alpha", "missing"), ConfigError);
  CHECK_THROWS_AS(ini.get("gamma", "key"), ConfigError);
}

TEST_CASE("ini parser rejects malformed input") {
  CHECK_THROWS_AS(IniFile::parse("stray line before any section\n", "inline"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse("[sec]\nline without equals\n", "inline"), ConfigError);
  CHECK_THROWS_AS(IniFile::parse_file("/nonexistent/path/to.cfg"), ConfigError);
}

TEST_CASE("shipped benchmark configuration loads with every field") {
  const RunConfig cfg = load_run_config(SYNTH_SOURCE_DIR "/configs/bistable_phi1.cfg");
  CHECK(cfg.name == "bistable_switch");
  CHECK(cfg.model.dim == 2);
  CHECK(cfg.model.inputs.size() == 9);
  CHECK(cfg.model.boundary == BoundaryMode::saturate);
  CHECK(cfg.model.noise.lo == Vec{-0.4, -0.4});
  CHECK(cfg.model.noise.hi == Vec{-0.2, -0.2});
  CHECK(cfg.grid.eta() == Vec{0.125, 0.125});
  CHECK(cfg.grid.domain().lo == Vec{0.0, 0.0});
  CHECK(cfg.grid.domain().hi == Vec{4.0, 4.0});
  REQUIRE(cfg.preds.index_of("A") == 0);
  CHECK(cfg.preds.regions[0].size() == 2);
  CHECK(cfg.aut.num_states() == 5);
  CHECK(cfg.solve_under);
  CHECK(cfg.solve_over);
  CHECK(cfg.warm_start);
  CHECK(cfg.sim_runs == 500);
  CHECK(cfg.horizon == 10000);
  CHECK(cfg.tail == doctest::Approx(0.2));
  CHECK(cfg.seed == 1);
  CHECK(cfg.out_dir == "out/phi1");
  // the input grid is the cartesian product of the per-dimension value lists
  bool has_center = false;
  for (const auto& u : cfg.model.inputs)
    if (u == Vec{0.0, 0.0}) has_center = true;
  CHECK(has_center);
}

TEST_CASE("command-line overrides replace config values") {
  Overrides ov;
  ov.eta = 0.5;
  ov.seed = 99;
  ov.out = "elsewhere";
  ov.mode = "under";
  const RunConfig cfg = load_run_config(SYNTH_SOURCE_DIR "/configs/bistable_phi1.cfg", ov);
  CHECK(cfg.grid.eta() == Vec{0.5, 0.5});
  CHECK(cfg.seed == 99);
  CHECK(cfg.out_dir == "elsewhere");
  CHECK(cfg.solve_under);
  CHECK(!cfg.solve_over);

  Overrides over_only;
  over_only.mode = "over";
  const RunConfig cfg2 = load_run_config(SYNTH_SOURCE_DIR "/configs/bistable_phi1.cfg", over_only);
  CHECK(!cfg2.solve_under);
  CHECK(cfg2.solve_over);

  Overrides bad;
  bad.mode = "sideways";
  CHECK_THROWS_AS(load_run_config(SYNTH_SOURCE_DIR "/configs/bistable_phi1.cfg", bad), ConfigError);
}

TEST_CASE("spec override swaps the automaton") {
  const TempConfigDir tmp;
  const std::string alt = tmp.write("alt.aut",
                                    "STATES\np0:1\np1:2\nINITIAL\np0\nALPHABET\nA\nTRANS\n"
                                    "p0 A p1\np0 !A p0\np1 true p1\n");
  const std::string cfg_path = tmp.write("swap.cfg", base_config());
  CHECK(load_run_config(cfg_path).aut.num_states() == 1);
  Overrides ov;
  ov.spec = alt;
  const RunConfig swapped = load_run_config(cfg_path, ov);
  CHECK(swapped.aut.num_states() == 2);
  CHECK(swapped.automaton_path == alt);
}

TEST_CASE("configuration validation failures all surface as ConfigError") {
  const TempConfigDir tmp;
  const auto expect_bad = [&](const std::string& name, const std::string& key,
                              const std::string& val) {
    const std::string path = tmp.write(name, base_config(key, val));
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
  };

  expect_bad("bad_system.cfg", "name", "unknown_system");
  expect_bad("bad_bool.cfg", "warm_start", "maybe");
  expect_bad("odd_domain.cfg", "domain", "0 4 0");
  expect_bad("inverted_domain.cfg", "domain", "4 0 0 4");
  expect_bad("bad_boundary.cfg", "boundary", "bounce");
  expect_bad("bad_mode.cfg", "mode", "sideways");
  expect_bad("tail_zero.cfg", "tail", "0");
  expect_bad("tail_big.cfg", "tail", "1.5");
  expect_bad("bad_eta.cfg", "eta", "0.3");          // does not divide the domain
  expect_bad("bad_aut.cfg", "automaton", "missing.aut");
  expect_bad("bad_pred.cfg", "predicate.A", "1 3 1");  // odd bound count

  // missing required section: drop [system] entirely
  std::string text = base_config();
  const auto pos = text.find("[system]");
  REQUIRE(pos != std::string::npos);
  const auto grid_pos = text.find("[grid]");
  text.erase(pos, grid_pos - pos);
  const std::string path = tmp.write("no_system.cfg", text);
  CHECK_THROWS_AS(load_run_config(path), ConfigError);

  // the unpatched template must itself load (guards the helper against rot)
  const RunConfig ok = load_run_config(tmp.write("ok.cfg", base_config()));
  CHECK(ok.model.inputs.size() == 1);
}
