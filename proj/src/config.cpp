#include "synth/config.hpp"

#include <fstream>
#include <sstream>

namespace synth {
namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
  std::istringstream is(s);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (is.bad() || (is.clear(), is >> rest))
    throw ConfigError(what + ": expected numbers, got '" + s + "'");
  if (out.empty()) throw ConfigError(what + ": empty value");
  return out;
}

std::vector<std::string> split_groups(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string piece;
  while (std::getline(is, piece, ';')) out.push_back(trim(piece));
  return out;
}

Box parse_box_interleaved(const std::string& s, int dim, const std::string& what) {
  const auto v = parse_doubles(s, what);
  if (static_cast<int>(v.size()) != 2 * dim)
    throw ConfigError(what + ": expected " + std::to_string(2 * dim) + " numbers (lo hi per dim)");
  Box b;
  for (int i = 0; i < dim; ++i) {
    b.lo.push_back(v[static_cast<std::size_t>(2 * i)]);
    b.hi.push_back(v[static_cast<std::size_t>(2 * i) + 1]);
  }
  return b;
}

std::string dir_of(const std::string& path) {
  const auto p = path.find_last_of('/');
  return p == std::string::npos ? std::string(".") : path.substr(0, p);
}

bool parse_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(what + ": expected a boolean, got '" + s + "'");
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
  IniFile ini;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      ini.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (section.empty()) throw ConfigError(where + ": key outside any section");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    ini.sections[section][key] = trim(line.substr(eq + 1));
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::ostringstream all;
  all << f.rdbuf();
  return parse(all.str(), path);
}

bool IniFile::has(const std::string& sec, const std::string& key) const {
  const auto s = sections.find(sec);
  return s != sections.end() && s->second.count(key) > 0;
}

const std::string& IniFile::get(const std::string& sec, const std::string& key) const {
  const auto s = sections.find(sec);
  if (s == sections.end()) throw ConfigError("missing section [" + sec + "]");
  const auto k = s->second.find(key);
  if (k == s->second.end()) throw ConfigError("missing key '" + key + "' in [" + sec + "]");
  return k->second;
}

std::string IniFile::get_or(const std::string& sec, const std::string& key,
                            const std::string& fallback) const {
  return has(sec, key) ? get(sec, key) : fallback;
}

RunConfig load_run_config(const std::string& path, const Overrides& ov) {
  const IniFile ini = IniFile::parse_file(path);
  RunConfig rc;
  try {
    // ---- system -------------------------------------------------------------
    rc.name = ini.get("system", "name");
    const auto domain_vals = parse_doubles(ini.get("system", "domain"), "[system] domain");
    if (domain_vals.size() % 2 != 0) throw ConfigError("[system] domain: odd value count");
    const int dim = static_cast<int>(domain_vals.size() / 2);
    rc.model.dim = dim;
    rc.model.domain = parse_box_interleaved(ini.get("system", "domain"), dim, "[system] domain");
    rc.model.noise = parse_box_interleaved(ini.get("system", "noise"), dim, "[system] noise");
    for (int i = 0; i < dim; ++i) {
      if (rc.model.domain.lo[i] >= rc.model.domain.hi[i])
        throw ConfigError("[system] domain: lo >= hi in dim " + std::to_string(i));
      if (rc.model.noise.lo[i] > rc.model.noise.hi[i])
        throw ConfigError("[system] noise: lo > hi in dim " + std::to_string(i));
    }
    if (rc.name == "bistable_switch") {
      if (dim != 2) throw ConfigError("bistable_switch is two-dimensional");
      const double a = std::stod(ini.get("system", "a"));
      const double b = std::stod(ini.get("system", "b"));
      const double tau = std::stod(ini.get("system", "tau"));
      rc.model.dyn = make_bistable_switch(a, b, tau);
    } else if (rc.name == "affine") {
      const auto rows = split_groups(ini.get("system", "A"));
      if (static_cast<int>(rows.size()) != dim) throw ConfigError("[system] A: need one row per dim");
      std::vector<Vec> A;
      for (const auto& r : rows) {
        auto row = parse_doubles(r, "[system] A");
        if (static_cast<int>(row.size()) != dim) throw ConfigError("[system] A: row length != dim");
        A.push_back(std::move(row));
      }
      auto c = parse_doubles(ini.get("system", "c"), "[system] c");
      if (static_cast<int>(c.size()) != dim) throw ConfigError("[system] c: length != dim");
      rc.model.dyn = make_affine(std::move(A), std::move(c));
    } else {
      throw ConfigError("[system] name: unknown system '" + rc.name + "'");
    }
    const auto groups = split_groups(ini.get("system", "input_grid"));
    if (static_cast<int>(groups.size()) != dim)
      throw ConfigError("[system] input_grid: need one value list per dim");
    std::vector<std::vector<double>> per_dim;
    for (const auto& gtx : groups) per_dim.push_back(parse_doubles(gtx, "[system] input_grid"));
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    for (;;) {  // cartesian product, last dimension fastest
      Vec u(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) u[static_cast<std::size_t>(i)] = per_dim[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      rc.model.inputs.push_back(std::move(u));
      int d = dim - 1;
      while (d >= 0) {
        if (++idx[static_cast<std::size_t>(d)] < per_dim[static_cast<std::size_t>(d)].size()) break;
        idx[static_cast<std::size_t>(d)] = 0;
        --d;
      }
      if (d < 0) break;
    }
    const auto bnd = ini.get_or("system", "boundary", "saturate");
    if (bnd == "saturate") rc.model.boundary = BoundaryMode::saturate;
    else if (bnd == "sink") rc.model.boundary = BoundaryMode::sink;
    else throw ConfigError("[system] boundary: expected saturate or sink");
    rc.model.validate();

    // ---- grid ---------------------------------------------------------------
    Vec eta;
    if (ov.eta) {
      eta.assign(static_cast<std::size_t>(dim), *ov.eta);
    } else {
      eta = parse_doubles(ini.get("grid", "eta"), "[grid] eta");
      if (eta.size() == 1) eta.assign(static_cast<std::size_t>(dim), eta[0]);
      if (static_cast<int>(eta.size()) != dim)
        throw ConfigError("[grid] eta: give one value or one per dim");
    }
    rc.grid = Grid(rc.model.domain, eta);

    // ---- spec ---------------------------------------------------------------
    const auto spec_sec = ini.sections.find("spec");
    if (spec_sec == ini.sections.end()) throw ConfigError("missing section [spec]");
    for (const auto& [key, value] : spec_sec->second) {
      if (key.rfind("predicate.", 0) != 0) continue;
      const auto name = key.substr(10);
      if (name.empty()) throw ConfigError("[spec] predicate with empty name");
      std::vector<Box> boxes;
      for (const auto& gtx : split_groups(value))
        boxes.push_back(parse_box_interleaved(gtx, dim, "[spec] " + key));
      rc.preds.names.push_back(name);
      rc.preds.regions.push_back(std::move(boxes));
    }
    std::string aut_path = ov.spec ? *ov.spec : ini.get("spec", "automaton");
    if (!aut_path.empty() && aut_path.front() != '/' && !ov.spec)
      aut_path = dir_of(path) + "/" + aut_path;
    rc.automaton_path = aut_path;
    rc.aut = load_automaton(aut_path);
    for (const auto& a : rc.aut.alphabet)
      if (rc.preds.index_of(a) < 0)
        throw ConfigError("automaton predicate '" + a + "' has no [spec] predicate." + a);
    check_predicate_alignment(rc.preds, rc.grid);

    // ---- solve / sim / output ----------------------------------------------
    const auto mode = ov.mode ? *ov.mode : ini.get_or("solve", "mode", "both");
    if (mode == "both") {
      rc.solve_under = rc.solve_over = true;
    } else if (mode == "under") {
      rc.solve_under = true;
      rc.solve_over = false;
    } else if (mode == "over") {
      rc.solve_under = false;
      rc.solve_over = true;
    } else {
      throw ConfigError("mode: expected under, over or both");
    }
    rc.warm_start = parse_bool(ini.get_or("solve", "warm_start", "true"), "[solve] warm_start");
    rc.sim_runs = std::stoll(ini.get_or("sim", "runs", "0"));
    rc.horizon = std::stoll(ini.get_or("sim", "horizon", "10000"));
    rc.tail = std::stod(ini.get_or("sim", "tail", "0.2"));
    rc.seed = ov.seed ? *ov.seed : static_cast<std::uint64_t>(std::stoull(ini.get_or("sim", "seed", "0")));
    if (rc.tail <= 0 || rc.tail > 1) throw ConfigError("[sim] tail: expected a fraction in (0,1]");
    if (rc.horizon < 1) throw ConfigError("[sim] horizon: must be positive");
    rc.out_dir = ov.out ? *ov.out : ini.get_or("output", "dir", "out");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return rc;
}

}  // namespace synth
