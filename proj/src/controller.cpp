#include "synth/controller.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace synth {

int Controller::lookup(CellId c, int q) const {
  if (!defined(c, q))
    throw std::out_of_range("controller: no decision for cell " + std::to_string(c) +
                            ", automaton state " + std::to_string(q));
  return table[static_cast<std::size_t>(q) * static_cast<std::size_t>(num_cells) +
               static_cast<std::size_t>(c)];
}

std::size_t Controller::entries() const {
  std::size_t n = 0;
  for (auto v : table)
    if (v >= 0) ++n;
  return n;
}

Controller refine(const SolveResult& r, const ProductView& view) {
  if (r.mode != Mode::adversarial)
    throw std::invalid_argument(
        "refine: only adversarial winning regions refine into controllers");
  const Grid& g = view.abstraction().grid;
  Controller c;
  c.dim = g.dim();
  c.eta = g.eta();
  c.domain = g.domain();
  c.automaton_hash = view.automaton().hash();
  c.aut_states = view.automaton().num_states();
  c.initial = view.automaton().initial;
  c.num_inputs = view.num_inputs();
  c.num_cells = g.num_cells();
  c.table.assign(static_cast<std::size_t>(c.aut_states) * static_cast<std::size_t>(c.num_cells),
                 -1);
  const int base = view.num_cells() * view.automaton().num_states();
  r.winning.for_each([&](std::size_t s) {
    if (view.has_sink() && static_cast<int>(s) >= base) return;  // sink never wins anyway
    c.table[s] = r.strategy[s];  // product ids are q-major like the table
  });
  return c;
}

void save_controller(const Controller& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "controller v1\n";
  f << "dim " << c.dim << "\n";
  f << "eta";
  f << std::setprecision(17);
  for (auto e : c.eta) f << ' ' << e;
  f << "\ndomain";
  for (int i = 0; i < c.dim; ++i) f << ' ' << c.domain.lo[i] << ' ' << c.domain.hi[i];
  f << "\nautomaton " << std::hex << c.automaton_hash << std::dec << "\n";
  f << "aut_states " << c.aut_states << "\n";
  f << "initial " << c.initial << "\n";
  f << "inputs " << c.num_inputs << "\n";
  f << "entries " << c.entries() << "\n";
  Grid g(c.domain, c.eta);
  for (int q = 0; q < c.aut_states; ++q)
    for (CellId cell = 0; cell < c.num_cells; ++cell) {
      const auto v = c.table[static_cast<std::size_t>(q) * static_cast<std::size_t>(c.num_cells) +
                             static_cast<std::size_t>(cell)];
      if (v < 0) continue;
      for (auto k : g.unflatten(cell)) f << k << ' ';
      f << q << ' ' << v << "\n";
    }
  if (!f) throw std::runtime_error("write failed: " + path);
}

Controller load_controller(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  auto expect = [&](const std::string& tag) {
    std::string t;
    if (!(f >> t) || t != tag) throw std::runtime_error(path + ": expected '" + tag + "'");
  };
  expect("controller");
  expect("v1");
  Controller c;
  expect("dim");
  f >> c.dim;
  if (!f || c.dim < 1) throw std::runtime_error(path + ": bad dim");
  expect("eta");
  c.eta.resize(static_cast<std::size_t>(c.dim));
  for (auto& e : c.eta) f >> e;
  expect("domain");
  c.domain.lo.resize(static_cast<std::size_t>(c.dim));
  c.domain.hi.resize(static_cast<std::size_t>(c.dim));
  for (int i = 0; i < c.dim; ++i) f >> c.domain.lo[i] >> c.domain.hi[i];
  expect("automaton");
  f >> std::hex >> c.automaton_hash >> std::dec;
  expect("aut_states");
  f >> c.aut_states;
  expect("initial");
  f >> c.initial;
  expect("inputs");
  f >> c.num_inputs;
  expect("entries");
  std::size_t entries = 0;
  f >> entries;
  if (!f) throw std::runtime_error(path + ": truncated header");
  Grid g(c.domain, c.eta);
  c.num_cells = g.num_cells();
  c.table.assign(static_cast<std::size_t>(c.aut_states) * static_cast<std::size_t>(c.num_cells),
                 -1);
  std::vector<long long> idx(static_cast<std::size_t>(c.dim));
  for (std::size_t e = 0; e < entries; ++e) {
    for (auto& k : idx) f >> k;
    int q = 0, v = 0;
    f >> q >> v;
    if (!f) throw std::runtime_error(path + ": truncated entry");
    if (q < 0 || q >= c.aut_states || v < 0 || v >= c.num_inputs)
      throw std::runtime_error(path + ": entry out of range");
    const auto cell = g.flatten(idx);
    c.table[static_cast<std::size_t>(q) * static_cast<std::size_t>(c.num_cells) +
            static_cast<std::size_t>(cell)] = v;
  }
  return c;
}

}  // namespace synth
