#include "synth/reach.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace synth {
namespace {

constexpr double kTolCellUnits = 1e-9;  // grid-line snap tolerance, in cell widths

struct DimRange {
  long long lo = 0, hi = -1;  // inclusive; empty when hi < lo
};

// cells whose closed box overlaps [a,b] with positive length in this dimension
DimRange positive_overlap_range(double a, double b, double dom_lo, double eta, long long n) {
  DimRange r;
  const double lo_u = (a - dom_lo) / eta;
  const double hi_u = (b - dom_lo) / eta;
  if (hi_u - lo_u <= kTolCellUnits) return r;  // empty or zero-area touch
  long long i_min = static_cast<long long>(std::floor(lo_u + kTolCellUnits));
  long long i_max = static_cast<long long>(std::ceil(hi_u - kTolCellUnits)) - 1;
  if (i_min < 0) i_min = 0;
  if (i_max >= n) i_max = n - 1;
  if (i_max < i_min) return r;
  r.lo = i_min;
  r.hi = i_max;
  return r;
}

// quantize convention for a clamp-collapsed dimension
DimRange degenerate_range(double a, double dom_lo, double eta, long long n) {
  long long k = static_cast<long long>(std::floor((a - dom_lo) / eta + kTolCellUnits));
  if (k < 0) k = 0;
  if (k >= n) k = n - 1;
  return DimRange{k, k};
}

void enumerate(const Grid& g, const std::vector<DimRange>& ranges, std::vector<std::int32_t>& out) {
  const int d = g.dim();
  for (int i = 0; i < d; ++i)
    if (ranges[i].hi < ranges[i].lo) return;
  std::vector<long long> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = ranges[i].lo;
  for (;;) {
    out.push_back(static_cast<std::int32_t>(g.flatten(idx)));
    int i = d - 1;
    while (i >= 0) {
      if (++idx[i] <= ranges[i].hi) break;
      idx[i] = ranges[i].lo;
      --i;
    }
    if (i < 0) break;
  }
}

bool exits_domain(const Box& b, const Box& dom, const Vec& eta) {
  for (int i = 0; i < b.dim(); ++i) {
    const double atol = kTolCellUnits * eta[i];
    if (b.lo[i] < dom.lo[i] - atol || b.hi[i] > dom.hi[i] + atol) return true;
  }
  return false;
}

}  // namespace

CellPost overapprox_post(const SystemModel& m, const Grid& g, const Box& source, const Vec& u) {
  const Box r = reach_box(m, source, u);
  const Box s1 = minkowski_sum(m.noise, r);
  const Box& dom = g.domain();
  CellPost post;
  std::vector<DimRange> ranges(g.dim());
  if (m.boundary == BoundaryMode::saturate) {
    const Box c = dom.clamp(s1);
    for (int i = 0; i < g.dim(); ++i) {
      const double width_u = (c.hi[i] - c.lo[i]) / g.eta()[i];
      ranges[i] = width_u <= kTolCellUnits
                      ? degenerate_range(c.lo[i], dom.lo[i], g.eta()[i], g.cells_per_dim()[i])
                      : positive_overlap_range(c.lo[i], c.hi[i], dom.lo[i], g.eta()[i],
                                               g.cells_per_dim()[i]);
    }
    enumerate(g, ranges, post.cells);
  } else {
    if (exits_domain(s1, dom, g.eta())) post.sink = true;
    for (int i = 0; i < g.dim(); ++i)
      ranges[i] = positive_overlap_range(std::max(s1.lo[i], dom.lo[i]),
                                         std::min(s1.hi[i], dom.hi[i]), dom.lo[i], g.eta()[i],
                                         g.cells_per_dim()[i]);
    enumerate(g, ranges, post.cells);
    if (post.cells.empty() && !post.sink)
      throw std::logic_error("overapprox_post: empty post without sink");
  }
  if (m.boundary == BoundaryMode::saturate && post.cells.empty())
    throw std::logic_error("overapprox_post: empty post in saturate mode");
  return post;
}

CellPost underapprox_post(const SystemModel& m, const Grid& g, const Box& source, const Vec& u) {
  const Box r = reach_box(m, source, u);
  const Box s2 = minkowski_diff(m.noise, negate(r));
  CellPost post;
  if (s2.empty()) return post;
  const Box& dom = g.domain();
  std::vector<DimRange> ranges(g.dim());
  for (int i = 0; i < g.dim(); ++i)
    ranges[i] = positive_overlap_range(std::max(s2.lo[i], dom.lo[i]),
                                       std::min(s2.hi[i], dom.hi[i]), dom.lo[i], g.eta()[i],
                                       g.cells_per_dim()[i]);
  enumerate(g, ranges, post.cells);
  if (m.boundary == BoundaryMode::sink) {
    // positive measure escaping the domain: S2 must have positive volume and a
    // positive-width overhang in some dimension
    bool positive_volume = true;
    for (int i = 0; i < g.dim(); ++i) {
      const double atol = kTolCellUnits * g.eta()[i];
      if (s2.hi[i] - s2.lo[i] <= atol) positive_volume = false;
    }
    if (positive_volume && exits_domain(s2, dom, g.eta())) post.sink = true;
  }
  return post;
}

Abstraction build_abstraction(const SystemModel& m, const Grid& g) {
  m.validate();
  if (g.dim() != m.dim) throw std::invalid_argument("abstraction: grid dimension mismatch");
  Abstraction a;
  a.grid = g;
  a.num_inputs = static_cast<int>(m.inputs.size());
  a.boundary = m.boundary;
  const std::size_t rows = a.rows();
  a.over_off.reserve(rows + 1);
  a.under_off.reserve(rows + 1);
  a.over_off.push_back(0);
  a.under_off.push_back(0);
  a.sink_over_ = Bitset(rows);
  a.sink_under_ = Bitset(rows);
  for (CellId c = 0; c < g.num_cells(); ++c) {
    const Box cell = g.cell_box(c);
    for (int u = 0; u < a.num_inputs; ++u) {
      const std::size_t r = a.row(c, u);
      CellPost over = overapprox_post(m, g, cell, m.inputs[u]);
      CellPost under = underapprox_post(m, g, cell, m.inputs[u]);
      a.over_dat.insert(a.over_dat.end(), over.cells.begin(), over.cells.end());
      a.under_dat.insert(a.under_dat.end(), under.cells.begin(), under.cells.end());
      a.over_off.push_back(a.over_dat.size());
      a.under_off.push_back(a.under_dat.size());
      if (over.sink) a.sink_over_.set(r);
      if (under.sink) a.sink_under_.set(r);
      if (over.cells.empty() && !over.sink)
        throw std::logic_error("abstraction: dead row (no over successors, no sink)");
    }
  }
  return a;
}

void export_abstraction_csv(const Abstraction& a, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "cell_id,input_idx,kind,successor_id\n";
  for (CellId c = 0; c < a.grid.num_cells(); ++c) {
    for (int u = 0; u < a.num_inputs; ++u) {
      const std::size_t r = a.row(c, u);
      for (auto it = a.over_begin(r); it != a.over_end(r); ++it)
        f << c << ',' << u << ",over," << *it << '\n';
      for (auto it = a.under_begin(r); it != a.under_end(r); ++it)
        f << c << ',' << u << ",under," << *it << '\n';
      if (a.sink_over(r)) f << c << ',' << u << ",sink,0\n";
      if (a.sink_under(r)) f << c << ',' << u << ",sink,1\n";
    }
  }
}

Abstraction import_abstraction_csv(const Grid& g, int num_inputs, BoundaryMode boundary,
                                   const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  const std::size_t rows = static_cast<std::size_t>(g.num_cells()) * num_inputs;
  std::vector<std::vector<std::int32_t>> over(rows), under(rows);
  Bitset sink_over(rows), sink_under(rows);
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell_s, input_s, kind, succ_s;
    if (!std::getline(ls, cell_s, ',') || !std::getline(ls, input_s, ',') ||
        !std::getline(ls, kind, ',') || !std::getline(ls, succ_s, ','))
      throw std::runtime_error("abstraction csv: malformed line: " + line);
    const std::size_t r = static_cast<std::size_t>(std::stoll(cell_s)) * num_inputs +
                          std::stoi(input_s);
    if (r >= rows) throw std::runtime_error("abstraction csv: row out of range");
    const std::int32_t succ = static_cast<std::int32_t>(std::stol(succ_s));
    if (kind == "over")
      over[r].push_back(succ);
    else if (kind == "under")
      under[r].push_back(succ);
    else if (kind == "sink")
      (succ == 0 ? sink_over : sink_under).set(r);
    else
      throw std::runtime_error("abstraction csv: unknown kind " + kind);
  }
  Abstraction a;
  a.grid = g;
  a.num_inputs = num_inputs;
  a.boundary = boundary;
  a.over_off.push_back(0);
  a.under_off.push_back(0);
  for (std::size_t r = 0; r < rows; ++r) {
    a.over_dat.insert(a.over_dat.end(), over[r].begin(), over[r].end());
    a.under_dat.insert(a.under_dat.end(), under[r].begin(), under[r].end());
    a.over_off.push_back(a.over_dat.size());
    a.under_off.push_back(a.under_dat.size());
  }
  a.sink_over_ = std::move(sink_over);
  a.sink_under_ = std::move(sink_under);
  return a;
}

}  // namespace synth
