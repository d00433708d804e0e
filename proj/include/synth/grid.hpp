/* grid.hpp
 * Uniform grid partition of a box domain into half-open cells (the cell touching
 * the domain's upper face is closed). Cell ids are row-major flattenings of the
 * integer multi-index; all grid arithmetic happens in multi-indices so identical
 * runs produce identical cell sets.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace synth {

using CellId = std::int64_t;

class Grid {
public:
  Grid() = default;
  Grid(Box domain, Vec eta) : domain_(std::move(domain)), eta_(std::move(eta)) {
    const int d = domain_.dim();
    if (d == 0) throw std::invalid_argument("grid: empty domain");
    if (static_cast<int>(eta_.size()) != d) throw std::invalid_argument("grid: eta dim mismatch");
    if (!domain_.nondegenerate()) throw std::invalid_argument("grid: degenerate domain");
    n_.resize(d);
    CellId total = 1;
    for (int i = 0; i < d; ++i) {
      if (eta_[i] <= 0) throw std::invalid_argument("grid: eta must be positive");
      const double width = domain_.width(i);
      const double cells = width / eta_[i];
      const long long n = std::llround(cells);
      if (n < 1 || std::fabs(n * eta_[i] - width) > 1e-9 * std::max(1.0, width))
        throw std::invalid_argument("grid: eta does not evenly divide domain width in dim " +
                                    std::to_string(i));
      n_[i] = n;
      total *= n;
    }
    num_cells_ = total;
  }

  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  const Vec& eta() const { return eta_; }
  const std::vector<long long>& cells_per_dim() const { return n_; }
  CellId num_cells() const { return num_cells_; }

  // multi-index <-> flat id, row-major (last dimension fastest)
  CellId flatten(const std::vector<long long>& idx) const {
    CellId id = 0;
    for (int i = 0; i < dim(); ++i) {
      if (idx[i] < 0 || idx[i] >= n_[i]) throw std::out_of_range("grid: index out of range");
      id = id * n_[i] + idx[i];
    }
    return id;
  }
  std::vector<long long> unflatten(CellId id) const {
    if (id < 0 || id >= num_cells_) throw std::out_of_range("grid: cell id out of range");
    std::vector<long long> idx(dim());
    for (int i = dim() - 1; i >= 0; --i) {
      idx[i] = id % n_[i];
      id /= n_[i];
    }
    return idx;
  }

  // half-open quantization; the domain's upper face belongs to the last cell
  CellId quantize(const Vec& s) const {
    if (!domain_.contains(s)) throw std::out_of_range("grid: state outside domain");
    std::vector<long long> idx(dim());
    for (int i = 0; i < dim(); ++i) {
      long long k = static_cast<long long>(std::floor((s[i] - domain_.lo[i]) / eta_[i]));
      if (k < 0) k = 0;
      if (k >= n_[i]) k = n_[i] - 1;
      idx[i] = k;
    }
    return flatten(idx);
  }

  // closed box of a cell; the top cell's upper bound is the exact domain bound
  Box cell_box(CellId id) const {
    auto idx = unflatten(id);
    Vec lo(dim()), hi(dim());
    for (int i = 0; i < dim(); ++i) {
      lo[i] = domain_.lo[i] + idx[i] * eta_[i];
      hi[i] = (idx[i] + 1 == n_[i]) ? domain_.hi[i] : domain_.lo[i] + (idx[i] + 1) * eta_[i];
    }
    return Box(std::move(lo), std::move(hi));
  }

  Vec cell_center(CellId id) const { return cell_box(id).center(); }

private:
  Box domain_;
  Vec eta_;
  std::vector<long long> n_;
  CellId num_cells_ = 0;
};

}  // namespace synth
