/* product.hpp
 * Lazy product of a grid abstraction with a deterministic parity automaton.
 * Product states are q-major: s = q*C + cell; in sink boundary mode one extra
 * state Q*C models left-the-domain (priority 1, absorbing in both rows, i.e.
 * losing under either approximation). Successor rows are synthesized on the
 * fly from the base CSR rows: the automaton reads the predicate letter of the
 * SUCCESSOR cell, so (q, c) --u--> (delta(q, letter(c')), c') for each base
 * successor c'. The map c' -> product successor is injective per row, so the
 * under row stays a subset of the over row and over\under mirrors the base
 * rows. Nothing is materialized; the solver's row walks read straight from
 * the abstraction tables.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "automaton.hpp"
#include "reach.hpp"

namespace synth {

class ProductView {
 public:
  ProductView(const Abstraction& abs, const ParityAutomaton& aut, std::vector<Letter> cell_letters)
      : abs_(&abs), aut_(&aut), letters_(std::move(cell_letters)) {
    C_ = static_cast<int>(abs.grid.num_cells());
    Q_ = aut.num_states();
    m_ = abs.num_inputs;
    if (static_cast<CellId>(letters_.size()) != abs.grid.num_cells())
      throw std::invalid_argument("product: one letter per cell required");
    if (Q_ < 1 || C_ < 1 || m_ < 1) throw std::invalid_argument("product: empty factor");
    sink_ = (abs.boundary == BoundaryMode::sink);
    const long long total = static_cast<long long>(Q_) * C_ + (sink_ ? 1 : 0);
    if (total > (1LL << 30)) throw std::invalid_argument("product: state space too large");
    total_ = static_cast<int>(total);
    const std::size_t nl = std::size_t{1} << aut.alphabet.size();
    if (aut.alphabet.size() > 20) throw std::invalid_argument("product: alphabet too wide");
    delta_.assign(static_cast<std::size_t>(Q_), std::vector<int>(nl, -1));
    for (Letter l : letters_) {
      for (int q = 0; q < Q_; ++q) {
        if (delta_[static_cast<std::size_t>(q)][l] < 0)
          delta_[static_cast<std::size_t>(q)][l] = aut.step(q, l);
      }
    }
  }

  int num_states() const { return total_; }
  int num_inputs() const { return m_; }
  int num_cells() const { return C_; }
  bool has_sink() const { return sink_; }
  int sink_state() const { return sink_ ? Q_ * C_ : -1; }
  int compose(int q, int c) const { return q * C_ + c; }
  int cell_of(int s) const { return s % C_; }
  int aut_of(int s) const { return s / C_; }
  Letter letter(int c) const { return letters_[static_cast<std::size_t>(c)]; }
  const std::vector<Letter>& letters() const { return letters_; }
  const Abstraction& abstraction() const { return *abs_; }
  const ParityAutomaton& automaton() const { return *aut_; }

  // automaton state after reading cell c's letter from state q
  int advance(int q, int c) const { return delta_[static_cast<std::size_t>(q)][letters_[static_cast<std::size_t>(c)]]; }
  // automaton state owning the first step from initial-state trajectories in c
  int initial_aut(int c) const { return advance(aut_->initial, c); }

  int priority(int s) const {
    if (sink_ && s == Q_ * C_) return 1;
    return aut_->priority[static_cast<std::size_t>(s / C_)];
  }

  bool under_empty(int s, int u) const {
    if (sink_ && s == Q_ * C_) return false;
    const auto r = abs_->row(s % C_, u);
    return abs_->under_size(r) == 0 && !(sink_ && abs_->sink_under(r));
  }

  template <class F>
  bool for_each_over(int s, int u, F f) const {
    if (sink_ && s == Q_ * C_) return f(s);
    const int q = s / C_, c = s % C_;
    const auto r = abs_->row(c, u);
    const int* d = delta_[static_cast<std::size_t>(q)].data();
    for (auto it = abs_->over_begin(r); it != abs_->over_end(r); ++it) {
      if (!f(d[letters_[static_cast<std::size_t>(*it)]] * C_ + *it)) return false;
    }
    if (sink_ && abs_->sink_over(r) && !f(Q_ * C_)) return false;
    return true;
  }

  template <class F>
  bool for_each_under(int s, int u, F f) const {
    if (sink_ && s == Q_ * C_) return f(s);
    const int q = s / C_, c = s % C_;
    const auto r = abs_->row(c, u);
    const int* d = delta_[static_cast<std::size_t>(q)].data();
    for (auto it = abs_->under_begin(r); it != abs_->under_end(r); ++it) {
      if (!f(d[letters_[static_cast<std::size_t>(*it)]] * C_ + *it)) return false;
    }
    if (sink_ && abs_->sink_under(r) && !f(Q_ * C_)) return false;
    return true;
  }

  template <class F>
  bool for_each_over_not_under(int s, int u, F f) const {
    if (sink_ && s == Q_ * C_) return true;  // over == under == {sink}
    const int q = s / C_, c = s % C_;
    const auto r = abs_->row(c, u);
    const int* d = delta_[static_cast<std::size_t>(q)].data();
    const std::int32_t* ub = abs_->under_begin(r);
    const std::int32_t* ue = abs_->under_end(r);
    for (auto it = abs_->over_begin(r); it != abs_->over_end(r); ++it) {
      while (ub != ue && *ub < *it) ++ub;
      if (ub != ue && *ub == *it) continue;
      if (!f(d[letters_[static_cast<std::size_t>(*it)]] * C_ + *it)) return false;
    }
    if (sink_ && abs_->sink_over(r) && !abs_->sink_under(r) && !f(Q_ * C_)) return false;
    return true;
  }

  // f(s, u) for every product row whose over set contains x. Built from the
  // grid-level reverse adjacency and the automaton's per-letter preimages, so
  // the index costs O(base CSR) instead of O(product CSR).
  template <class F>
  void for_each_pred(int x, F f) const {
    if (!rev_built_) build_reverse();
    if (sink_ && x == Q_ * C_) {
      for (auto cu : sink_preds_) {
        const int c = cu / m_, u = cu % m_;
        for (int q = 0; q < Q_; ++q) f(q * C_ + c, u);
      }
      for (int u = 0; u < m_; ++u) f(x, u);  // the sink's own absorbing rows
      return;
    }
    const int cp = x % C_;
    const auto& ql = qpre_[letters_[static_cast<std::size_t>(cp)]][static_cast<std::size_t>(x / C_)];
    if (ql.empty()) return;
    for (int u = 0; u < m_; ++u) {
      const auto& off = rev_off_[static_cast<std::size_t>(u)];
      const auto& dat = rev_dat_[static_cast<std::size_t>(u)];
      for (auto i = off[static_cast<std::size_t>(cp)]; i != off[static_cast<std::size_t>(cp) + 1];
           ++i) {
        const int c = dat[static_cast<std::size_t>(i)];
        for (int q : ql) f(q * C_ + c, u);
      }
    }
  }

 private:
  const Abstraction* abs_;
  const ParityAutomaton* aut_;
  std::vector<Letter> letters_;
  std::vector<std::vector<int>> delta_;
  int C_ = 0, Q_ = 0, m_ = 0, total_ = 0;
  bool sink_ = false;

  mutable bool rev_built_ = false;
  mutable std::vector<std::vector<std::int64_t>> rev_off_;  // per input: cell -> range
  mutable std::vector<std::vector<std::int32_t>> rev_dat_;  // per input: source cells
  mutable std::vector<std::vector<std::vector<int>>> qpre_;  // per letter, per q': {q}
  mutable std::vector<int> sink_preds_;                      // packed c*m+u with sink in over

  void build_reverse() const {
    rev_off_.assign(static_cast<std::size_t>(m_),
                    std::vector<std::int64_t>(static_cast<std::size_t>(C_) + 1, 0));
    rev_dat_.assign(static_cast<std::size_t>(m_), {});
    sink_preds_.clear();
    for (int u = 0; u < m_; ++u) {
      auto& off = rev_off_[static_cast<std::size_t>(u)];
      for (int c = 0; c < C_; ++c) {
        const auto r = abs_->row(c, u);
        for (auto it = abs_->over_begin(r); it != abs_->over_end(r); ++it)
          ++off[static_cast<std::size_t>(*it) + 1];
        if (sink_ && abs_->sink_over(r)) sink_preds_.push_back(c * m_ + u);
      }
      for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
      auto& dat = rev_dat_[static_cast<std::size_t>(u)];
      dat.resize(static_cast<std::size_t>(off.back()));
      std::vector<std::int64_t> at(off.begin(), off.end() - 1);
      for (int c = 0; c < C_; ++c) {
        const auto r = abs_->row(c, u);
        for (auto it = abs_->over_begin(r); it != abs_->over_end(r); ++it)
          dat[static_cast<std::size_t>(at[static_cast<std::size_t>(*it)]++)] = c;
      }
    }
    const std::size_t nl = std::size_t{1} << aut_->alphabet.size();
    qpre_.assign(nl, {});
    for (Letter l : letters_) {
      auto& byq = qpre_[l];
      if (!byq.empty()) continue;
      byq.assign(static_cast<std::size_t>(Q_), {});
      for (int q = 0; q < Q_; ++q) {
        const int qn = delta_[static_cast<std::size_t>(q)][l];
        if (qn >= 0) byq[static_cast<std::size_t>(qn)].push_back(q);
      }
    }
    rev_built_ = true;
  }
};

}  // namespace synth
