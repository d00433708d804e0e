/* game.hpp
 * The abstraction induces a 2.5-player game: V0 = states, V1 = state x input,
 * and per (s,u) the random-vertex family Vr(s,u) = supports w between the
 * under- and over-approximation rows, |w| <= |under|+1 (singletons from the
 * over row when the under row is empty).
 *
 * Solvers never materialize V1/Vr: combined_cpre / combined_apre collapse the
 * three explicit steps (V0 -> V1 -> Vr -> V0) into one V0-level operator. The
 * explicit game and explicit operators exist for oracle cross-checks; the
 * combined operators are exactly cpre(cpre(cpre(.))) resp. cpre(cpre(apre(.)))
 * restricted to V0, for arbitrary argument sets.
 *
 * Any "support game" type G works with the templated operators; it must offer:
 *   int num_states() / num_inputs();
 *   bool under_empty(s,u);
 *   for_each_over / for_each_under / for_each_over_not_under(s, u, f)
 *     where f(int successor) -> bool (false aborts); each returns false when
 *     aborted by f.
 */
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitset.hpp"

namespace synth {

enum class Mode { adversarial, cooperative };

// thrown when a solver-internal invariant breaks (CLI maps this to exit 3)
struct SolverAssertion : std::logic_error {
  explicit SolverAssertion(const std::string& what) : std::logic_error(what) {}
};

// plain in-memory support game used by tests, oracles and random instances
struct SupportTable {
  int n = 0, m = 0;
  std::vector<std::vector<std::int32_t>> over, under;  // [s*m+u], sorted ascending
  std::vector<int> prio;                               // per state, >= 1

  SupportTable() = default;
  SupportTable(int states, int inputs)
      : n(states), m(inputs), over(static_cast<std::size_t>(states) * inputs),
        under(static_cast<std::size_t>(states) * inputs), prio(states, 1) {}

  std::size_t row(int s, int u) const { return static_cast<std::size_t>(s) * m + u; }
  int num_states() const { return n; }
  int num_inputs() const { return m; }
  int priority(int s) const { return prio[s]; }
  bool under_empty(int s, int u) const { return under[row(s, u)].empty(); }

  template <class F>
  bool for_each_over(int s, int u, F f) const {
    for (auto x : over[row(s, u)])
      if (!f(static_cast<int>(x))) return false;
    return true;
  }
  template <class F>
  bool for_each_under(int s, int u, F f) const {
    for (auto x : under[row(s, u)])
      if (!f(static_cast<int>(x))) return false;
    return true;
  }
  template <class F>
  bool for_each_over_not_under(int s, int u, F f) const {
    const auto& o = over[row(s, u)];
    const auto& un = under[row(s, u)];
    std::size_t j = 0;
    for (auto x : o) {
      while (j < un.size() && un[j] < x) ++j;
      if (j < un.size() && un[j] == x) continue;
      if (!f(static_cast<int>(x))) return false;
    }
    return true;
  }

  // f(s, u) for every row whose over set contains x (lazily built reverse CSR)
  template <class F>
  void for_each_pred(int x, F f) const {
    if (!rev_built_) build_reverse();
    for (auto i = rev_off_[static_cast<std::size_t>(x)];
         i != rev_off_[static_cast<std::size_t>(x) + 1]; ++i) {
      const auto su = rev_dat_[static_cast<std::size_t>(i)];
      f(static_cast<int>(su) / m, static_cast<int>(su) % m);
    }
  }

  void validate() const {
    for (int s = 0; s < n; ++s)
      for (int u = 0; u < m; ++u) {
        const auto& o = over[row(s, u)];
        const auto& un = under[row(s, u)];
        if (o.empty()) throw std::invalid_argument("support table: dead vertex");
        std::size_t j = 0;
        for (auto x : un) {
          while (j < o.size() && o[j] < x) ++j;
          if (j == o.size() || o[j] != x)
            throw std::invalid_argument("support table: under not a subset of over");
        }
      }
  }

 private:
  mutable bool rev_built_ = false;
  mutable std::vector<std::int64_t> rev_off_;
  mutable std::vector<std::int32_t> rev_dat_;

  void build_reverse() const {
    rev_off_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& r : over)
      for (auto x : r) ++rev_off_[static_cast<std::size_t>(x) + 1];
    for (std::size_t i = 1; i < rev_off_.size(); ++i) rev_off_[i] += rev_off_[i - 1];
    rev_dat_.resize(static_cast<std::size_t>(rev_off_.back()));
    std::vector<std::int64_t> at(rev_off_.begin(), rev_off_.end() - 1);
    for (std::size_t r = 0; r < over.size(); ++r)
      for (auto x : over[r])
        rev_dat_[static_cast<std::size_t>(at[static_cast<std::size_t>(x)]++)] =
            static_cast<std::int32_t>(r);
    rev_built_ = true;
  }
};

// ---- combined one-shot operators (exact V0-level composition) --------------

template <class G>
inline bool combined_cpre_hit(const G& g, const Bitset& Y, int s, Mode mode,
                              int* witness = nullptr) {
  for (int u = 0; u < g.num_inputs(); ++u) {
    bool ok;
    if (mode == Mode::adversarial) {
      bool any = false;
      ok = g.for_each_over(s, u, [&](int x) {
        any = true;
        return Y.test(static_cast<std::size_t>(x));
      });
      ok = ok && any;
    } else {
      if (!g.under_empty(s, u)) {
        ok = g.for_each_under(s, u, [&](int x) { return Y.test(static_cast<std::size_t>(x)); });
      } else {
        ok = !g.for_each_over(s, u, [&](int x) { return !Y.test(static_cast<std::size_t>(x)); });
      }
    }
    if (ok) {
      if (witness) *witness = u;
      return true;
    }
  }
  return false;
}

// membership of s in cpre(cpre(apre(Y,Z)))|V0 for arbitrary Y, Z. Per random
// vertex w in Vr(s,u), P(w) := (w subset Z) or (w subset Y and w meets Z);
// adversarial needs P for all w, cooperative for some w.
template <class G>
inline bool combined_apre_hit(const G& g, const Bitset& Y, const Bitset& Z, int s, Mode mode,
                              int* witness = nullptr) {
  for (int u = 0; u < g.num_inputs(); ++u) {
    bool ok;
    if (!g.under_empty(s, u)) {
      bool aZ = true, bY = true, cZ = false;
      g.for_each_under(s, u, [&](int x) {
        const auto xi = static_cast<std::size_t>(x);
        aZ = aZ && Z.test(xi);
        bY = bY && Y.test(xi);
        cZ = cZ || Z.test(xi);
        return true;
      });
      const bool base = aZ || (bY && cZ);
      auto ext_ok = [&](int x) {
        const auto xi = static_cast<std::size_t>(x);
        return (aZ && Z.test(xi)) || (bY && Y.test(xi) && (cZ || Z.test(xi)));
      };
      if (mode == Mode::adversarial) {
        ok = base && g.for_each_over_not_under(s, u, [&](int x) { return ext_ok(x); });
      } else {
        ok = base || !g.for_each_over_not_under(s, u, [&](int x) { return !ext_ok(x); });
      }
    } else {
      if (mode == Mode::adversarial) {
        bool any = false;
        ok = g.for_each_over(s, u, [&](int x) {
          any = true;
          return Z.test(static_cast<std::size_t>(x));
        });
        ok = ok && any;
      } else {
        ok = !g.for_each_over(s, u, [&](int x) { return !Z.test(static_cast<std::size_t>(x)); });
      }
    }
    if (ok) {
      if (witness) *witness = u;
      return true;
    }
  }
  return false;
}

template <class G>
inline Bitset combined_cpre(const G& g, const Bitset& Y, Mode mode) {
  Bitset out(static_cast<std::size_t>(g.num_states()));
  for (int s = 0; s < g.num_states(); ++s)
    if (combined_cpre_hit(g, Y, s, mode)) out.set(static_cast<std::size_t>(s));
  return out;
}

template <class G>
inline Bitset combined_apre(const G& g, const Bitset& Y, const Bitset& Z, Mode mode) {
  Bitset out(static_cast<std::size_t>(g.num_states()));
  for (int s = 0; s < g.num_states(); ++s)
    if (combined_apre_hit(g, Y, Z, s, mode)) out.set(static_cast<std::size_t>(s));
  return out;
}

// ---- explicit game (oracle machinery) ---------------------------------------

struct ExplicitGame {
  int n0 = 0, n1 = 0, nr = 0, num_inputs = 0;
  // vertex ids: V0 = [0,n0), V1 = [n0,n0+n1) with id n0 + s*m + u, Vr the rest
  std::vector<std::vector<std::int32_t>> succ;
  std::vector<int> prio;                          // V0 only (size n0)
  std::vector<std::vector<std::int32_t>> vr_of;   // per V1 local idx: vr vertex ids

  int total() const { return n0 + n1 + nr; }
  bool is_v0(int v) const { return v < n0; }
  bool is_v1(int v) const { return v >= n0 && v < n0 + n1; }
  bool is_vr(int v) const { return v >= n0 + n1; }
  int v1_id(int s, int u) const { return n0 + s * num_inputs + u; }

  std::string dump() const;
};

template <class G>
ExplicitGame build_explicit_game(const G& g) {
  ExplicitGame e;
  e.n0 = g.num_states();
  e.num_inputs = g.num_inputs();
  e.n1 = e.n0 * e.num_inputs;
  e.prio.resize(e.n0);
  for (int s = 0; s < e.n0; ++s) e.prio[s] = g.priority(s);
  e.succ.assign(static_cast<std::size_t>(e.n0 + e.n1), {});
  e.vr_of.assign(static_cast<std::size_t>(e.n1), {});
  std::map<std::vector<std::int32_t>, std::int32_t> vr_ids;
  std::vector<std::vector<std::int32_t>> vr_members;
  auto vr_id = [&](std::vector<std::int32_t> members) {
    auto it = vr_ids.find(members);
    if (it != vr_ids.end()) return it->second;
    const auto id = static_cast<std::int32_t>(vr_members.size());
    vr_ids.emplace(members, id);
    vr_members.push_back(std::move(members));
    return id;
  };
  for (int s = 0; s < e.n0; ++s) {
    for (int u = 0; u < e.num_inputs; ++u) {
      e.succ[s].push_back(static_cast<std::int32_t>(e.v1_id(s, u)));
      std::vector<std::int32_t> base;
      g.for_each_under(s, u, [&](int x) {
        base.push_back(static_cast<std::int32_t>(x));
        return true;
      });
      std::vector<std::int32_t>& vrs = e.vr_of[static_cast<std::size_t>(s) * e.num_inputs + u];
      if (base.empty()) {
        g.for_each_over(s, u, [&](int x) {
          vrs.push_back(vr_id({static_cast<std::int32_t>(x)}));
          return true;
        });
      } else {
        vrs.push_back(vr_id(base));
        g.for_each_over_not_under(s, u, [&](int x) {
          std::vector<std::int32_t> w = base;
          w.insert(std::lower_bound(w.begin(), w.end(), static_cast<std::int32_t>(x)),
                   static_cast<std::int32_t>(x));
          vrs.push_back(vr_id(std::move(w)));
          return true;
        });
      }
      if (vrs.empty()) throw std::invalid_argument("explicit game: dead V1 vertex");
    }
  }
  e.nr = static_cast<int>(vr_members.size());
  const int base_id = e.n0 + e.n1;
  e.succ.resize(static_cast<std::size_t>(e.total()));
  for (int r = 0; r < e.nr; ++r) e.succ[static_cast<std::size_t>(base_id + r)] = vr_members[r];
  for (auto& vrs : e.vr_of)
    for (auto& id : vrs) id += base_id;
  for (int s = 0; s < e.n0; ++s)
    for (int u = 0; u < e.num_inputs; ++u) {
      const auto& vrs = e.vr_of[static_cast<std::size_t>(s) * e.num_inputs + u];
      auto& out = e.succ[static_cast<std::size_t>(e.v1_id(s, u))];
      out.assign(vrs.begin(), vrs.end());
    }
  return e;
}

// one-step controllable predecessors on the explicit graph
Bitset explicit_cpre(const ExplicitGame& g, const Bitset& S, Mode mode);
// Apre(S,T) = Cpre(T) union {vr | E(vr) subset S and E(vr) meets T}
Bitset explicit_apre(const ExplicitGame& g, const Bitset& S, const Bitset& T, Mode mode);

// embeds a V0 state set into the full vertex space
Bitset embed_v0(const ExplicitGame& g, const Bitset& v0_set);
Bitset restrict_v0(const ExplicitGame& g, const Bitset& full_set);

}  // namespace synth
