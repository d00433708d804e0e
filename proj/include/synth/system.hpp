/* system.hpp
 * Discrete-time stochastic system  s' = f(s,u) + d,  d in a box noise support.
 * A Dynamics couples the nominal map with its interval extension; the extension
 * must be sound (image of any box under f lies inside the extension of the box)
 * and inclusion-monotone. Built-in: the two-gene bistable switch benchmark.
 */
#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace synth {

struct Dynamics {
  std::string name;
  std::function<Vec(const Vec&, const Vec&)> map;        // nominal f(s,u)
  std::function<Box(const Box&, const Vec&)> interval;   // interval extension of f
};

enum class BoundaryMode { saturate, sink };

struct SystemModel {
  int dim = 0;
  Dynamics dyn;
  Box noise;                    // disturbance support D (box; may be a point)
  std::vector<Vec> inputs;      // finite input set, duplicate-free
  Box domain;                   // state domain S' (non-degenerate)
  BoundaryMode boundary = BoundaryMode::saturate;

  void validate() const {
    if (dim <= 0) throw std::invalid_argument("system: dimension must be positive");
    if (domain.dim() != dim || noise.dim() != dim)
      throw std::invalid_argument("system: box dimension mismatch");
    if (!domain.nondegenerate()) throw std::invalid_argument("system: degenerate domain");
    for (int i = 0; i < dim; ++i)
      if (noise.lo[i] > noise.hi[i]) throw std::invalid_argument("system: invalid noise support");
    if (inputs.empty()) throw std::invalid_argument("system: input set empty");
    for (const auto& u : inputs) {
      if (static_cast<int>(u.size()) != dim)
        throw std::invalid_argument("system: input dimension mismatch");
      for (const auto& v : inputs)
        if (&u != &v && u == v) throw std::invalid_argument("system: duplicate input");
    }
    if (!dyn.map || !dyn.interval) throw std::invalid_argument("system: dynamics not set");
  }

  // raw nominal map, unclamped
  Vec raw(const Vec& s, const Vec& u) const { return dyn.map(s, u); }

  // nominal map respecting the boundary mode
  Vec eval(const Vec& s, const Vec& u) const {
    Vec r = dyn.map(s, u);
    if (boundary == BoundaryMode::saturate) r = domain.clamp(r);
    return r;
  }
};

// s1' = s1 + (-a*s1 + s2)*tau + u1
// s2' = s2 + (s1^2/(s1^2+1) - b*s2)*tau + u2
// The interval extension evaluates the factored form (each variable once per
// coordinate, Hill term monotone), so boxes stay tight.
inline Dynamics make_bistable_switch(double a, double b, double tau) {
  Dynamics d;
  d.name = "bistable_switch";
  d.map = [a, b, tau](const Vec& s, const Vec& u) {
    const double hill = s[0] * s[0] / (s[0] * s[0] + 1.0);
    return Vec{s[0] * (1.0 - a * tau) + s[1] * tau + u[0],
               s[1] * (1.0 - b * tau) + hill * tau + u[1]};
  };
  d.interval = [a, b, tau](const Box& x, const Vec& u) {
    const double c1 = 1.0 - a * tau;  // positive for the benchmark parameters
    const double c2 = 1.0 - b * tau;
    auto mul = [](double c, double lo, double hi) {
      return c >= 0 ? std::pair<double, double>{c * lo, c * hi}
                    : std::pair<double, double>{c * hi, c * lo};
    };
    auto [l1a, h1a] = mul(c1, x.lo[0], x.hi[0]);
    // natural extension of s1^2/(s1^2+1): q = sq/(sq+1) with sq = [s1^2]
    const double m0 = std::min(std::abs(x.lo[0]), std::abs(x.hi[0]));
    const double sq_lo = (x.lo[0] <= 0.0 && x.hi[0] >= 0.0) ? 0.0 : m0 * m0;
    const double m1 = std::max(std::abs(x.lo[0]), std::abs(x.hi[0]));
    const double sq_hi = m1 * m1;
    const double q_lo = sq_lo / (sq_hi + 1.0);
    const double q_hi = sq_hi / (sq_lo + 1.0);
    auto [l2a, h2a] = mul(c2, x.lo[1], x.hi[1]);
    return Box{{l1a + tau * x.lo[1] + u[0], l2a + tau * q_lo + u[1]},
               {h1a + tau * x.hi[1] + u[0], h2a + tau * q_hi + u[1]}};
  };
  return d;
}

// affine toy map s' = A s + c + u with the exact (mid/rad) interval image;
// used by tests and by synthetic benchmarks
inline Dynamics make_affine(std::vector<Vec> A, Vec c) {
  Dynamics d;
  d.name = "affine";
  d.map = [A, c](const Vec& s, const Vec& u) {
    const int n = static_cast<int>(c.size());
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      double acc = c[i] + u[i];
      for (int j = 0; j < n; ++j) acc += A[i][j] * s[j];
      r[i] = acc;
    }
    return r;
  };
  d.interval = [A, c](const Box& x, const Vec& u) {
    const int n = static_cast<int>(c.size());
    Vec lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      double l = c[i] + u[i], h = c[i] + u[i];
      for (int j = 0; j < n; ++j) {
        if (A[i][j] >= 0) {
          l += A[i][j] * x.lo[j];
          h += A[i][j] * x.hi[j];
        } else {
          l += A[i][j] * x.hi[j];
          h += A[i][j] * x.lo[j];
        }
      }
      lo[i] = l;
      hi[i] = h;
    }
    return Box{lo, hi};
  };
  return d;
}

}  // namespace synth
