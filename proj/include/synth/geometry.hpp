/* geometry.hpp
 * Axis-aligned boxes and the Minkowski arithmetic used by the transition
 * over-/under-approximations:
 *   sum:  [a.lo+b.lo, a.hi+b.hi]
 *   diff: {y | y + b subset a} = [a.lo-b.lo, a.hi-b.hi], empty if any lo > hi
 */
#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace synth {

using Vec = std::vector<double>;

struct Box {
  Vec lo, hi;

  Box() = default;
  Box(Vec l, Vec h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box: dim mismatch");
  }

  int dim() const { return static_cast<int>(lo.size()); }

  // empty means some lo > hi; degenerate (lo == hi) boxes are valid points
  bool empty() const {
    for (int i = 0; i < dim(); ++i)
      if (lo[i] > hi[i]) return true;
    return dim() == 0;
  }
  bool degenerate() const {
    for (int i = 0; i < dim(); ++i)
      if (lo[i] >= hi[i]) return true;
    return false;
  }
  bool nondegenerate() const { return dim() > 0 && !degenerate(); }

  double width(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    if (empty()) return 0.0;
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }

  bool contains(const Vec& p) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }
  bool contains(const Box& o) const {
    if (o.empty()) return true;
    for (int i = 0; i < dim(); ++i)
      if (o.lo[i] < lo[i] || o.hi[i] > hi[i]) return false;
    return true;
  }

  Vec center() const {
    Vec c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  // componentwise clamp of a point into the box
  Vec clamp(const Vec& p) const {
    Vec q(p);
    for (int i = 0; i < dim(); ++i) {
      if (q[i] < lo[i]) q[i] = lo[i];
      if (q[i] > hi[i]) q[i] = hi[i];
    }
    return q;
  }
  // componentwise clamp of both bounds; a box fully outside collapses onto a face
  Box clamp(const Box& b) const {
    Box r = b;
    for (int i = 0; i < dim(); ++i) {
      if (r.lo[i] < lo[i]) r.lo[i] = lo[i];
      if (r.lo[i] > hi[i]) r.lo[i] = hi[i];
      if (r.hi[i] < lo[i]) r.hi[i] = lo[i];
      if (r.hi[i] > hi[i]) r.hi[i] = hi[i];
    }
    return r;
  }
};

inline Box intersect(const Box& a, const Box& b) {
  assert(a.dim() == b.dim());
  Box r = a;
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = std::max(a.lo[i], b.lo[i]);
    r.hi[i] = std::min(a.hi[i], b.hi[i]);
  }
  return r;
}

inline Box minkowski_sum(const Box& a, const Box& b) {
  assert(a.dim() == b.dim());
  Box r = a;
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = a.lo[i] + b.lo[i];
    r.hi[i] = a.hi[i] + b.hi[i];
  }
  return r;
}

// {y | y + b subset a}; callers test empty() on the result
inline Box minkowski_diff(const Box& a, const Box& b) {
  assert(a.dim() == b.dim());
  Box r = a;
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = a.lo[i] - b.lo[i];
    r.hi[i] = a.hi[i] - b.hi[i];
  }
  return r;
}

inline Box negate(const Box& a) {
  Box r = a;
  for (int i = 0; i < a.dim(); ++i) {
    r.lo[i] = -a.hi[i];
    r.hi[i] = -a.lo[i];
  }
  return r;
}

}  // namespace synth
