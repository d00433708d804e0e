#include <doctest.h>

#include <synth/geometry.hpp>

using namespace synth;

TEST_CASE("box emptiness and degeneracy") {
  CHECK(Box{}.empty());
  CHECK(Box{{1.0}, {0.5}}.empty());
  CHECK_FALSE(Box{{0.0, 0.0}, {1.0, 2.0}}.empty());

  CHECK(Box{{0.0, 0.0}, {1.0, 0.0}}.degenerate());   // flat in dim 1
  CHECK_FALSE(Box{{0.0, 0.0}, {1.0, 2.0}}.degenerate());
  CHECK(Box{{0.25}, {0.25}}.degenerate());            // a point is degenerate but not empty
  CHECK_FALSE(Box{{0.25}, {0.25}}.empty());
}

TEST_CASE("box volume") {
  CHECK(Box{{0.0, 0.0}, {2.0, 3.0}}.volume() == doctest::Approx(6.0));
  CHECK(Box{{-1.0}, {1.0}}.volume() == doctest::Approx(2.0));
  CHECK(Box{{0.0, 0.0}, {1.0, 0.0}}.volume() == doctest::Approx(0.0));
  CHECK(Box{{1.0}, {0.0}}.volume() == doctest::Approx(0.0));  // empty box has no volume
}

TEST_CASE("box membership is closed on both faces") {
  const Box b{{0.0, -1.0}, {2.0, 1.0}};
  CHECK(b.contains(Vec{0.0, -1.0}));
  CHECK(b.contains(Vec{2.0, 1.0}));
  CHECK(b.contains(Vec{1.0, 0.0}));
  CHECK_FALSE(b.contains(Vec{2.0 + 1e-12, 0.0}));
  CHECK_FALSE(b.contains(Vec{1.0, -1.5}));
}

TEST_CASE("box containment of boxes") {
  const Box outer{{0.0, 0.0}, {4.0, 4.0}};
  CHECK(outer.contains(Box{{1.0, 1.0}, {2.0, 2.0}}));
  CHECK(outer.contains(outer));
  CHECK_FALSE(outer.contains(Box{{1.0, 1.0}, {5.0, 2.0}}));
  CHECK(outer.contains(Box{{3.0}, {2.0}}));  // empty boxes are contained everywhere
}

TEST_CASE("box center and point clamp") {
  const Box b{{0.0, -2.0}, {1.0, 2.0}};
  const Vec c = b.center();
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[1] == doctest::Approx(0.0));

  const Vec p = b.clamp(Vec{-1.0, 3.0});
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(2.0));
  const Vec q = b.clamp(Vec{0.25, 0.75});
  CHECK(q[0] == doctest::Approx(0.25));
  CHECK(q[1] == doctest::Approx(0.75));
}

TEST_CASE("box clamp of a box collapses outside mass onto the face") {
  const Box dom{{0.0, 0.0}, {4.0, 4.0}};
  const Box inside = dom.clamp(Box{{1.0, 1.0}, {2.0, 2.0}});
  CHECK(inside.lo[0] == doctest::Approx(1.0));
  CHECK(inside.hi[1] == doctest::Approx(2.0));

  const Box straddling = dom.clamp(Box{{-1.0, 3.0}, {1.0, 5.0}});
  CHECK(straddling.lo[0] == doctest::Approx(0.0));
  CHECK(straddling.hi[0] == doctest::Approx(1.0));
  CHECK(straddling.lo[1] == doctest::Approx(3.0));
  CHECK(straddling.hi[1] == doctest::Approx(4.0));

  // fully outside on the left: collapses onto the lo face, not empty
  const Box outside = dom.clamp(Box{{-3.0, 1.0}, {-1.0, 2.0}});
  CHECK(outside.lo[0] == doctest::Approx(0.0));
  CHECK(outside.hi[0] == doctest::Approx(0.0));
  CHECK_FALSE(outside.empty());
  CHECK(outside.degenerate());
}

TEST_CASE("box intersection") {
  const Box a{{0.0, 0.0}, {2.0, 2.0}};
  const Box b{{1.0, 1.0}, {3.0, 3.0}};
  const Box i = intersect(a, b);
  CHECK(i.lo[0] == doctest::Approx(1.0));
  CHECK(i.hi[0] == doctest::Approx(2.0));
  CHECK(i.volume() == doctest::Approx(1.0));

  CHECK(intersect(a, Box{{5.0, 5.0}, {6.0, 6.0}}).empty());
  // touching boxes intersect in a measure-zero slab
  const Box t = intersect(a, Box{{2.0, 0.0}, {3.0, 2.0}});
  CHECK_FALSE(t.empty());
  CHECK(t.volume() == doctest::Approx(0.0));
}

TEST_CASE("minkowski sum adds bounds componentwise") {
  const Box a{{0.0, 1.0}, {1.0, 2.0}};
  const Box b{{-0.5, -0.5}, {0.5, 0.5}};
  const Box s = minkowski_sum(a, b);
  CHECK(s.lo[0] == doctest::Approx(-0.5));
  CHECK(s.hi[0] == doctest::Approx(1.5));
  CHECK(s.lo[1] == doctest::Approx(0.5));
  CHECK(s.hi[1] == doctest::Approx(2.5));

  // sum with a point box translates
  const Box t = minkowski_sum(a, Box{{0.25, -1.0}, {0.25, -1.0}});
  CHECK(t.lo[0] == doctest::Approx(0.25));
  CHECK(t.hi[1] == doctest::Approx(1.0));
}

TEST_CASE("minkowski difference is the erosion { y | y + b inside a }") {
  const Box a{{0.0, 0.0}, {4.0, 4.0}};
  const Box b{{-0.5, -0.5}, {0.5, 0.5}};
  const Box d = minkowski_diff(a, b);
  CHECK(d.lo[0] == doctest::Approx(0.5));
  CHECK(d.hi[0] == doctest::Approx(3.5));
  // every corner of y + b stays inside a
  CHECK(a.contains(minkowski_sum(d, b)));

  // eroding by something wider than the box leaves nothing
  CHECK(minkowski_diff(Box{{0.0}, {1.0}}, Box{{-2.0}, {2.0}}).empty());

  // negative-coordinate case: [-0.4,-0.2] eroded by [-1.1,-1.0] = [0.7, 0.8]
  const Box n = minkowski_diff(Box{{-0.4}, {-0.2}}, Box{{-1.1}, {-1.0}});
  CHECK(n.lo[0] == doctest::Approx(0.7));
  CHECK(n.hi[0] == doctest::Approx(0.8));
}

TEST_CASE("minkowski sum and difference are inverse on compatible boxes") {
  const Box a{{1.0, -2.0}, {5.0, 3.0}};
  const Box b{{-0.25, 0.0}, {0.75, 0.5}};
  const Box back = minkowski_diff(minkowski_sum(a, b), b);
  for (int k = 0; k < 2; ++k) {
    CHECK(back.lo[static_cast<std::size_t>(k)] ==
          doctest::Approx(a.lo[static_cast<std::size_t>(k)]));
    CHECK(back.hi[static_cast<std::size_t>(k)] ==
          doctest::Approx(a.hi[static_cast<std::size_t>(k)]));
  }
}

TEST_CASE("negate mirrors a box through the origin") {
  const Box b{{-0.4, 1.0}, {-0.2, 2.0}};
  const Box n = negate(b);
  CHECK(n.lo[0] == doctest::Approx(0.2));
  CHECK(n.hi[0] == doctest::Approx(0.4));
  CHECK(n.lo[1] == doctest::Approx(-2.0));
  CHECK(n.hi[1] == doctest::Approx(-1.0));
}
