#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include <synth/automaton.hpp>
#include <synth/controller.hpp>
#include <synth/product.hpp>
#include <synth/reach.hpp>
#include <synth/simulate.hpp>
#include <synth/system.hpp>

using namespace synth;

namespace {

// quarter-turn rotation: from (1,0) the closed loop is the exact 4-cycle
// (1,0) -> (0,1) -> (-1,0) -> (0,-1) -> (1,0) -> ...
SystemModel rotation_model() {
  SystemModel m;
  m.dim = 2;
  m.dyn = make_affine({{0.0, -1.0}, {1.0, 0.0}}, {0.0, 0.0});
  m.noise = Box{{0.0, 0.0}, {0.0, 0.0}};  // point support: deterministic replay
  m.inputs = {{0.0, 0.0}};
  m.domain = Box{{-2.0, -2.0}, {2.0, 2.0}};
  m.boundary = BoundaryMode::saturate;
  m.validate();
  return m;
}

const char* kAccept = R"(
STATES
q:2
INITIAL
q
ALPHABET
TRANS
q true q
)";

struct RotationRig {
  SystemModel model = rotation_model();
  Grid grid{model.domain, {1.0, 1.0}};
  Abstraction abs = build_abstraction(model, grid);
  ParityAutomaton aut = parse_automaton(kAccept);
  ProductView view{abs, aut, std::vector<Letter>(static_cast<std::size_t>(grid.num_cells()), 0)};
  Controller ctl;
  Bitset winning;

  RotationRig() {
    ctl.dim = 2;
    ctl.eta = {1.0, 1.0};
    ctl.domain = model.domain;
    ctl.automaton_hash = aut.hash();
    ctl.aut_states = 1;
    ctl.initial = aut.initial;
    ctl.num_inputs = 1;
    ctl.num_cells = grid.num_cells();
    ctl.table.assign(static_cast<std::size_t>(grid.num_cells()), 0);
    winning = Bitset(static_cast<std::size_t>(view.num_states()));
    winning.fill();
  }
};

}  // namespace

TEST_CASE("counter rng replays per (seed, stream) and separates streams") {
  CounterRng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool c_differs = false, d_differs = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next();
    CHECK(va == b.next());
    c_differs |= (va != c.next());
    d_differs |= (va != d.next());
  }
  CHECK(c_differs);
  CHECK(d_differs);

  CounterRng u(1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform01();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const double y = u.uniform(-3.0, -1.0);
    CHECK(y >= -3.0);
    CHECK(y <= -1.0);
  }
}

TEST_CASE("noise samples stay in the support and cover each axis") {
  const Box support{{-0.4, -0.4}, {-0.2, -0.2}};
  CounterRng rng(2024, 0);
  Vec lo(2, 1e9), hi(2, -1e9);
  for (int i = 0; i < 10000; ++i) {
    const Vec d = sample_noise(rng, support);
    for (int k = 0; k < 2; ++k) {
      CHECK(d[static_cast<std::size_t>(k)] >= support.lo[static_cast<std::size_t>(k)]);
      CHECK(d[static_cast<std::size_t>(k)] <= support.hi[static_cast<std::size_t>(k)]);
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k)]);
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k)]);
    }
  }
  for (int k = 0; k < 2; ++k)
    CHECK(hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)] >= 0.95 * 0.2);
}

TEST_CASE("wilson interval frozen endpoints") {
  const WilsonInterval mid = wilson_interval(50, 100);
  CHECK(mid.point == doctest::Approx(0.5));
  CHECK(mid.lo == doctest::Approx(0.4038315303442626).epsilon(1e-12));
  CHECK(mid.hi == doctest::Approx(0.5961684696557374).epsilon(1e-12));
  CHECK(mid.covers(0.5));
  CHECK(!mid.covers(0.65));

  const WilsonInterval none = wilson_interval(0, 10);
  CHECK(none.lo == 0.0);
  CHECK(none.hi == doctest::Approx(0.27753279995699603).epsilon(1e-12));

  const WilsonInterval all = wilson_interval(10, 10);
  CHECK(all.hi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(all.lo == doctest::Approx(0.7224672000430039).epsilon(1e-12));

  CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
}

TEST_CASE("deterministic limit cycle replays exactly") {
  RotationRig rig;
  SimOptions opt;
  opt.horizon = 8;
  opt.record_trajectory = true;

  const SimResult r = simulate(rig.model, rig.view, rig.ctl, rig.winning, {1.0, 0.0}, opt);
  CHECK(r.stayed_in_winning);
  CHECK(!r.lookup_failed);
  CHECK(!r.left_domain);
  CHECK(r.steps == 8);
  CHECK(r.tail_max_priority == 2);
  CHECK(r.tail_parity_even());
  REQUIRE(r.trajectory.size() == 9);
  const std::vector<Vec> cycle = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    CHECK(r.trajectory[k][0] == cycle[k % 4][0]);  // exact doubles: +-1 and 0
    CHECK(r.trajectory[k][1] == cycle[k % 4][1]);
  }
}

TEST_CASE("zero-horizon run is just the initial state") {
  RotationRig rig;
  SimOptions opt;
  opt.horizon = 0;
  opt.record_trajectory = true;
  const SimResult r = simulate(rig.model, rig.view, rig.ctl, rig.winning, {1.0, 0.0}, opt);
  CHECK(r.steps == 0);
  REQUIRE(r.trajectory.size() == 1);
  CHECK(r.trajectory[0][0] == 1.0);
  CHECK(r.trajectory[0][1] == 0.0);
}

TEST_CASE("leaving the winning set is flagged but the rollout keeps going") {
  RotationRig rig;
  // knock the product state of the cell holding (-1, 0) out of the winning set
  const CellId bad_cell = rig.grid.quantize({-1.0, 0.0});
  rig.winning.reset(static_cast<std::size_t>(rig.view.compose(0, static_cast<int>(bad_cell))));

  SimOptions opt;
  opt.horizon = 8;
  opt.record_trajectory = true;
  const SimResult r = simulate(rig.model, rig.view, rig.ctl, rig.winning, {1.0, 0.0}, opt);
  CHECK(!r.stayed_in_winning);
  CHECK(r.steps == 8);  // diagnostic mode: full horizon despite the violation
  CHECK(r.trajectory.size() == 9);
}

TEST_CASE("undefined controller entries fall back to zero input and are flagged") {
  RotationRig rig;
  rig.ctl.table.assign(rig.ctl.table.size(), -1);  // no decision anywhere

  SimOptions opt;
  opt.horizon = 8;
  opt.record_trajectory = true;
  const SimResult r = simulate(rig.model, rig.view, rig.ctl, rig.winning, {1.0, 0.0}, opt);
  CHECK(r.lookup_failed);
  CHECK(r.steps == 8);
  REQUIRE(r.trajectory.size() == 9);
  // zero input coincides with the cycle's input, so the orbit is unchanged
  CHECK(r.trajectory[4][0] == 1.0);
  CHECK(r.trajectory[4][1] == 0.0);
}

TEST_CASE("controller pinned to a different automaton is rejected") {
  RotationRig rig;
  rig.ctl.automaton_hash ^= 0xdeadbeefull;
  CHECK_THROWS_AS(simulate(rig.model, rig.view, rig.ctl, rig.winning, {1.0, 0.0}, SimOptions{}),
                  std::invalid_argument);

  RotationRig rig2;
  Bitset wrong_size(3);
  CHECK_THROWS_AS(simulate(rig2.model, rig2.view, rig2.ctl, wrong_size, {1.0, 0.0}, SimOptions{}),
                  std::invalid_argument);
}

TEST_CASE("controller save/load round-trip preserves the table") {
  RotationRig rig;
  rig.ctl.table[5] = -1;
  const std::string path =
      (std::filesystem::temp_directory_path() / "synth_test_controller.txt").string();
  save_controller(rig.ctl, path);
  const Controller back = load_controller(path);
  CHECK(back.dim == rig.ctl.dim);
  CHECK(back.eta == rig.ctl.eta);
  CHECK(back.automaton_hash == rig.ctl.automaton_hash);
  CHECK(back.aut_states == rig.ctl.aut_states);
  CHECK(back.num_inputs == rig.ctl.num_inputs);
  CHECK(back.num_cells == rig.ctl.num_cells);
  CHECK(back.table == rig.ctl.table);
  CHECK(back.entries() == rig.ctl.entries());
  CHECK(!back.defined(5, 0));
  CHECK(back.defined(4, 0));
  CHECK(back.lookup(4, 0) == 0);
  CHECK_THROWS_AS(back.lookup(5, 0), std::out_of_range);
  std::filesystem::remove(path);
}

TEST_CASE("hit-probability estimator: trivial endpoints") {
  SystemModel m;
  m.dim = 1;
  m.dyn = make_affine({{1.0}}, {0.0});  // identity map
  m.noise = Box{{0.0}, {0.0}};
  m.inputs = {{0.0}};
  m.domain = Box{{-1.0}, {1.0}};
  m.boundary = BoundaryMode::saturate;
  m.validate();

  const auto near_one = [](const Vec& s) { return s[0] >= 0.9; };
  // start inside the target: every run hits immediately
  const WilsonInterval sure = estimate_hit_probability(m, near_one, {0.95}, 0, 10, 50, 1);
  CHECK(sure.hits == 50);
  CHECK(sure.hi == doctest::Approx(1.0).epsilon(1e-12));
  // frozen at the origin: the target is never reached
  const WilsonInterval never = estimate_hit_probability(m, near_one, {0.0}, 0, 100, 50, 1);
  CHECK(never.hits == 0);
  CHECK(never.lo == 0.0);
}

TEST_CASE("hit-probability estimator brackets a known random-walk value") {
  // lazy walk on the integers: from live state k the map proposes k + 0.6 and
  // the uniform [-1,1] disturbance turns that into
  //     down (floor = k-1) with prob 0.2, stay 0.5, up (floor = k+1) with 0.3.
  // Conditioned on moving, up-probability is 0.6, so with a losing trap below 1
  // and a winning target at 5, starting at 2, the classic ruin formula gives
  //     P(win) = (1 - r^2)/(1 - r^5), r = 0.4/0.6  ==>  135/211.
  SystemModel m;
  m.dim = 1;
  Dynamics dyn;
  dyn.name = "lazy_walk";
  dyn.map = [](const Vec& s, const Vec& u) {
    if (s[0] < 1.0) return Vec{-1000.0};  // losing trap: clamped far below, stays put
    return Vec{std::floor(s[0]) + 0.6 + u[0]};
  };
  dyn.interval = [](const Box& b, const Vec&) { return b; };  // unused here
  m.dyn = dyn;
  m.noise = Box{{-1.0}, {1.0}};
  m.inputs = {{0.0}};
  m.domain = Box{{-10.0}, {10.0}};
  m.boundary = BoundaryMode::saturate;
  m.validate();

  const double analytic = 135.0 / 211.0;
  const auto won = [](const Vec& s) { return s[0] >= 5.0; };
  // z ~ 4 sigma keeps this single-shot statistical check essentially never flaky
  const WilsonInterval est =
      estimate_hit_probability(m, won, {2.0}, 0, 2000, 400, 20240817, 4.0);
  CHECK(est.covers(analytic));
  CHECK(est.point == doctest::Approx(analytic).epsilon(0.35));
}
