#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include <synth/game.hpp>
#include <synth/oracle.hpp>

using namespace synth;

namespace {

// two-cell walk where every concrete state is guaranteed to reach both cells:
// the committed-support family from cell 0 is the single set {0,1}
SupportTable guaranteed_jump_game() {
  SupportTable t(2, 1);
  t.prio = {1, 2};
  t.over[t.row(0, 0)] = {0, 1};
  t.under[t.row(0, 0)] = {0, 1};
  t.over[t.row(1, 0)] = {1};
  t.under[t.row(1, 0)] = {1};
  t.validate();
  return t;
}

// two-cell walk where the jump is only possible, not guaranteed: the empty
// under row forces the adversary to commit to one singleton support
SupportTable possible_jump_game() {
  SupportTable t(2, 1);
  t.prio = {1, 2};
  t.over[t.row(0, 0)] = {0, 1};
  t.under[t.row(0, 0)] = {};
  t.over[t.row(1, 0)] = {1};
  t.under[t.row(1, 0)] = {1};
  t.validate();
  return t;
}

Bitset make_set(int n, std::initializer_list<int> bits) {
  Bitset b(static_cast<std::size_t>(n));
  for (int x : bits) b.set(static_cast<std::size_t>(x));
  return b;
}

Bitset random_set(int n, std::mt19937_64& rng) {
  Bitset b(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s)
    if (rng() & 1) b.set(static_cast<std::size_t>(s));
  return b;
}

// the combined operators contract: equal to the three-layer explicit operator
// composition restricted to the controller vertices
Bitset triple_cpre(const ExplicitGame& e, const Bitset& y, Mode mode) {
  return restrict_v0(e, explicit_cpre(e, explicit_cpre(e, explicit_cpre(e, embed_v0(e, y), mode), mode), mode));
}

Bitset triple_apre(const ExplicitGame& e, const Bitset& y, const Bitset& z, Mode mode) {
  return restrict_v0(
      e, explicit_cpre(e, explicit_cpre(e, explicit_apre(e, embed_v0(e, y), embed_v0(e, z), mode), mode), mode));
}

}  // namespace

TEST_CASE("support table validation") {
  SupportTable dead(1, 1);
  dead.prio = {1};
  CHECK_THROWS_AS(dead.validate(), std::invalid_argument);  // empty over row

  SupportTable bad(2, 1);
  bad.prio = {1, 1};
  bad.over[0] = {0};
  bad.under[0] = {1};  // under not inside over
  bad.over[1] = {1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("explicit game materializes the committed-support families") {
  // one row with under {2,3} inside over {1,2,3,4}: the family is the base set
  // plus one extension per extra over successor, every member set bounded by
  // |under| + 1
  SupportTable t(5, 1);
  t.prio = {1, 1, 1, 1, 1};
  t.over[t.row(0, 0)] = {1, 2, 3, 4};
  t.under[t.row(0, 0)] = {2, 3};
  for (int s = 1; s < 5; ++s) {
    t.over[t.row(s, 0)] = {static_cast<std::int32_t>(s)};
    t.under[t.row(s, 0)] = {static_cast<std::int32_t>(s)};
  }
  t.validate();
  const ExplicitGame e = build_explicit_game(t);

  CHECK(e.n0 == 5);
  CHECK(e.n1 == 5);
  CHECK(e.nr == 7);  // {2,3}, {1,2,3}, {2,3,4} and the four self-loop singletons

  const auto& family = e.vr_of[0];
  REQUIRE(family.size() == 3);  // |over \ under| + 1
  std::vector<std::vector<std::int32_t>> members;
  for (auto vr : family) members.push_back(e.succ[static_cast<std::size_t>(vr)]);
  std::sort(members.begin(), members.end());
  CHECK(members == std::vector<std::vector<std::int32_t>>{{1, 2, 3}, {2, 3}, {2, 3, 4}});
  for (const auto& w : members) CHECK(w.size() <= 3);  // |under| + 1
}

TEST_CASE("empty under rows expand into singleton supports and share vertices") {
  const SupportTable t = possible_jump_game();
  const ExplicitGame e = build_explicit_game(t);
  CHECK(e.n0 == 2);
  CHECK(e.n1 == 2);
  CHECK(e.nr == 2);  // {0} and {1}; the self-loop row reuses {1}

  REQUIRE(e.vr_of[0].size() == 2);  // adversary commits to {0} or {1}
  REQUIRE(e.vr_of[1].size() == 1);
  // the singleton {1} is shared between the two rows
  const auto singleton1 = e.vr_of[1][0];
  CHECK(std::count(e.vr_of[0].begin(), e.vr_of[0].end(), singleton1) == 1);
  CHECK(e.succ[static_cast<std::size_t>(singleton1)] == std::vector<std::int32_t>{1});
}

TEST_CASE("random-vertex family size matches the row structure") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const SupportTable t = random_support_game(1000 + static_cast<std::uint64_t>(trial));
    const ExplicitGame e = build_explicit_game(t);
    for (int s = 0; s < t.n; ++s)
      for (int u = 0; u < t.m; ++u) {
        const auto r = t.row(s, u);
        const auto& family = e.vr_of[r];
        const std::size_t over_n = t.over[r].size(), under_n = t.under[r].size();
        if (t.under_empty(s, u))
          CHECK(family.size() == over_n);
        else
          CHECK(family.size() == over_n - under_n + 1);
        for (auto vr : family) {
          const auto& w = e.succ[static_cast<std::size_t>(vr)];
          CHECK(w.size() >= std::max<std::size_t>(1, under_n));
          CHECK(w.size() <= under_n + 1);
          // under subset w subset over
          CHECK(std::includes(w.begin(), w.end(), t.under[r].begin(), t.under[r].end()));
          CHECK(std::includes(t.over[r].begin(), t.over[r].end(), w.begin(), w.end()));
        }
      }
  }
  (void)rng;
}

TEST_CASE("one-step predecessors on the guaranteed-jump game") {
  const SupportTable t = guaranteed_jump_game();
  const Bitset both = make_set(2, {0, 1});
  const Bitset only1 = make_set(2, {1});

  // adversarially forcing into {1} in one step is impossible from 0: the
  // committed support {0,1} may also yield 0
  Bitset cpre_adv = combined_cpre(t, only1, Mode::adversarial);
  CHECK_FALSE(cpre_adv.test(0));
  CHECK(cpre_adv.test(1));

  // even cooperatively there is no one-step force into {1}: the sole committed
  // support {0,1} keeps probability mass on 0, and random vertices demand full
  // containment in either mode
  Bitset cpre_coop = combined_cpre(t, only1, Mode::cooperative);
  CHECK_FALSE(cpre_coop.test(0));
  CHECK(cpre_coop.test(1));

  // staying in {0,1} while making positive-probability progress to {1} is
  // exactly the strengthened predecessor at the random vertex
  Bitset ap = combined_apre(t, both, only1, Mode::adversarial);
  CHECK(ap.test(0));
  CHECK(ap.test(1));
}

TEST_CASE("one-step predecessors on the possible-jump game") {
  const SupportTable t = possible_jump_game();
  const Bitset both = make_set(2, {0, 1});
  const Bitset only1 = make_set(2, {1});

  // the adversary commits to the singleton {0}: no guaranteed progress to 1
  CHECK_FALSE(combined_apre(t, both, only1, Mode::adversarial).test(0));
  // cooperatively the singleton {1} is chosen instead
  CHECK(combined_apre(t, both, only1, Mode::cooperative).test(0));
  // ... and that same singleton makes a cooperative one-step force possible,
  // unlike in the guaranteed-jump game whose only support straddles both cells
  CHECK(combined_cpre(t, only1, Mode::cooperative).test(0));
}

TEST_CASE("combined operators equal the explicit three-layer composition") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const SupportTable t = random_support_game(2000 + static_cast<std::uint64_t>(trial));
    const ExplicitGame e = build_explicit_game(t);
    for (int rep = 0; rep < 12; ++rep) {
      const Bitset y = random_set(t.n, rng);
      const Bitset z = random_set(t.n, rng);
      for (Mode mode : {Mode::adversarial, Mode::cooperative}) {
        CHECK(combined_cpre(t, y, mode) == triple_cpre(e, y, mode));
        CHECK(combined_apre(t, y, z, mode) == triple_apre(e, y, z, mode));
      }
    }
  }
}

TEST_CASE("progress predecessor with target equal to the safe set is plain cpre") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const SupportTable t = random_support_game(3000 + static_cast<std::uint64_t>(trial));
    for (int rep = 0; rep < 8; ++rep) {
      const Bitset y = random_set(t.n, rng);
      for (Mode mode : {Mode::adversarial, Mode::cooperative})
        CHECK(combined_apre(t, y, y, mode) == combined_cpre(t, y, mode));
    }
  }
}

TEST_CASE("combined operators are monotone and mode-dominated") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const SupportTable t = random_support_game(4000 + static_cast<std::uint64_t>(trial));
    for (int rep = 0; rep < 8; ++rep) {
      Bitset y1 = random_set(t.n, rng);
      Bitset y2 = y1;
      y2 |= random_set(t.n, rng);  // y1 subset y2
      Bitset z1 = random_set(t.n, rng);
      z1 &= y1;                    // keep the progress target inside the safe set
      Bitset z2 = z1;
      Bitset extra = random_set(t.n, rng);
      extra &= y2;
      z2 |= extra;
      for (Mode mode : {Mode::adversarial, Mode::cooperative}) {
        CHECK(combined_cpre(t, y1, mode).is_subset_of(combined_cpre(t, y2, mode)));
        CHECK(combined_apre(t, y1, z1, mode).is_subset_of(combined_apre(t, y2, z2, mode)));
      }
      CHECK(combined_cpre(t, y1, Mode::adversarial)
                .is_subset_of(combined_cpre(t, y1, Mode::cooperative)));
      CHECK(combined_apre(t, y1, z1, Mode::adversarial)
                .is_subset_of(combined_apre(t, y1, z1, Mode::cooperative)));
    }
  }
}

TEST_CASE("reverse row enumeration matches the forward rows") {
  for (int trial = 0; trial < 20; ++trial) {
    const SupportTable t = random_support_game(5000 + static_cast<std::uint64_t>(trial));
    // forward: collect (s,u) -> x from the over rows
    std::vector<std::vector<std::pair<int, int>>> expect(static_cast<std::size_t>(t.n));
    for (int s = 0; s < t.n; ++s)
      for (int u = 0; u < t.m; ++u)
        t.for_each_over(s, u, [&](int x) {
          expect[static_cast<std::size_t>(x)].push_back({s, u});
          return true;
        });
    for (int x = 0; x < t.n; ++x) {
      std::vector<std::pair<int, int>> got;
      t.for_each_pred(x, [&](int s, int u) { got.push_back({s, u}); });
      std::sort(got.begin(), got.end());
      std::sort(expect[static_cast<std::size_t>(x)].begin(), expect[static_cast<std::size_t>(x)].end());
      CHECK(got == expect[static_cast<std::size_t>(x)]);
    }
  }
}

TEST_CASE("embedding controller states into the full vertex space round-trips") {
  const SupportTable t = guaranteed_jump_game();
  const ExplicitGame e = build_explicit_game(t);
  const Bitset v0 = make_set(2, {1});
  const Bitset full = embed_v0(e, v0);
  CHECK(full.size() == static_cast<std::size_t>(e.total()));
  CHECK(full.count() == 1);
  CHECK(full.test(1));
  CHECK(restrict_v0(e, full) == v0);
}
