#include <algorithm>
#include <random>

#include "doctest.h"
#include "rtdc/propagation.hpp"
#include "support/fixtures.hpp"

using namespace rtdc;
using fixtures::iv;

namespace {

const TimepointRef A{0}, B{1}, V{2}, U{3};

std::vector<Disjunct> one(Conjunct c) { return {Disjunct{{c}}}; }

}  // namespace

TEST_CASE("exact propagation") {
  SUBCASE("binary becomes unary on the other side") {
    const auto s = propagate_exact(one(Conjunct::binary(V, A, iv(2, 4))), A, 3);
    REQUIRE_FALSE(s.violated());
    REQUIRE(s.updated.size() == 1);
    CHECK(s.updated[0].conjuncts[0] == Conjunct::unary(V, iv(5, 7)));
  }
  SUBCASE("scheduled as the minuend") {
    const auto s = propagate_exact(one(Conjunct::binary(A, V, iv(2, 4))), A, 10);
    CHECK(s.updated[0].conjuncts[0] == Conjunct::unary(V, iv(6, 8)));
  }
  SUBCASE("unary outside its interval") {
    const auto s = propagate_exact(one(Conjunct::unary(A, iv(0, 10))), A, 12);
    CHECK(s.violated());
  }
  SUBCASE("one true conjunct satisfies the disjunct") {
    const std::vector<Disjunct> cs{{{Conjunct::unary(A, iv(0, 1)), Conjunct::unary(A, iv(5, 9))}}};
    const auto s = propagate_exact(cs, A, 6);
    CHECK_FALSE(s.violated());
    CHECK(s.updated.empty());
  }
  SUBCASE("unrelated disjuncts are kept untouched") {
    const auto s = propagate_exact(one(Conjunct::unary(B, iv(0, 1))), A, 6);
    CHECK(s.updated == one(Conjunct::unary(B, iv(0, 1))));
  }
}

TEST_CASE("bounded propagation") {
  SUBCASE("tight bound") {
    const auto s = propagate_bounded(one(Conjunct::binary(V, U, iv(1, 5))), U, iv(0, 2));
    REQUIRE(s.updated.size() == 1);
    CHECK(s.updated[0].conjuncts[0] == Conjunct::unary(V, iv(3, 5)));
  }
  SUBCASE("tight bound collapses to false") {
    CHECK(propagate_bounded(one(Conjunct::binary(V, U, iv(1, 2))), U, iv(0, 4)).violated());
  }
  SUBCASE("reactive pair satisfies its conjunct") {
    const auto s = propagate_bounded(one(Conjunct::binary(U, A, iv(0, 3))), U, iv(0, 2), {{U, A}});
    CHECK_FALSE(s.violated());
    CHECK(s.updated.empty());
  }
  SUBCASE("same conjunct without the reaction is rewritten on the controllable") {
    const auto s = propagate_bounded(one(Conjunct::binary(U, A, iv(0, 3))), U, iv(0, 2));
    REQUIRE(s.updated.size() == 1);
    CHECK(s.updated[0].conjuncts[0] == Conjunct::unary(A, iv(-1, 0)));
  }
  SUBCASE("unary under the for-all reading") {
    CHECK(propagate_bounded(one(Conjunct::unary(U, iv(0, 5))), U, iv(1, 2)).updated.empty());
    CHECK(propagate_bounded(one(Conjunct::unary(U, iv(0, 5))), U, iv(4, 6)).violated());
    CHECK(propagate_bounded(one(Conjunct::unary(U, iv(0, 5))), U, iv(6, 7)).violated());
  }
  SUBCASE("two timepoints of the same wait with overlapping windows resolve to false") {
    auto cs = one(Conjunct::binary(V, U, iv(-1, 1)));
    CHECK_FALSE(apply_bounded(cs, U, iv(0, 2)));
    CHECK(apply_bounded(cs, V, iv(0, 2)));
  }
}

TEST_CASE("expiry of unary conjuncts") {
  CHECK(expire_unary(one(Conjunct::unary(A, iv(0, 5))), 7).violated());
  const auto kept = expire_unary(one(Conjunct::unary(A, iv(0, 5))), 5);
  CHECK_FALSE(kept.violated());
  CHECK(kept.updated == one(Conjunct::unary(A, iv(0, 5))));
  std::vector<bool> executed(4, false);
  executed[U.value] = true;
  const auto occurred = expire_unary(one(Conjunct::unary(U, iv(0, 5))), 7, executed);
  CHECK(occurred.updated == one(Conjunct::unary(U, iv(0, 5))));
}

TEST_CASE("violations are never undone") {
  auto cs = one(Conjunct::unary(A, iv(0, 1)));
  cs.push_back(Disjunct{{Conjunct::binary(B, A, iv(0, 1))}});
  CHECK(apply_exact(cs, A, 5));
  CHECK(apply_exact(cs, B, 5));
  CHECK(any_violated(cs));
}

namespace {

Conjunct random_conjunct(std::mt19937_64& rng, std::uint32_t n) {
  std::uniform_int_distribution<std::uint32_t> tp(0, n - 1);
  std::uniform_int_distribution<int> b(-6, 12);
  int lo = b(rng), hi = b(rng);
  if (hi < lo) std::swap(lo, hi);
  const TimepointRef v{tp(rng)};
  if (rng() % 2) return Conjunct::unary(v, iv(lo, hi));
  TimepointRef w{tp(rng)};
  while (w == v) w = TimepointRef{tp(rng)};
  return Conjunct::binary(v, w, iv(lo, hi));
}

}  // namespace

TEST_CASE("exact propagation agrees with direct evaluation") {
  std::mt19937_64 rng(5);
  constexpr std::uint32_t n = 4;
  for (int trial = 0; trial < 3000; ++trial) {
    std::vector<Disjunct> cs;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int d = 0; d < k; ++d) {
      Disjunct dj;
      const int m = 1 + static_cast<int>(rng() % 3);
      for (int c = 0; c < m; ++c) dj.conjuncts.push_back(random_conjunct(rng, n));
      cs.push_back(dj);
    }
    std::vector<TimeValue> times;
    for (std::uint32_t i = 0; i < n; ++i) times.emplace_back(static_cast<std::int64_t>(rng() % 11));
    std::vector<std::uint32_t> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);

    bool direct_ok = true;
    for (const auto& d : cs) direct_ok = direct_ok && holds(d, times);

    auto work = cs;
    bool violated = false;
    for (auto i : order) violated = apply_exact(work, {i}, times[i]) || violated;
    REQUIRE(violated == !direct_ok);
    if (!violated) REQUIRE(work.empty());
  }
}

TEST_CASE("bounded rewrites hold for every execution time in the window") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 3000; ++trial) {
    const Conjunct c = random_conjunct(rng, 2);
    const TimepointRef tp{static_cast<std::uint32_t>(rng() % 2)};
    const int lo = static_cast<int>(rng() % 8), width = static_cast<int>(rng() % 5);
    const Interval window = iv(lo, lo + width);
    const auto s = propagate_bounded(one(c), tp, window);
    if (s.violated()) continue;
    const TimepointRef other{1 - tp.value};
    std::vector<TimeValue> probe_other;
    if (s.updated.empty()) {
      for (int k = -20; k <= 40; ++k) probe_other.emplace_back(k, 2);
    } else {
      REQUIRE(s.updated.size() == 1);
      const Conjunct& r = s.updated[0].conjuncts[0];
      if (!r.is_open()) continue;
      REQUIRE(r.is_unary());
      REQUIRE(r.v == other);
      for (const auto* b : {&r.iv.lo(), &r.iv.hi()})
        if (b->is_finite()) probe_other.push_back(*b);
      if (r.iv.lo().is_finite() && r.iv.hi().is_finite()) probe_other.push_back(TimeValue((r.iv.lo() + r.iv.hi()).rational() / 2));
    }
    for (int k = 0; k <= 4 * width; ++k) {
      const TimeValue t = TimeValue(lo) + TimeValue(k, 4);
      for (const auto& w : probe_other) {
        std::vector<TimeValue> times(2);
        times[tp.value] = t;
        times[other.value] = w;
        if (c.is_unary() && c.v == other) continue;  // not about tp
        REQUIRE(holds(c, times));
      }
    }
  }
}
