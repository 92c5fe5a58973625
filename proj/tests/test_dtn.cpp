#include "doctest.h"
#include "rtdc/dtn.hpp"
#include "support/dtn_oracle.hpp"
#include "support/fixtures.hpp"

using namespace rtdc;
using fixtures::iv;

namespace {

const TimepointRef A{0}, B{1};

}  // namespace

TEST_CASE("solve_dtn examples") {
  SUBCASE("first consistent conjunct, earliest times") {
    const auto p = make_dtn_problem({A, B},
                                    {{{Conjunct::unary(A, iv(0, 5))}},
                                     {{Conjunct::binary(B, A, iv(2, 3)), Conjunct::unary(B, iv(0, 1))}}},
                                    0);
    const auto w = solve_dtn(p);
    REQUIRE(w.has_value());
    CHECK(oracle::satisfies(p, *w));
    CHECK(*w == Assignment{{A, 0}, {B, 2}});
  }
  SUBCASE("second conjunct gives a=0, b=0") {
    const auto p = make_dtn_problem({A, B},
                                    {{{Conjunct::unary(A, iv(0, 5))}},
                                     {{Conjunct::binary(B, A, iv(-20, -10)), Conjunct::unary(B, iv(0, 1))}}},
                                    0);
    const auto w = solve_dtn(p);
    REQUIRE(w.has_value());
    CHECK(oracle::satisfies(p, *w));
    CHECK(*w == Assignment{{A, 0}, {B, 0}});
  }
  SUBCASE("lower bound from the current time") {
    CHECK_FALSE(solve_dtn(make_dtn_problem({A}, {{{Conjunct::unary(A, iv(5, 6))}}}, 7)).has_value());
  }
  SUBCASE("no variables") {
    const auto w = solve_dtn(make_dtn_problem({}, {}, 3));
    REQUIRE(w.has_value());
    CHECK(w->empty());
  }
  SUBCASE("negative cycle") {
    const DtnProblem p{{A, B}, {{{Conjunct::binary(B, A, iv(2, 3))}}, {{Conjunct::binary(A, B, iv(0, 1))}}}};
    CHECK_FALSE(solve_dtn(p).has_value());
  }
  SUBCASE("earliest times") {
    const auto p = make_dtn_problem({A, B}, {{{Conjunct::binary(B, A, iv(TimeValue(5, 2), TimeValue::infinity()))}}}, 1);
    CHECK(*solve_dtn(p) == Assignment{{A, 1}, {B, TimeValue(7, 2)}});
  }
  SUBCASE("unbounded below still yields a witness") {
    const DtnProblem p{{A, B}, {{{Conjunct::binary(B, A, iv(1, 2))}}, {{Conjunct::unary(B, iv(TimeValue::neg_infinity(), 4))}}}};
    const auto w = solve_dtn(p);
    REQUIRE(w.has_value());
    CHECK(oracle::satisfies(p, *w));
  }
  SUBCASE("expired deadline") {
    const auto p = make_dtn_problem({A}, {{{Conjunct::unary(A, iv(0, 1))}}}, 0);
    CHECK_THROWS_AS(solve_dtn(p, std::chrono::steady_clock::now() - std::chrono::seconds(1)), DeadlineExceeded);
  }
}


TEST_CASE("solve_dtn agrees with the closure oracle and returns valid witnesses") {
  std::mt19937_64 rng(2024);
  int feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = oracle::random_problem(rng);
    const auto w = solve_dtn(p);
    REQUIRE(w.has_value() == oracle::dtn_feasible(p));
    if (w) {
      ++feasible;
      REQUIRE(oracle::satisfies(p, *w));
    }
  }
  CHECK(feasible > 100);
  CHECK(feasible < 1000);
}
