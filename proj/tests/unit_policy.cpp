#include <cmath>

#include "doctest.h"

#include "commons/policy.hpp"
#include "commons/random.hpp"

using namespace commons;

namespace {

Policy random_valid_policy(Rng& rng) {
  const double dTR1 = rng.uniform(0.1, 3.0);
  const double dPS1 = rng.uniform(0.1, 3.0);
  const double dSP0 = rng.uniform(-dPS1 + 1e-3, 3.0);
  const double dRT0 = rng.uniform(-dTR1 + 1e-3, 3.0);
  return Policy(dSP0, dRT0, dTR1, dPS1);
}

}  // namespace

TEST_CASE("policy construction enforces the payoff assumptions") {
  CHECK_NOTHROW(Policy(2.0, 0.2, 2.1, 2.0));
  CHECK_THROWS_AS(Policy(2.0, 0.2, -2.1, 2.0), invalid_policy_error);
  CHECK_THROWS_AS(Policy(2.0, 0.2, 2.1, 0.0), invalid_policy_error);
  CHECK_THROWS_AS(Policy(-2.0, 0.2, 2.1, 2.0), invalid_policy_error);  // dSP0 <= -dPS1
  CHECK_THROWS_AS(Policy(2.0, -2.2, 2.1, 2.0), invalid_policy_error);  // dRT0 <= -dTR1
}

TEST_CASE("greedy policy requires negative deplete-state differences") {
  CHECK_NOTHROW(GreedyPolicy(-1.0, -1.0, 2.1, 2.0));
  CHECK_THROWS_AS(GreedyPolicy(1.0, -1.0, 2.1, 2.0), invalid_policy_error);
  CHECK_THROWS_AS(GreedyPolicy(-1.0, 0.0, 2.1, 2.0), invalid_policy_error);
  CHECK_THROWS_AS(GreedyPolicy(-1.0, -1.0, -2.1, 2.0), invalid_policy_error);
}

TEST_CASE("g coefficients match hand-computed values") {
  const GCoefficients gc = g_coefficients(Policy(2.0, 0.2, 2.1, 2.0));
  CHECK(gc.a == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(gc.b == doctest::Approx(-1.8).epsilon(1e-12));
  CHECK(gc.c == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(gc.d == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(gc.Y == doctest::Approx(3.8).epsilon(1e-12));

  const GCoefficients gc2 = g_coefficients(Policy(2.0, 0.8, 2.1, 2.0));
  CHECK(gc2.b == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(gc2.Y == doctest::Approx(2.6).epsilon(1e-12));

  // Symmetric cancellation: dSP0 == dRT0 and dPS1 == dTR1 kill a and b.
  const GCoefficients gc3 = g_coefficients(Policy(1.5, 1.5, 2.0, 2.0));
  CHECK(gc3.a == 0.0);
  CHECK(gc3.b == 0.0);
}

TEST_CASE("both Y formulas agree over random valid policies") {
  Rng rng(42);
  for (int k = 0; k < 10000; ++k) {
    const Policy p = random_valid_policy(rng);
    const GCoefficients gc = g_coefficients(p);
    const double y_alt = gc.b * gc.c - gc.a * gc.d;
    const double scale = std::max({1.0, std::abs(gc.Y), std::abs(y_alt)});
    CHECK(std::abs(gc.Y - y_alt) <= 1e-12 * scale);
  }
}

TEST_CASE("payoff gap corner identities and interior value") {
  const Policy p(2.0, 0.2, 2.1, 2.0);
  const GCoefficients gc = g_coefficients(p);
  CHECK(payoff_gap(gc, 0.0, 0.0) == doctest::Approx(2.0));
  CHECK(payoff_gap(gc, 1.0, 0.0) == doctest::Approx(0.2));
  CHECK(payoff_gap(gc, 0.0, 1.0) == doctest::Approx(-2.0));
  CHECK(payoff_gap(gc, 1.0, 1.0) == doctest::Approx(-2.1));
  CHECK(payoff_gap(gc, 0.5, 0.5) == doctest::Approx(-0.475));
  CHECK_THROWS_AS(payoff_gap(gc, -0.1, 0.5), domain_error);
  CHECK_THROWS_AS(payoff_gap(gc, 0.5, 1.5), domain_error);
}

TEST_CASE("corner identities hold for random valid policies") {
  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    const Policy p = random_valid_policy(rng);
    const GCoefficients gc = g_coefficients(p);
    CHECK(payoff_gap(gc, 0.0, 0.0) == doctest::Approx(p.dSP0).epsilon(1e-12));
    CHECK(payoff_gap(gc, 1.0, 0.0) == doctest::Approx(p.dRT0).epsilon(1e-12));
    CHECK(payoff_gap(gc, 0.0, 1.0) == doctest::Approx(-p.dPS1).epsilon(1e-12));
    CHECK(payoff_gap(gc, 1.0, 1.0) == doctest::Approx(-p.dTR1).epsilon(1e-12));
    // dg/dn < 0 on [0,1]; linear in x, so the endpoints suffice.
    CHECK(dg_dn(gc, 0.0) < 0.0);
    CHECK(dg_dn(gc, 1.0) < 0.0);
  }
}

TEST_CASE("matrix payoffs match the difference representation") {
  PayoffMatrices mats;
  mats.A1 << 0.0, -2.0, 2.1, 0.0;
  mats.A0 << 0.0, 2.0, -0.2, 0.0;
  const Policy derived = mats.to_policy();
  CHECK(derived.dSP0 == doctest::Approx(2.0));
  CHECK(derived.dRT0 == doctest::Approx(0.2));
  CHECK(derived.dTR1 == doctest::Approx(2.1));
  CHECK(derived.dPS1 == doctest::Approx(2.0));

  const Eigen::Vector2d pay = payoffs_from_matrices(mats, 1.0, 1.0);
  CHECK(pay(0) == doctest::Approx(0.0));
  CHECK(pay(1) == doctest::Approx(2.1));
  CHECK(pay(0) - pay(1) ==
        doctest::Approx(payoff_gap(g_coefficients(derived), 1.0, 1.0)));

  // Pure defectors at depletion receive (S0, P0).
  const Eigen::Vector2d corner = payoffs_from_matrices(mats, 0.0, 0.0);
  CHECK(corner(0) == doctest::Approx(mats.A0(0, 1)));
  CHECK(corner(1) == doctest::Approx(mats.A0(1, 1)));
}

TEST_CASE("matrix payoff gap equals the bilinear gap on random inputs") {
  Rng rng(11);
  for (int k = 0; k < 200; ++k) {
    PayoffMatrices mats;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        mats.A1(i, j) = rng.uniform(-3.0, 3.0);
        mats.A0(i, j) = rng.uniform(-3.0, 3.0);
      }
    }
    const GCoefficients gc = g_coefficients_raw(
        mats.A0(0, 1) - mats.A0(1, 1), mats.A0(0, 0) - mats.A0(1, 0),
        mats.A1(1, 0) - mats.A1(0, 0), mats.A1(1, 1) - mats.A1(0, 1));
    for (int s = 0; s < 5; ++s) {
      const double x = rng.uniform();
      const double n = rng.uniform();
      const Eigen::Vector2d pay = payoffs_from_matrices(mats, x, n);
      CHECK(std::abs(pay(0) - pay(1) - payoff_gap(gc, x, n)) <= 1e-12);
    }
  }
}

TEST_CASE("identical matrices make payoffs independent of n") {
  PayoffMatrices mats;
  mats.A1 << 1.0, -0.5, 0.7, 0.3;
  mats.A0 = mats.A1;
  const Eigen::Vector2d p0 = payoffs_from_matrices(mats, 0.3, 0.0);
  const Eigen::Vector2d p1 = payoffs_from_matrices(mats, 0.3, 1.0);
  CHECK((p0 - p1).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("region V membership") {
  const Policy p(2.0, 0.2, 2.1, 2.0);
  CHECK(in_region_V(p, 0.4, 1.0, 0.0));
  CHECK(in_region_V(p, 0.4, 1.0, 0.5));
  // Strict upper bound excludes the boundary.
  CHECK_FALSE(in_region_V(Policy(2.0, 2.1, 2.1, 2.0), 0.4, 1.0, 0.5));
  CHECK_THROWS_AS(in_region_V(p, 0.0, 1.0, 0.0), domain_error);
}

TEST_CASE("region V shrinks as total extraction grows") {
  Rng rng(13);
  for (int k = 0; k < 500; ++k) {
    const Policy p = random_valid_policy(rng);
    const double alpha = rng.uniform(0.1, 1.0);
    const double theta = rng.uniform(0.5, 2.0);
    const double abar = rng.uniform(0.0, theta);
    const double abar_smaller = rng.uniform(0.0, abar);
    if (in_region_V(p, alpha, theta, abar)) {
      CHECK(in_region_V(p, alpha, theta, abar_smaller));
    }
  }
}

TEST_CASE("responsibility predicate") {
  CHECK(is_responsible(Policy(2.0, 0.8, 2.1, 2.0), 0.4, 1.0));
  CHECK(is_responsible(Policy(2.0, -1.0, 2.1, 2.0), 0.4, 1.0));
  CHECK_FALSE(is_responsible(Policy(2.0, 2.5, 2.1, 2.0), 0.4, 1.0));
  // Assumption 2 is gated before any classification.
  CHECK_THROWS_AS(Policy(2.0, -2.2, 2.1, 2.0), invalid_policy_error);
}
