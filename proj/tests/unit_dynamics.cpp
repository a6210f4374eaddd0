#include <cmath>
#include <variant>

#include "doctest.h"

#include "commons/dynamics.hpp"
#include "commons/extraction.hpp"
#include "commons/random.hpp"
#include "commons/rk4.hpp"

using namespace commons;

namespace {

const Policy kBasePolicy(2.0, 0.2, 2.1, 2.0);

RateParams one_greedy(double alpha_g, double theta_g = 1.0, double eps = 1.0) {
  return RateParams(0.4, 1.0, eps, {GreedyPopulation(alpha_g, theta_g)});
}

State interior_start(Rng& rng, int dim) {
  State s(dim);
  for (int i = 0; i < dim; ++i) s(i) = rng.uniform(0.05, 0.95);
  return s;
}

}  // namespace

TEST_CASE("single-population right-hand side") {
  // Boundary components freeze.
  CHECK(rhs_single({0.0, 0.5}, kBasePolicy, 0.4, 1.0)(0) == 0.0);
  CHECK(rhs_single({1.0, 0.5}, kBasePolicy, 0.4, 1.0)(0) == 0.0);
  CHECK(rhs_single({0.5, 0.0}, kBasePolicy, 0.4, 1.0)(1) == 0.0);
  CHECK(rhs_single({0.5, 1.0}, kBasePolicy, 0.4, 1.0)(1) == 0.0);

  const Eigen::Vector2d d = rhs_single({0.5, 0.5}, kBasePolicy, 0.4, 1.0);
  CHECK(d(0) == doctest::Approx(-0.11875).epsilon(1e-12));
  CHECK(d(1) == doctest::Approx(0.075).epsilon(1e-12));

  // Zero at the sustained fixed point.
  const auto oc = classify_single(kBasePolicy, 0.4, 1.0);
  const auto& s = std::get<Sustained>(oc);
  const Eigen::Vector2d at_fp =
      rhs_single({s.x_star, s.n_star}, kBasePolicy, 0.4, 1.0);
  CHECK(std::abs(at_fp(0)) < 1e-15);
  CHECK(std::abs(at_fp(1)) < 1e-15);

  CHECK_THROWS_AS(rhs_single({1.2, 0.5}, kBasePolicy, 0.4, 1.0), domain_error);
}

TEST_CASE("multi-population right-hand side") {
  // M=0 reduces to the single-population field with eps scaling dn.
  const RateParams empty(0.4, 1.0, 2.0, {});
  State s2(2);
  s2 << 0.5, 0.5;
  const State d_multi = rhs_multi(s2, empty, kBasePolicy);
  const Eigen::Vector2d d_single = rhs_single({0.5, 0.5}, kBasePolicy, 0.4, 1.0);
  CHECK(d_multi(0) == doctest::Approx(d_single(0)).epsilon(1e-14));
  CHECK(d_multi(1) == doctest::Approx(2.0 * d_single(1)).epsilon(1e-14));

  // Zero at the sustained fixed point with extinct greedy populations.
  const RateParams rates = one_greedy(0.5);
  const auto oc = classify_multi(rates, kBasePolicy);
  const auto& fp = std::get<Sustained>(oc);
  State s3(3);
  s3 << fp.x_star, 0.0, fp.n_star;
  CHECK(rhs_multi(s3, rates, kBasePolicy).cwiseAbs().maxCoeff() < 1e-15);

  // eps scales only the resource equation.
  State mid(3);
  mid << 0.5, 0.5, 0.5;
  const State d1 = rhs_multi(mid, one_greedy(0.5, 1.0, 1.0), kBasePolicy);
  const State d2 = rhs_multi(mid, one_greedy(0.5, 1.0, 2.0), kBasePolicy);
  CHECK(d2(0) == d1(0));
  CHECK(d2(1) == d1(1));
  CHECK(d2(2) == doctest::Approx(2.0 * d1(2)).epsilon(1e-14));

  CHECK_THROWS_AS(rhs_multi(s2, rates, kBasePolicy), domain_error);
}

TEST_CASE("integration holds a fixed point and respects t_end = 0") {
  const auto oc = classify_single(kBasePolicy, 0.4, 1.0);
  const auto& s = std::get<Sustained>(oc);
  const MultiPopSystem sys(RateParams(0.4, 1.0, 1.0, {}), kBasePolicy);
  State s0(2);
  s0 << s.x_star, s.n_star;

  const Trajectory still = integrate(sys, s0, 10.0, 0.01);
  CHECK((still.final_state() - s0).cwiseAbs().maxCoeff() < 1e-12);

  const Trajectory echo = integrate(sys, s0, 0.0, 0.01);
  CHECK(echo.size() == 1);
  CHECK(echo.times[0] == 0.0);
}

TEST_CASE("single-population trajectory reaches the sustained fixed point") {
  const MultiPopSystem sys(RateParams(0.4, 1.0, 1.0, {}), kBasePolicy);
  State s0(2);
  s0 << 0.5, 0.5;
  const Trajectory traj = integrate(sys, s0, 500.0, 0.01);
  CHECK(resp_share(traj.final_state()) ==
        doctest::Approx(0.285714285714286).epsilon(1e-3));
  CHECK(resource(traj.final_state()) ==
        doctest::Approx(0.422764227642276).epsilon(1e-3));
}

TEST_CASE("multi-population trajectory reaches the sustained fixed point") {
  const RateParams rates(0.4, 1.0, 1.0,
                         {GreedyPopulation(0.5, 1.0, GreedyPolicy(-1.0, -1.0, 2.1, 2.0))});
  const MultiPopSystem sys(rates, kBasePolicy);
  State s0(3);
  s0 << 0.5, 0.5, 0.5;
  const IntegrationResult res = integrate_to_steady(sys, s0, 2000.0, 0.01);
  CHECK(std::abs(resp_share(res.final_state) - 0.642857142857143) < 1e-3);
  CHECK(greedy_shares(res.final_state).maxCoeff() < 1e-3);
  CHECK(std::abs(resource(res.final_state) - 0.289926289926290) < 1e-3);
  CHECK(res.stop == StopReason::SteadyState);
}

TEST_CASE("classify_single covers all single-population regimes") {
  const auto sustained = classify_single(kBasePolicy, 0.4, 1.0);
  const auto& s = std::get<Sustained>(sustained);
  CHECK(s.x_star == doctest::Approx(2.0 / 7.0).epsilon(1e-12));
  CHECK(s.n_star == doctest::Approx(0.422764227642276).epsilon(1e-12));

  CHECK(std::holds_alternative<OscillatingTOC>(
      classify_single(Policy(2.0, 2.5, 2.1, 2.0), 0.4, 1.0)));
  CHECK(std::get<OscillatingTOC>(
            classify_single(Policy(2.0, 2.1, 2.1, 2.0), 0.4, 1.0))
            .closed_orbits);

  // Exact lower-boundary policy sustains with n* = 0.
  const auto boundary = classify_single(Policy(2.0, -2.0, 2.1, 2.0), 1.0, 1.0);
  const auto& b = std::get<Sustained>(boundary);
  CHECK(b.x_star == doctest::Approx(0.5));
  CHECK(b.n_star == doctest::Approx(0.0));

  CHECK(std::holds_alternative<Collapse>(
      classify_single(Policy(-0.5, 0.2, 2.1, 2.0), 0.4, 1.0)));
  CHECK(std::holds_alternative<Collapse>(
      classify_single(Policy(2.0, -2.05, 2.1, 2.0), 1.0, 1.0)));
}

TEST_CASE("classify_multi covers all multi-population regimes") {
  CHECK(std::holds_alternative<Collapse>(
      classify_multi(one_greedy(1.5), kBasePolicy)));

  const auto sustained = classify_multi(one_greedy(0.5), kBasePolicy);
  const auto& s = std::get<Sustained>(sustained);
  CHECK(s.x_star == doctest::Approx(0.642857142857143).epsilon(1e-12));
  CHECK(s.n_star == doctest::Approx(0.289926289926290).epsilon(1e-12));

  const auto segment = classify_multi(one_greedy(1.0), kBasePolicy);
  CHECK(std::get<LineSegment>(segment).n_upper ==
        doctest::Approx(0.2 / 2.3).epsilon(1e-12));

  // abar == theta with dRT0 <= 0 collapses.
  CHECK(std::holds_alternative<Collapse>(
      classify_multi(one_greedy(1.0), Policy(2.0, -0.5, 2.1, 2.0))));

  // abar < theta outside V(abar) collapses: lower bound at abar=0.8 is
  // ((0.8-1)/1.2)*2 = -1/3, and dRT0 = -0.5 sits below it.
  CHECK(std::holds_alternative<Collapse>(
      classify_multi(one_greedy(0.8), Policy(2.0, -0.5, 2.1, 2.0))));
}

TEST_CASE("trajectories stay inside the unit cube and greedy shares decay") {
  Rng rng(5);
  for (int k = 0; k < 10; ++k) {
    const double a1 = rng.uniform(0.0, 0.6);
    const double a2 = rng.uniform(0.0, 0.3);
    const RateParams rates(0.4, 1.0, 1.0,
                           {GreedyPopulation(a1, rng.uniform(0.1, 1.0)),
                            GreedyPopulation(a2, rng.uniform(0.1, 1.0))});
    const MultiPopSystem sys(rates, kBasePolicy);
    const Trajectory traj = integrate(sys, interior_start(rng, 4), 300.0, 0.01);
    for (const State& s : traj.states) {
      CHECK(s.minCoeff() >= 0.0);
      CHECK(s.maxCoeff() <= 1.0);
    }
    // Greedy cooperator shares are monotone non-increasing (g_i < 0).
    for (std::size_t t = 1; t < traj.size(); ++t) {
      for (int i = 1; i <= 2; ++i) {
        CHECK(traj.states[t](i) <= traj.states[t - 1](i) + 1e-12);
      }
    }
    CHECK(greedy_shares(traj.final_state()).maxCoeff() < 1e-3);

    // The clamp is cosmetic: raw RK4 steps leave [0,1] by less than 1e-9.
    for (std::size_t t = 0; t + 1 < traj.size(); t += 25) {
      const State raw = rk4_step(sys, traj.states[t], 0.01);
      CHECK(raw.minCoeff() >= -1e-9);
      CHECK(raw.maxCoeff() <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("the integrator advances by exact rk4_step increments") {
  const RateParams rates = one_greedy(0.3);
  const MultiPopSystem sys(rates, kBasePolicy);
  State s0(3);
  s0 << 0.4, 0.6, 0.5;
  const Trajectory traj = integrate(sys, s0, 1.0, 0.01);
  for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
    const State expected = rk4_step(sys, traj.states[t], 0.01);
    CHECK((traj.states[t + 1] - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("long-horizon integration agrees with classify_multi from many starts") {
  const RateParams rates(0.4, 1.0, 1.0,
                         {GreedyPopulation(0.3, 0.7), GreedyPopulation(0.2, 0.4)});
  const auto oc = classify_multi(rates, kBasePolicy);
  const auto& fp = std::get<Sustained>(oc);
  const MultiPopSystem sys(rates, kBasePolicy);
  Rng rng(23);
  for (int run = 0; run < 10; ++run) {
    const IntegrationResult res =
        integrate_to_steady(sys, interior_start(rng, 4), 2000.0, 0.01);
    CHECK(std::abs(resp_share(res.final_state) - fp.x_star) < 1e-3);
    CHECK(greedy_shares(res.final_state).maxCoeff() < 1e-3);
    CHECK(std::abs(resource(res.final_state) - fp.n_star) < 1e-3);
  }
}

TEST_CASE("classification and limits are eps-invariant") {
  const auto base = std::get<Sustained>(classify_multi(one_greedy(0.5), kBasePolicy));
  for (double eps : {0.1, 1.0, 10.0}) {
    const RateParams rates = one_greedy(0.5, 1.0, eps);
    const auto oc = std::get<Sustained>(classify_multi(rates, kBasePolicy));
    CHECK(oc.x_star == base.x_star);
    CHECK(oc.n_star == base.n_star);

    const MultiPopSystem sys(rates, kBasePolicy);
    State s0(3);
    s0 << 0.5, 0.5, 0.5;
    const IntegrationResult res =
        integrate_to_steady(sys, s0, eps < 1.0 ? 6000.0 : 2000.0, 0.01);
    CHECK(std::abs(resp_share(res.final_state) - base.x_star) < 1e-3);
    CHECK(std::abs(resource(res.final_state) - base.n_star) < 1e-3);
  }
}

TEST_CASE("oscillating policies never settle") {
  // dRT0 = 2.5 > (dTR1/dPS1) dSP0 = 2.1: heteroclinic regime.
  const Policy osc(2.0, 2.5, 2.1, 2.0);
  CHECK(std::holds_alternative<OscillatingTOC>(classify_single(osc, 0.4, 1.0)));
  const MultiPopSystem sys(RateParams(0.4, 1.0, 1.0, {}), osc);
  State s0(2);
  s0 << 0.5, 0.5;
  const Trajectory traj = integrate(sys, s0, 2000.0, 0.01);
  double n_min = 1.0, n_max = 0.0;
  for (std::size_t k = 3 * traj.size() / 4; k < traj.size(); ++k) {
    n_min = std::min(n_min, resource(traj.states[k]));
    n_max = std::max(n_max, resource(traj.states[k]));
  }
  CHECK(n_max - n_min > 0.5);
}

TEST_CASE("decay rate helper flags fast and degenerate fixed points") {
  CHECK(fixed_point_decay_rate(kBasePolicy, 0.4, 1.0, 0.0) > 0.05);
  // Collapse regime has no interior fixed point.
  CHECK(fixed_point_decay_rate(kBasePolicy, 0.4, 1.0, 1.5) == 0.0);
  // Near the upper responsibility boundary Y ~ 0 and the rate degrades.
  CHECK(fixed_point_decay_rate(Policy(2.0, 2.0999, 2.1, 2.0), 0.4, 1.0, 0.0) <
        1e-3);
}

TEST_CASE("integration input validation") {
  const MultiPopSystem sys(RateParams(0.4, 1.0, 1.0, {}), kBasePolicy);
  State bad(2);
  bad << 0.0, 0.5;  // boundary start is not strictly interior
  CHECK_THROWS_AS(integrate(sys, bad, 1.0, 0.01), domain_error);
  State ok(2);
  ok << 0.5, 0.5;
  CHECK_THROWS_AS(integrate(sys, ok, 1.0, -0.01), domain_error);
  State wrong(3);
  wrong << 0.5, 0.5, 0.5;
  CHECK_THROWS_AS(integrate(sys, wrong, 1.0, 0.01), domain_error);

  // An absurd step overflows within one RK4 stage and is caught.
  CHECK_THROWS_AS(integrate(sys, ok, 1e154, 1e154), non_finite_state_error);
}
