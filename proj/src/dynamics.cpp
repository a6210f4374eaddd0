#include "commons/dynamics.hpp"

#include <cmath>

namespace commons {

namespace {

bool in_closed_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

void check_state_domain(const State& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!in_closed_unit_interval(s(i))) {
      throw domain_error("state component outside [0,1]");
    }
  }
}

double clamp_component(double v) {
  const double lo = kStateClamp;
  const double hi = 1.0 - kStateClamp;
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

GreedyPopulation::GreedyPopulation(double alpha_, double theta_,
                                   GreedyPolicy policy_)
    : alpha(alpha_), theta(theta_), policy(policy_) {
  if (!(alpha >= 0.0) || !(theta >= 0.0)) {
    throw domain_error("greedy rates must be non-negative");
  }
}

RateParams::RateParams(double alpha_, double theta_, double eps_,
                       std::vector<GreedyPopulation> greedy_)
    : alpha(alpha_), theta(theta_), eps(eps_), greedy(std::move(greedy_)) {
  if (!(alpha > 0.0) || !(theta > 0.0) || !(eps > 0.0)) {
    throw domain_error("alpha, theta, eps must be > 0");
  }
}

double RateParams::abar() const {
  double total = 0.0;
  for (const auto& g : greedy) total += g.alpha;
  return total;
}

State make_state(double x, const Eigen::VectorXd& shares, double n) {
  State s(shares.size() + 2);
  s(0) = x;
  if (shares.size() > 0) s.segment(1, shares.size()) = shares;
  s(s.size() - 1) = n;
  return s;
}

Eigen::Vector2d rhs_single(const Eigen::Vector2d& state, const Policy& policy,
                           double alpha, double theta) {
  const double x = state(0);
  const double n = state(1);
  const GCoefficients gc = g_coefficients(policy);
  const double g = payoff_gap(gc, x, n);  // checks the unit square
  return {x * (1.0 - x) * g,
          n * (1.0 - n) * (theta * x - alpha * (1.0 - x))};
}

MultiPopSystem::MultiPopSystem(const RateParams& rates, const Policy& policy)
    : rates_(rates), g_resp_(g_coefficients(policy)) {
  g_greedy_.reserve(rates_.greedy.size());
  for (const auto& g : rates_.greedy) g_greedy_.push_back(g_coefficients(g.policy));
}

void MultiPopSystem::eval(const State& s, State& ds) const {
  const Eigen::Index m = static_cast<Eigen::Index>(rates_.greedy.size());
  const double x = s(0);
  const double n = s(m + 1);

  const double g = g_resp_.a * x * n + g_resp_.b * x + g_resp_.c * n + g_resp_.d;
  ds(0) = x * (1.0 - x) * g;

  double flux = rates_.theta * x - rates_.alpha * (1.0 - x);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double xi = s(i + 1);
    const GCoefficients& gi = g_greedy_[static_cast<std::size_t>(i)];
    const double gap = gi.a * xi * n + gi.b * xi + gi.c * n + gi.d;
    ds(i + 1) = xi * (1.0 - xi) * gap;
    const auto& pop = rates_.greedy[static_cast<std::size_t>(i)];
    flux += pop.theta * xi - pop.alpha * (1.0 - xi);
  }
  ds(m + 1) = rates_.eps * n * (1.0 - n) * flux;
}

State rhs_multi(const State& state, const RateParams& rates,
                const Policy& policy) {
  if (state.size() != rates.num_greedy() + 2) {
    throw domain_error("state dimension must equal M+2");
  }
  check_state_domain(state);
  const MultiPopSystem sys(rates, policy);
  return sys(state);
}

namespace {

void check_interior(const State& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s(i) > 0.0 && s(i) < 1.0)) {
      throw domain_error("initial state must be strictly interior");
    }
  }
}

template <class PerStep>
IntegrationResult run_rk4(const MultiPopSystem& sys, const State& state0,
                          double t_end, double dt, double deriv_tol,
                          PerStep&& record) {
  if (state0.size() != sys.dim()) {
    throw domain_error("state dimension must equal M+2");
  }
  check_interior(state0);
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw domain_error("need dt > 0 and t_end >= 0");
  }

  State y = state0;
  State k1(sys.dim()), k2(sys.dim()), k3(sys.dim()), k4(sys.dim());
  State tmp(sys.dim());

  record(0.0, y);
  const long long n_steps = std::llround(t_end / dt);
  for (long long step = 1; step <= n_steps; ++step) {
    sys.eval(y, k1);
    tmp = y + (0.5 * dt) * k1;
    sys.eval(tmp, k2);
    tmp = y + (0.5 * dt) * k2;
    sys.eval(tmp, k3);
    tmp = y + dt * k3;
    sys.eval(tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (!std::isfinite(y(i))) {
        throw non_finite_state_error("state became non-finite during integration");
      }
      y(i) = clamp_component(y(i));
    }

    const double t = static_cast<double>(step) * dt;
    record(t, y);

    if (deriv_tol > 0.0) {
      sys.eval(y, k1);
      if (k1.cwiseAbs().maxCoeff() < deriv_tol) {
        return {y, t, StopReason::SteadyState};
      }
    }
  }
  return {y, static_cast<double>(n_steps) * dt, StopReason::HorizonReached};
}

}  // namespace

Trajectory integrate(const MultiPopSystem& sys, const State& state0,
                     double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end >= 0.0)) {
    throw domain_error("need dt > 0 and t_end >= 0");
  }
  Trajectory traj;
  const long long n_steps = std::llround(t_end / dt);
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  run_rk4(sys, state0, t_end, dt, /*deriv_tol=*/0.0,
          [&](double t, const State& s) {
            traj.times.push_back(t);
            traj.states.push_back(s);
          });
  return traj;
}

IntegrationResult integrate_to_steady(const MultiPopSystem& sys,
                                      const State& state0, double t_end,
                                      double dt, double deriv_tol) {
  return run_rk4(sys, state0, t_end, dt, deriv_tol,
                 [](double, const State&) {});
}

OutcomeClass classify_single(const Policy& policy, double alpha,
                             double theta) {
  if (!(alpha > 0.0) || !(theta > 0.0)) {
    throw domain_error("classify_single requires alpha, theta > 0");
  }
  const GCoefficients gc = g_coefficients(policy);
  const double upper = policy.dTR1 / policy.dPS1 * policy.dSP0;
  if (policy.dSP0 > 0.0 && policy.dRT0 >= upper) {
    // Heteroclinic cycle; exact equality gives neutrally stable closed orbits.
    return OscillatingTOC{policy.dRT0 == upper};
  }
  const double lower = -(theta / alpha) * policy.dSP0;
  if (policy.dSP0 > 0.0 && policy.dRT0 >= lower) {
    const double x_star = alpha / (alpha + theta);
    const double n_star = payoff_gap(gc, x_star, 0.0) / (-dg_dn(gc, x_star));
    return Sustained{x_star, n_star};
  }
  return Collapse{};
}

double fixed_point_decay_rate(const Policy& policy, double alpha, double theta,
                              double abar, double eps) {
  if (!(abar < theta) || !in_region_V(policy, alpha, theta, abar)) return 0.0;
  const GCoefficients gc = g_coefficients(policy);
  const double x = (alpha + abar) / (alpha + theta);
  const double gn = dg_dn(gc, x);
  const double n = -payoff_gap(gc, x, 0.0) / gn;
  if (!(n > 0.0 && n < 1.0)) return 0.0;
  // Jacobian of the (x, n) subsystem at the fixed point: the x-row is
  // x(1-x) * [Y/gn, gn], the n-row is [eps n(1-n)(alpha+theta), 0].
  const double trace = x * (1.0 - x) * gc.Y / gn;
  const double det =
      x * (1.0 - x) * (-gn) * eps * n * (1.0 - n) * (alpha + theta);
  const double disc = std::max(trace * trace - 4.0 * det, 0.0);
  return 0.5 * (-trace - std::sqrt(disc));
}

OutcomeClass classify_multi(const RateParams& rates, const Policy& policy) {
  const double abar = rates.abar();
  const double theta = rates.theta;
  if (abar > theta) return Collapse{};
  if (abar < theta) {
    if (!in_region_V(policy, rates.alpha, theta, abar)) return Collapse{};
    const GCoefficients gc = g_coefficients(policy);
    const double x_star = (rates.alpha + abar) / (rates.alpha + theta);
    const double n_star = -payoff_gap(gc, x_star, 0.0) / dg_dn(gc, x_star);
    return Sustained{x_star, n_star};
  }
  // abar == theta knife edge.
  if (policy.dRT0 > 0.0) {
    return LineSegment{policy.dRT0 / (policy.dRT0 + policy.dTR1)};
  }
  return Collapse{};
}

}  // namespace commons
