#pragma once

#include <Eigen/Dense>
#include <variant>
#include <vector>

#include "commons/policy.hpp"

namespace commons {

/// One greedy population: its extraction/restoration rates and its policy.
struct GreedyPopulation {
  double alpha;
  double theta;
  GreedyPolicy policy;

  GreedyPopulation(double alpha_, double theta_,
                   GreedyPolicy policy_ = GreedyPolicy::default_policy());
};

/// Rates of the coupled system: the responsible population's (alpha, theta),
/// the resource timescale eps, and the greedy populations.
struct RateParams {
  double alpha;
  double theta;
  double eps;
  std::vector<GreedyPopulation> greedy;

  RateParams(double alpha_, double theta_, double eps_ = 1.0,
             std::vector<GreedyPopulation> greedy_ = {});

  int num_greedy() const { return static_cast<int>(greedy.size()); }

  /// Total greedy extraction rate, sum of alpha_i.
  double abar() const;
};

// The system state is a dense vector [x, x_1..x_M, n]: responsible
// cooperator share, greedy cooperator shares, resource level.
using State = Eigen::VectorXd;

State make_state(double x, const Eigen::VectorXd& greedy_shares, double n);
inline double resp_share(const State& s) { return s(0); }
inline double resource(const State& s) { return s(s.size() - 1); }
inline auto greedy_shares(const State& s) {
  return s.segment(1, s.size() - 2);
}

/// Right-hand side of the single-population dynamics
///   dx = x(1-x) g(x,n),  dn = n(1-n)(theta x - alpha(1-x)).
Eigen::Vector2d rhs_single(const Eigen::Vector2d& state, const Policy& policy,
                           double alpha, double theta);

/// The coupled multi-population vector field, with precomputed gap
/// coefficients so repeated evaluation allocates nothing.
class MultiPopSystem {
 public:
  MultiPopSystem(const RateParams& rates, const Policy& policy);

  int dim() const { return static_cast<int>(rates_.greedy.size()) + 2; }
  const RateParams& rates() const { return rates_; }

  /// Derivative into ds; ds must have size dim().
  void eval(const State& s, State& ds) const;

  State operator()(const State& s) const {
    State ds(dim());
    eval(s, ds);
    return ds;
  }

 private:
  RateParams rates_;
  GCoefficients g_resp_;
  std::vector<GCoefficients> g_greedy_;
};

/// Derivative of the full state under the multi-population dynamics.
State rhs_multi(const State& state, const RateParams& rates,
                const Policy& policy);

/// A time series of states under the ODE flow.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;

  std::size_t size() const { return times.size(); }
  const State& final_state() const { return states.back(); }
};

/// Why an integration stopped.
enum class StopReason { SteadyState, HorizonReached };

struct IntegrationResult {
  State final_state;
  double t_final;
  StopReason stop;
};

inline constexpr double kStateClamp = 1e-12;
inline constexpr double kDefaultDt = 0.01;
inline constexpr double kDefaultTEnd = 2000.0;
inline constexpr double kSteadyDerivTol = 1e-8;

/// Fixed-step RK4 from a strictly interior state, recording every step.
/// Components are clamped to [1e-12, 1-1e-12] after each step. Throws
/// non_finite_state_error if the state leaves the realm of finite numbers.
Trajectory integrate(const MultiPopSystem& sys, const State& state0,
                     double t_end, double dt);

/// Same flow without storage; stops early once max|ds| < deriv_tol.
IntegrationResult integrate_to_steady(const MultiPopSystem& sys,
                                      const State& state0, double t_end,
                                      double dt,
                                      double deriv_tol = kSteadyDerivTol);

// ---------------------------------------------------------------------------
// Asymptotic outcome classification.

/// Interior fixed point (x*, n*) attracts; the resource persists at n*.
struct Sustained {
  double x_star;
  double n_star;
};

/// Trajectories approach the boundary heteroclinic cycle (or, at the
/// measure-zero equality case, closed orbits around a neutral center).
struct OscillatingTOC {
  bool closed_orbits = false;
};

/// The resource is depleted: n(t) -> 0.
struct Collapse {};

/// abar = theta knife edge: a locally stable segment
/// {(1, 0,...,0, n) : n in [0, n_upper)} of fixed points.
struct LineSegment {
  double n_upper;
};

using OutcomeClass =
    std::variant<Sustained, OscillatingTOC, Collapse, LineSegment>;

/// Asymptotic outcome of the single-population system for a valid policy.
OutcomeClass classify_single(const Policy& policy, double alpha, double theta);

/// Asymptotic outcome of the multi-population system, dispatching on the
/// total greedy extraction abar vs theta and on V(abar) membership.
OutcomeClass classify_multi(const RateParams& rates, const Policy& policy);

/// Slowest linearized decay rate toward the sustained interior fixed point of
/// the (x, n) subsystem (greedy directions decay much faster). Returns 0 when
/// the outcome is not Sustained or the fixed point touches the boundary.
/// Used to pick instances whose trajectories settle within a fixed horizon.
double fixed_point_decay_rate(const Policy& policy, double alpha, double theta,
                              double abar, double eps = 1.0);

}  // namespace commons
