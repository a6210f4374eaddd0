#include "commons/policy.hpp"

#include <cmath>
#include <string>

namespace commons {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw invalid_policy_error(std::string(name) + " must be finite");
  }
}

void check_unit_square(double x, double n) {
  if (!(x >= 0.0 && x <= 1.0 && n >= 0.0 && n <= 1.0)) {
    throw domain_error("(x,n) outside the unit square");
  }
}

}  // namespace

Policy::Policy(double dSP0_, double dRT0_, double dTR1_, double dPS1_)
    : dSP0(dSP0_), dRT0(dRT0_), dTR1(dTR1_), dPS1(dPS1_) {
  require_finite(dSP0, "dSP0");
  require_finite(dRT0, "dRT0");
  require_finite(dTR1, "dTR1");
  require_finite(dPS1, "dPS1");
  if (!(dTR1 > 0.0) || !(dPS1 > 0.0)) {
    throw invalid_policy_error(
        "assumption 1 violated: dTR1 and dPS1 must be > 0");
  }
  if (!(dSP0 > -dPS1) || !(dRT0 > -dTR1)) {
    throw invalid_policy_error(
        "assumption 2 violated: need dSP0 > -dPS1 and dRT0 > -dTR1");
  }
}

GreedyPolicy::GreedyPolicy(double dSP0_, double dRT0_, double dTR1_,
                           double dPS1_)
    : dSP0(dSP0_), dRT0(dRT0_), dTR1(dTR1_), dPS1(dPS1_) {
  require_finite(dSP0, "dSP0");
  require_finite(dRT0, "dRT0");
  require_finite(dTR1, "dTR1");
  require_finite(dPS1, "dPS1");
  if (!(dSP0 < 0.0) || !(dRT0 < 0.0) || !(dTR1 > 0.0) || !(dPS1 > 0.0)) {
    throw invalid_policy_error(
        "greedy policy needs dSP0 < 0, dRT0 < 0, dTR1 > 0, dPS1 > 0");
  }
  // Corner values of the bilinear gap: g(0,0)=dSP0, g(1,0)=dRT0,
  // g(0,1)=-dPS1, g(1,1)=-dTR1. All four negative makes g_i < 0 everywhere.
  const GCoefficients gc = g_coefficients_raw(dSP0, dRT0, dTR1, dPS1);
  const double corners[4] = {payoff_gap(gc, 0.0, 0.0), payoff_gap(gc, 1.0, 0.0),
                             payoff_gap(gc, 0.0, 1.0),
                             payoff_gap(gc, 1.0, 1.0)};
  for (double v : corners) {
    if (!(v < 0.0)) {
      throw invalid_policy_error("greedy payoff gap must be negative on [0,1]^2");
    }
  }
}

Policy PayoffMatrices::to_policy() const {
  return Policy(A0(0, 1) - A0(1, 1),   // S0 - P0
                A0(0, 0) - A0(1, 0),   // R0 - T0
                A1(1, 0) - A1(0, 0),   // T1 - R1
                A1(1, 1) - A1(0, 1));  // P1 - S1
}

GCoefficients g_coefficients_raw(double dSP0, double dRT0, double dTR1,
                                 double dPS1) {
  GCoefficients gc;
  gc.a = dSP0 - dRT0 + dPS1 - dTR1;
  gc.b = dRT0 - dSP0;
  gc.c = -(dPS1 + dSP0);
  gc.d = dSP0;
  gc.Y = dTR1 * dSP0 - dRT0 * dPS1;
  return gc;
}

GCoefficients g_coefficients(const Policy& policy) {
  return g_coefficients_raw(policy.dSP0, policy.dRT0, policy.dTR1,
                            policy.dPS1);
}

GCoefficients g_coefficients(const GreedyPolicy& policy) {
  return g_coefficients_raw(policy.dSP0, policy.dRT0, policy.dTR1,
                            policy.dPS1);
}

double payoff_gap(const GCoefficients& gc, double x, double n) {
  check_unit_square(x, n);
  return gc.a * x * n + gc.b * x + gc.c * n + gc.d;
}

double dg_dn(const GCoefficients& gc, double x) { return gc.a * x + gc.c; }

Eigen::Vector2d payoffs_from_matrices(const PayoffMatrices& mats, double x,
                                      double n) {
  check_unit_square(x, n);
  return mats.blended(n) * Eigen::Vector2d(x, 1.0 - x);
}

bool in_region_V(const Policy& policy, double alpha, double theta,
                 double abar) {
  if (!(alpha > 0.0) || !(theta > 0.0) || !(abar >= 0.0)) {
    throw domain_error("in_region_V requires alpha, theta > 0 and abar >= 0");
  }
  const double lower = std::max(
      (abar - theta) / (alpha + abar) * policy.dSP0, -policy.dTR1);
  const double upper = policy.dTR1 / policy.dPS1 * policy.dSP0;
  return lower <= policy.dRT0 && policy.dRT0 < upper;
}

bool is_responsible(const Policy& policy, double alpha, double theta) {
  return in_region_V(policy, alpha, theta, 0.0);
}

}  // namespace commons
