#pragma once

#include <Eigen/Dense>

#include "commons/errors.hpp"

namespace commons {

// Payoffs enter every formula only through four differences. Subscript 1
// refers to the replete environment, subscript 0 to the depleted one.
//
//   dSP0 = S0 - P0,  dRT0 = R0 - T0,  dTR1 = T1 - R1,  dPS1 = P1 - S1.

/// Deplete/replete payoff differences of the responsible population.
/// Construction enforces dTR1, dPS1 > 0 (high consumption dominant when the
/// resource is abundant) and dSP0 > -dPS1, dRT0 > -dTR1 (the cooperator
/// advantage falls as the resource recovers).
struct Policy {
  double dSP0;
  double dRT0;
  double dTR1;
  double dPS1;

  Policy(double dSP0_, double dRT0_, double dTR1_, double dPS1_);
};

/// Payoff differences of a greedy population: high consumption is dominant in
/// both environment states, so its payoff gap g_i is negative everywhere on
/// [0,1]^2 and its cooperator share decays to zero.
struct GreedyPolicy {
  double dSP0;
  double dRT0;
  double dTR1;
  double dPS1;

  GreedyPolicy(double dSP0_, double dRT0_, double dTR1_, double dPS1_);

  /// Sign pattern every greedy population must satisfy.
  static GreedyPolicy default_policy() { return {-1.0, -1.0, 2.1, 2.0}; }
};

/// Full 2x2 payoff matrices for the replete (A1) and deplete (A0) states.
/// Row/column 1 is the low consumer, row/column 2 the high consumer.
struct PayoffMatrices {
  Eigen::Matrix2d A1;
  Eigen::Matrix2d A0;

  /// Blend n*A1 + (1-n)*A0.
  Eigen::Matrix2d blended(double n) const { return n * A1 + (1.0 - n) * A0; }

  /// Derive the payoff-difference representation; validates the assumptions.
  Policy to_policy() const;
};

/// Coefficients of the bilinear payoff gap g(x,n) = a*x*n + b*x + c*n + d,
/// plus the invariant Y = b*c - a*d = dTR1*dSP0 - dRT0*dPS1.
struct GCoefficients {
  double a;
  double b;
  double c;
  double d;
  double Y;
};

/// Coefficients from raw differences, no assumption checks. Shared by the
/// responsible and greedy policies, whose sign constraints differ.
GCoefficients g_coefficients_raw(double dSP0, double dRT0, double dTR1,
                                 double dPS1);

GCoefficients g_coefficients(const Policy& policy);
GCoefficients g_coefficients(const GreedyPolicy& policy);

/// g(x,n) for (x,n) in the unit square.
double payoff_gap(const GCoefficients& gc, double x, double n);

/// dg/dn(x) = a*x + c; independent of n.
double dg_dn(const GCoefficients& gc, double x);

/// Per-type payoffs (pi_L, pi_H) at population share x and resource level n.
/// pi_L - pi_H equals payoff_gap of the derived differences.
Eigen::Vector2d payoffs_from_matrices(const PayoffMatrices& mats, double x,
                                      double n);

/// Membership in V(abar): the responsible policies that still sustain the
/// resource against total greedy extraction abar,
///   max{ (abar-theta)/(alpha+abar) * dSP0, -dTR1 } <= dRT0
///                                          < (dTR1/dPS1) * dSP0.
/// Exact floating-point comparisons, no tolerance band.
bool in_region_V(const Policy& policy, double alpha, double theta,
                 double abar);

/// V(0) membership: the policy sustains the resource on its own.
bool is_responsible(const Policy& policy, double alpha, double theta);

}  // namespace commons
