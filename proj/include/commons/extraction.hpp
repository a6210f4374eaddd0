#pragma once

#include <string>
#include <vector>

#include "commons/policy.hpp"

namespace commons {

/// One instance of the constrained resource extraction game: M greedy agents
/// choosing extraction rates against a responsible population with policy
/// (dSP0, dRT0, dTR1, dPS1) and rates (alpha, theta). The policy must be
/// responsible, otherwise the coupled strategy sets are ill-posed.
class GameInstance {
 public:
  GameInstance(int M, const Policy& policy, double alpha, double theta);

  int M() const { return m_; }
  const Policy& policy() const { return policy_; }
  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  const GCoefficients& gc() const { return gc_; }

  /// Total extraction the policy can absorb when dRT0 <= 0:
  /// (alpha*dRT0 + theta*dSP0) / (dSP0 - dRT0). For dRT0 > 0 the binding
  /// capacity is theta itself.
  double extraction_capacity() const;

 private:
  int m_;
  Policy policy_;
  double alpha_;
  double theta_;
  GCoefficients gc_;
};

/// Extraction rates of the M agents.
struct StrategyProfile {
  std::vector<double> rates;

  explicit StrategyProfile(std::vector<double> rates_);

  int size() const { return static_cast<int>(rates.size()); }
  double abar() const;
  double abar_minus(int i) const;
};

enum class Regime { CapSaturated, InteriorEplus, InteriorEminus, InteriorLinear };

const char* regime_name(Regime r);

/// The unique symmetric Nash equilibrium and its induced outcome.
struct EquilibriumResult {
  double alpha_star;
  Regime regime;
  double abar_star;    // M * alpha_star (exactly theta when cap-saturated)
  double R_star;       // steady-state resource level at abar_star
  double utility_star; // alpha_star * R_star
};

/// Steady-state resource level R(abar) induced by total greedy extraction:
/// the sustained fixed-point value while abar < theta and the policy lies in
/// V(abar); the top of the fixed-point segment, dRT0/(dRT0+dTR1), at
/// abar == theta when dRT0 > 0; zero otherwise. Left-continuous at theta.
double resource_level(double abar, const GameInstance& game);

/// U_i = alpha_i * R(abar). Profiles outside the coupling constraint simply
/// earn zero through R's zero branch.
double utility(int i, const StrategyProfile& profile, const GameInstance& game);

/// Upper end of the restricted strategy set [0, cap] given the others' total
/// extraction. Throws empty_strategy_set_error when the set is empty.
double strategy_cap(double abar_minus, const GameInstance& game);

/// The dRT0 threshold C(abar_minus; dSP0) separating cap-saturated from
/// interior best responses; positive for abar_minus < theta, zero at theta,
/// decreasing in abar_minus.
double threshold_C(double abar_minus, const GameInstance& game);

/// Closed-form best response on the restricted strategy set.
double best_response(double abar_minus, const GameInstance& game);

/// True iff every unilateral deviation still leaves total extraction above
/// theta, so the profile is a resource-destroying equilibrium.
bool is_depleting_equilibrium(const StrategyProfile& profile,
                              const GameInstance& game);

/// The unique symmetric Nash equilibrium of the constrained game.
EquilibriumResult symmetric_equilibrium(const GameInstance& game);

/// Coefficients of the symmetric fixed-point quadratic
/// Q(gamma) = M^2 gamma^2 + K1 gamma + K0, valid off the a ~ 0 dead band.
struct SymmetricQuadratic {
  double K1;
  double K0;
  double residual(double gamma, int M) const;
};

SymmetricQuadratic symmetric_quadratic(const GameInstance& game);

/// Large-M limits of total equilibrium extraction and resource level.
struct LimitResult {
  double abar_inf;
  double R_inf;
};

LimitResult limits(const Policy& policy, double alpha, double theta);

/// Flat record of an equilibrium solve, for CSV/JSON export.
struct EquilibriumRecord {
  int M;
  double dSP0, dRT0, dTR1, dPS1;
  double alpha, theta;
  double alpha_star;
  std::string regime;
  double abar_star, R_star, utility_star;
};

EquilibriumRecord make_record(const GameInstance& game,
                              const EquilibriumResult& eq);

}  // namespace commons
