#include "commons/extraction.hpp"

#include <algorithm>
#include <cmath>

namespace commons {

namespace {

// |a| below this is routed to the a = 0 linear formulas; the E_+- and F_i
// expressions divide by a.
constexpr double kLinearDeadBand = 1e-9;

// Round-off guard for radicands proven non-negative: clamp slightly negative
// values, treat anything worse as an ill-posed instance.
double checked_sqrt(double rad, double scale) {
  if (rad >= 0.0) return std::sqrt(rad);
  if (rad >= -1e-12 * std::max(1.0, scale)) return 0.0;
  throw invalid_instance_error("negative radicand in closed form");
}

}  // namespace

GameInstance::GameInstance(int M, const Policy& policy, double alpha,
                           double theta)
    : m_(M), policy_(policy), alpha_(alpha), theta_(theta),
      gc_(g_coefficients(policy)) {
  if (M < 1) throw invalid_instance_error("M must be a positive integer");
  if (!(alpha > 0.0) || !(theta > 0.0)) {
    throw invalid_instance_error("alpha and theta must be > 0");
  }
  if (!is_responsible(policy, alpha, theta)) {
    throw invalid_instance_error(
        "policy is not responsible: need max{-(theta/alpha)*dSP0, -dTR1} <= "
        "dRT0 < (dTR1/dPS1)*dSP0");
  }
}

double GameInstance::extraction_capacity() const {
  return (alpha_ * policy_.dRT0 + theta_ * policy_.dSP0) /
         (policy_.dSP0 - policy_.dRT0);
}

StrategyProfile::StrategyProfile(std::vector<double> rates_)
    : rates(std::move(rates_)) {
  for (double r : rates) {
    if (!(r >= 0.0)) throw domain_error("extraction rates must be >= 0");
  }
}

double StrategyProfile::abar() const {
  double total = 0.0;
  for (double r : rates) total += r;
  return total;
}

double StrategyProfile::abar_minus(int i) const {
  if (i < 0 || i >= size()) throw domain_error("agent index out of range");
  return abar() - rates[static_cast<std::size_t>(i)];
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::CapSaturated: return "CapSaturated";
    case Regime::InteriorEplus: return "InteriorEplus";
    case Regime::InteriorEminus: return "InteriorEminus";
    case Regime::InteriorLinear: return "InteriorLinear";
  }
  return "unknown";
}

double resource_level(double abar, const GameInstance& game) {
  const Policy& p = game.policy();
  const GCoefficients& gc = game.gc();
  if (abar < game.theta()) {
    if (!in_region_V(p, game.alpha(), game.theta(), abar)) return 0.0;
    const double x = (game.alpha() + abar) / (game.alpha() + game.theta());
    return -payoff_gap(gc, x, 0.0) / dg_dn(gc, x);
  }
  if (abar == game.theta() && p.dRT0 > 0.0) {
    // Highest point of the fixed-point segment; agrees with the limit of the
    // branch above, so R is left-continuous at theta.
    return p.dRT0 / (p.dRT0 + p.dTR1);
  }
  return 0.0;
}

double utility(int i, const StrategyProfile& profile,
               const GameInstance& game) {
  if (i < 0 || i >= profile.size()) throw domain_error("agent index out of range");
  return profile.rates[static_cast<std::size_t>(i)] *
         resource_level(profile.abar(), game);
}

double strategy_cap(double abar_minus, const GameInstance& game) {
  if (!(abar_minus >= 0.0)) throw domain_error("abar_minus must be >= 0");
  const Policy& p = game.policy();
  double cap;
  if (p.dRT0 > 0.0) {
    cap = game.theta() - abar_minus;
  } else {
    cap = game.extraction_capacity() - abar_minus;
  }
  if (cap < 0.0) {
    throw empty_strategy_set_error("restricted strategy set is empty");
  }
  return cap;
}

double threshold_C(double abar_minus, const GameInstance& game) {
  if (!(abar_minus >= 0.0) || !(abar_minus <= game.theta())) {
    throw domain_error("threshold_C requires 0 <= abar_minus <= theta");
  }
  const Policy& p = game.policy();
  const double q = (game.theta() - abar_minus) / (game.alpha() + game.theta());
  const double B = p.dTR1 + q * p.dPS1;
  const double rad = B * B + 4.0 * q * p.dTR1 * p.dSP0;
  return 0.5 * (-B + checked_sqrt(rad, B * B + std::abs(4.0 * q * p.dTR1 * p.dSP0)));
}

namespace {

// Interior critical point of U_i given the others' total extraction. Written
// with the conjugate of the textbook root so the 1/a factor cancels; the same
// expression then covers a = 0 (where it reduces to the linear-case formula).
double interior_best_response(double abar_minus, const GameInstance& game) {
  const GCoefficients& gc = game.gc();
  const double span = game.alpha() + game.theta();
  const double x_hat = (game.alpha() + abar_minus) / span;
  const double G = dg_dn(gc, x_hat);        // < 0
  const double g_r = payoff_gap(gc, x_hat, 0.0);
  const double rad = gc.b * G * gc.Y;       // b < 0 here, so rad > 0
  const double s = checked_sqrt(rad, std::abs(rad)) / gc.b;
  return -span * G * g_r / (gc.b * (s + G));
}

}  // namespace

double best_response(double abar_minus, const GameInstance& game) {
  const double cap = strategy_cap(abar_minus, game);
  const Policy& p = game.policy();
  if (p.dRT0 >= threshold_C(std::min(abar_minus, game.theta()), game)) {
    return cap;  // U_i is increasing on the whole restricted set
  }
  double br;
  if (std::abs(game.gc().a) < kLinearDeadBand) {
    br = 0.5 * (game.extraction_capacity() - abar_minus);
  } else {
    br = interior_best_response(abar_minus, game);
  }
  return std::clamp(br, 0.0, cap);
}

bool is_depleting_equilibrium(const StrategyProfile& profile,
                              const GameInstance& game) {
  const double total = profile.abar();
  for (double r : profile.rates) {
    if (!(total - r > game.theta())) return false;
  }
  return !profile.rates.empty();
}

SymmetricQuadratic symmetric_quadratic(const GameInstance& game) {
  const GCoefficients& gc = game.gc();
  if (std::abs(gc.a) < kLinearDeadBand) {
    throw domain_error("symmetric quadratic undefined in the a ~ 0 dead band");
  }
  const double span = game.alpha() + game.theta();
  const double x_r = game.alpha() / span;
  const double G = dg_dn(gc, x_r);
  const double g_r = payoff_gap(gc, x_r, 0.0);
  const double M = static_cast<double>(game.M());
  SymmetricQuadratic q;
  q.K1 = span / gc.a * (2.0 * M * G - (M - 1.0) * gc.Y / gc.b);
  q.K0 = span * span * G * g_r / (gc.a * gc.b);
  return q;
}

double SymmetricQuadratic::residual(double gamma, int M) const {
  const double m2 = static_cast<double>(M) * static_cast<double>(M);
  const double t1 = m2 * gamma * gamma;
  const double t2 = K1 * gamma;
  const double t3 = K0;
  const double scale =
      std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1e-300});
  return std::abs(t1 + t2 + t3) / scale;
}

EquilibriumResult symmetric_equilibrium(const GameInstance& game) {
  const Policy& p = game.policy();
  const GCoefficients& gc = game.gc();
  const double M = static_cast<double>(game.M());
  const double theta = game.theta();

  EquilibriumResult eq{};
  const double C_M = threshold_C((M - 1.0) / M * theta, game);
  if (p.dRT0 >= C_M) {
    eq.regime = Regime::CapSaturated;
    eq.alpha_star = theta / M;
    eq.abar_star = theta;  // M * alpha_star in exact arithmetic
    eq.R_star = p.dRT0 / (p.dRT0 + p.dTR1);
  } else if (std::abs(gc.a) < kLinearDeadBand) {
    eq.regime = Regime::InteriorLinear;
    eq.alpha_star = game.extraction_capacity() / (M + 1.0);
    eq.abar_star = M * eq.alpha_star;
    eq.R_star = resource_level(eq.abar_star, game);
  } else {
    const double span = game.alpha() + theta;
    const double G = dg_dn(gc, game.alpha() / span);
    const SymmetricQuadratic quad = symmetric_quadratic(game);

    // Discriminant K1^2 - 4 M^2 K0 in product form (no cancellation):
    //   (span^2 Y / (a^2 b)) * (4 M G + (M-1)^2 Y / b),
    // positive since G < 0, b < 0, Y > 0.
    const double outer = span * span * gc.Y / (gc.a * gc.a * gc.b);
    const double inner = 4.0 * M * G + (M - 1.0) * (M - 1.0) * gc.Y / gc.b;
    const double scale = std::abs(outer) * (std::abs(4.0 * M * G) +
                                            (M - 1.0) * (M - 1.0) *
                                                std::abs(gc.Y / gc.b));
    const double sqrt_disc = checked_sqrt(outer * inner, scale);

    // Stable root selection: E_- for a > 0, E_+ for a < 0. Both equal
    // K0 / qq with qq = -(K1 + sign(K1) sqrt_disc)/2.
    const double sign_K1 = quad.K1 < 0.0 ? -1.0 : 1.0;
    const double qq = -0.5 * (quad.K1 + sign_K1 * sqrt_disc);
    eq.regime = gc.a > 0.0 ? Regime::InteriorEminus : Regime::InteriorEplus;
    eq.alpha_star = quad.K0 / qq;
    eq.abar_star = M * eq.alpha_star;
    eq.R_star = resource_level(eq.abar_star, game);
  }
  eq.utility_star = eq.alpha_star * eq.R_star;
  return eq;
}

LimitResult limits(const Policy& policy, double alpha, double theta) {
  // Only posed for responsible policies; reuse the instance validation.
  const GameInstance game(1, policy, alpha, theta);
  if (policy.dRT0 > 0.0) {
    return {theta, policy.dRT0 / (policy.dRT0 + policy.dTR1)};
  }
  return {game.extraction_capacity(), 0.0};
}

EquilibriumRecord make_record(const GameInstance& game,
                              const EquilibriumResult& eq) {
  const Policy& p = game.policy();
  return {game.M(),  p.dSP0,        p.dRT0,
          p.dTR1,    p.dPS1,        game.alpha(),
          game.theta(), eq.alpha_star, regime_name(eq.regime),
          eq.abar_star, eq.R_star,     eq.utility_star};
}

}  // namespace commons
