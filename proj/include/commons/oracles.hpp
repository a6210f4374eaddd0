#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commons/extraction.hpp"
#include "commons/random.hpp"

namespace commons {

/// Outcome of one brute-force / numerical cross-check of a closed form.
struct OracleReport {
  std::string name;
  int instances_checked = 0;
  double max_abs_error = 0.0;
  std::string worst_instance;
  double tolerance = 0.0;
  bool pass = false;
};

/// Argmax of U_i over a uniform grid of the restricted set [0, cap].
/// Ties break toward the smaller rate. Independent of the best-response closed
/// forms: only the resource map enters.
double grid_best_response(double abar_minus, const GameInstance& game,
                          double resolution);

struct BrIterationResult {
  StrategyProfile profile;
  bool converged = false;
  int iterations = 0;
};

/// Synchronous best-response iteration. Convergence is declared when no
/// agent's full best-response update would move it by more than tol. Updates
/// are damped, with the damping factor halved each time the iteration stops
/// contracting, which tames the period-2 bouncing the cap branch induces.
/// Non-convergence is reported in the result, never thrown.
BrIterationResult br_iteration(const GameInstance& game, StrategyProfile init,
                               int max_iter = 10000, double tol = 1e-8);

/// Central finite-difference check (step 1e-5) that U_i'' <= 1e-6 at random
/// interior points of the restricted sets.
OracleReport fd_concavity_check(const GameInstance& game, int samples,
                                std::uint64_t seed);

/// Integrates the multi-population dynamics with every greedy agent at the
/// equilibrium rate, from 5 random interior starts, and compares the final
/// resource level with R_star. Cap-saturated equilibria sit on the
/// line-segment knife edge (abar* = theta), so they are run at
/// abar = theta - 1e-6 and checked for segment membership
/// (x -> 1, greedy -> 0, n below the segment's top) instead of pointwise
/// agreement, which no finite horizon can deliver there.
OracleReport ode_equilibrium_consistency(const GameInstance& game,
                                         const EquilibriumResult& eq,
                                         std::uint64_t seed);

/// Seeded random responsible instances with the distributions used by every
/// report: dSP0, dTR1, dPS1 ~ U(0.5,3), alpha ~ U(0.1,1), theta ~ U(0.5,2),
/// dRT0 uniform over the responsible interval.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed = 42) : rng_(seed) {}

  GameInstance next(int M = 1);

  /// A bounded draw of the other agents' total extraction, feasible for the
  /// instance's restricted sets.
  double draw_abar_minus(const GameInstance& game, double fill = 0.95);

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
};

/// Full verification battery at the given seed, one report per oracle.
std::vector<OracleReport> run_all_oracles(std::uint64_t seed = 42);

}  // namespace commons
