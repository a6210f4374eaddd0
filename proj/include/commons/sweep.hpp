#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "commons/extraction.hpp"

namespace commons {

/// One sweep axis: a named parameter scanned over [min, max] in `steps`
/// equally spaced values. The M axis rounds to integers.
struct SweepAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;
};

/// Names an equilibrium solve over a 1-D or 2-D grid of game parameters.
/// Axes pick from {dSP0, dRT0, dTR1, dPS1, alpha, theta, M}; `fixed` holds
/// the remaining values. Cells with an invalid instance (not responsible,
/// bad rates) are emitted as regime=invalid with empty numerics.
struct SweepSpec {
  SweepAxis axis1;
  std::optional<SweepAxis> axis2;

  struct Fixed {
    int M = 1;
    double dSP0 = 2.0;
    double dRT0 = 0.2;
    double dTR1 = 2.1;
    double dPS1 = 2.0;
    double alpha = 0.4;
    double theta = 1.0;
  } fixed;

  void validate() const;
};

struct SweepCell {
  double axis1_value = 0.0;
  std::optional<double> axis2_value;
  std::string regime;  // "invalid" outside the responsible region
  std::optional<double> alpha_star;
  std::optional<double> R_star;
  std::optional<double> utility_star;
};

/// Evaluates the grid in deterministic axis1-major order.
std::vector<SweepCell> run_sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<SweepCell>& cells);
nlohmann::json sweep_json(const SweepSpec& spec,
                          const std::vector<SweepCell>& cells);

/// Finite-M equilibria at M in {1, 2, 5, 10, 100, 1000}, used alongside the
/// large-M limits.
std::vector<EquilibriumRecord> limit_table(const Policy& policy, double alpha,
                                           double theta);

}  // namespace commons
