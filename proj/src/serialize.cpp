#include "commons/serialize.hpp"

#include <cstdio>

#include "commons/oracles.hpp"

namespace commons {

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string equilibrium_csv_header() {
  return "M,dSP0,dRT0,dTR1,dPS1,alpha,theta,alpha_star,regime,abar_star,"
         "R_star,utility_star";
}

std::string equilibrium_csv_row(const EquilibriumRecord& rec) {
  std::string row = std::to_string(rec.M);
  for (double v : {rec.dSP0, rec.dRT0, rec.dTR1, rec.dPS1, rec.alpha,
                   rec.theta, rec.alpha_star}) {
    row += ',';
    row += format_g9(v);
  }
  row += ',';
  row += rec.regime;
  for (double v : {rec.abar_star, rec.R_star, rec.utility_star}) {
    row += ',';
    row += format_g9(v);
  }
  return row;
}

nlohmann::json equilibrium_json(const EquilibriumRecord& rec) {
  return {{"M", rec.M},
          {"dSP0", rec.dSP0},
          {"dRT0", rec.dRT0},
          {"dTR1", rec.dTR1},
          {"dPS1", rec.dPS1},
          {"alpha", rec.alpha},
          {"theta", rec.theta},
          {"alpha_star", rec.alpha_star},
          {"regime", rec.regime},
          {"abar_star", rec.abar_star},
          {"R_star", rec.R_star},
          {"utility_star", rec.utility_star}};
}

nlohmann::json oracle_report_json(const OracleReport& report) {
  return {{"name", report.name},
          {"instances_checked", report.instances_checked},
          {"max_abs_error", report.max_abs_error},
          {"worst_instance", report.worst_instance},
          {"tolerance", report.tolerance},
          {"pass", report.pass}};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          int stride) {
  if (stride < 1) stride = 1;
  const std::size_t m =
      traj.states.empty() ? 0 : static_cast<std::size_t>(traj.states[0].size()) - 2;
  os << "t,x";
  for (std::size_t i = 1; i <= m; ++i) os << ",x" << i;
  os << ",n\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % static_cast<std::size_t>(stride) != 0 && k + 1 != traj.size()) {
      continue;  // always keep the final row
    }
    os << format_g9(traj.times[k]);
    const State& s = traj.states[k];
    for (Eigen::Index i = 0; i < s.size(); ++i) os << ',' << format_g9(s(i));
    os << '\n';
  }
}

std::string outcome_to_string(const OutcomeClass& outcome) {
  if (const auto* s = std::get_if<Sustained>(&outcome)) {
    return "Sustained x_star=" + format_g9(s->x_star) +
           " n_star=" + format_g9(s->n_star);
  }
  if (const auto* o = std::get_if<OscillatingTOC>(&outcome)) {
    return o->closed_orbits ? "OscillatingTOC (neutral closed orbits)"
                            : "OscillatingTOC";
  }
  if (const auto* l = std::get_if<LineSegment>(&outcome)) {
    return "LineSegment n_upper=" + format_g9(l->n_upper);
  }
  return "Collapse";
}

}  // namespace commons
