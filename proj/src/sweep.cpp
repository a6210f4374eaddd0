#include "commons/sweep.hpp"

#include <array>
#include <cmath>

#include "commons/serialize.hpp"

namespace commons {

namespace {

const std::array<std::string, 7> kAxisNames = {
    "dSP0", "dRT0", "dTR1", "dPS1", "alpha", "theta", "M"};

bool known_axis(const std::string& name) {
  for (const auto& n : kAxisNames) {
    if (n == name) return true;
  }
  return false;
}

void check_axis(const SweepAxis& axis) {
  if (!known_axis(axis.name)) {
    throw domain_error("unknown sweep axis '" + axis.name + "'");
  }
  if (axis.steps < 2) throw domain_error("axis steps must be >= 2");
  if (!(axis.max > axis.min)) throw domain_error("axis needs max > min");
}

double axis_value(const SweepAxis& axis, int k) {
  return axis.min + (axis.max - axis.min) * k / (axis.steps - 1);
}

SweepCell evaluate_cell(const SweepSpec::Fixed& base, const SweepAxis& a1,
                        double v1, const SweepAxis* a2, const double* v2) {
  SweepSpec::Fixed p = base;
  const auto apply = [&p](const std::string& name, double v) {
    if (name == "dSP0") p.dSP0 = v;
    else if (name == "dRT0") p.dRT0 = v;
    else if (name == "dTR1") p.dTR1 = v;
    else if (name == "dPS1") p.dPS1 = v;
    else if (name == "alpha") p.alpha = v;
    else if (name == "theta") p.theta = v;
    else p.M = static_cast<int>(std::lround(v));
  };
  apply(a1.name, v1);
  if (a2) apply(a2->name, *v2);

  SweepCell cell;
  cell.axis1_value = v1;
  if (v2) cell.axis2_value = *v2;
  try {
    const GameInstance game(p.M, Policy(p.dSP0, p.dRT0, p.dTR1, p.dPS1),
                            p.alpha, p.theta);
    const EquilibriumResult eq = symmetric_equilibrium(game);
    cell.regime = regime_name(eq.regime);
    cell.alpha_star = eq.alpha_star;
    cell.R_star = eq.R_star;
    cell.utility_star = eq.utility_star;
  } catch (const std::invalid_argument&) {
    cell.regime = "invalid";
  }
  return cell;
}

}  // namespace

void SweepSpec::validate() const {
  check_axis(axis1);
  if (axis2) {
    check_axis(*axis2);
    if (axis2->name == axis1.name) {
      throw domain_error("sweep axes must name distinct parameters");
    }
  }
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepCell> cells;
  const int n2 = spec.axis2 ? spec.axis2->steps : 1;
  cells.reserve(static_cast<std::size_t>(spec.axis1.steps) *
                static_cast<std::size_t>(n2));
  for (int i = 0; i < spec.axis1.steps; ++i) {
    const double v1 = axis_value(spec.axis1, i);
    if (!spec.axis2) {
      cells.push_back(
          evaluate_cell(spec.fixed, spec.axis1, v1, nullptr, nullptr));
      continue;
    }
    for (int j = 0; j < spec.axis2->steps; ++j) {
      const double v2 = axis_value(*spec.axis2, j);
      cells.push_back(
          evaluate_cell(spec.fixed, spec.axis1, v1, &*spec.axis2, &v2));
    }
  }
  return cells;
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const std::vector<SweepCell>& cells) {
  os << spec.axis1.name;
  if (spec.axis2) os << ',' << spec.axis2->name;
  os << ",regime,alpha_star,R_star,utility_star\n";
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_g9(*v) : std::string();
  };
  for (const SweepCell& c : cells) {
    os << format_g9(c.axis1_value);
    if (c.axis2_value) os << ',' << format_g9(*c.axis2_value);
    os << ',' << c.regime << ',' << opt(c.alpha_star) << ',' << opt(c.R_star)
       << ',' << opt(c.utility_star) << '\n';
  }
}

nlohmann::json sweep_json(const SweepSpec& spec,
                          const std::vector<SweepCell>& cells) {
  nlohmann::json rows = nlohmann::json::array();
  const auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
  };
  for (const SweepCell& c : cells) {
    nlohmann::json row;
    row[spec.axis1.name] = c.axis1_value;
    if (spec.axis2 && c.axis2_value) row[spec.axis2->name] = *c.axis2_value;
    row["regime"] = c.regime;
    row["alpha_star"] = opt(c.alpha_star);
    row["R_star"] = opt(c.R_star);
    row["utility_star"] = opt(c.utility_star);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EquilibriumRecord> limit_table(const Policy& policy, double alpha,
                                           double theta) {
  std::vector<EquilibriumRecord> rows;
  for (int M : {1, 2, 5, 10, 100, 1000}) {
    const GameInstance game(M, policy, alpha, theta);
    rows.push_back(make_record(game, symmetric_equilibrium(game)));
  }
  return rows;
}

}  // namespace commons
