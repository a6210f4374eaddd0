#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "commons/dynamics.hpp"
#include "commons/extraction.hpp"

namespace commons {

struct OracleReport;

/// Numbers in CSV output carry 9 significant digits, '.' decimal, no locale.
std::string format_g9(double v);

std::string equilibrium_csv_header();
std::string equilibrium_csv_row(const EquilibriumRecord& rec);

nlohmann::json equilibrium_json(const EquilibriumRecord& rec);
nlohmann::json oracle_report_json(const OracleReport& report);

/// Header `t,x,x1..xM,n` plus one row per stored step (every stride-th).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          int stride = 1);

/// One-line rendering of an outcome classification.
std::string outcome_to_string(const OutcomeClass& outcome);

}  // namespace commons
