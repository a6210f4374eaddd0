#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "commons/dynamics.hpp"
#include "commons/policy.hpp"

namespace commons {

/// Flat `key = value` configuration block ('#' starts a comment). Keys mirror
/// CLI flag names; later assignments and flag overrides win.
class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::optional<std::string> get(const std::string& key) const;
  std::optional<double> get_real(const std::string& key) const;
  std::optional<int> get_int(const std::string& key) const;
  /// Comma-separated list of reals.
  std::optional<std::vector<double>> get_reals(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Builds a Policy from either the four payoff differences (dSP0, dRT0,
/// dTR1, dPS1) or the eight matrix entries (r1,s1,t1,p1,r0,s0,t0,p0).
/// Supplying both blocks, or an incomplete block, is an error.
Policy policy_from_config(const Config& cfg);

/// A complete simulation scenario for the multi-population dynamics.
struct Scenario {
  Policy policy;
  RateParams rates;
  State initial_state;
  double dt = kDefaultDt;
  double t_end = kDefaultTEnd;
  int stride = 1;
};

/// Scenario keys: the policy block, alpha, theta, eps, dt, t_end, stride,
/// greedy populations as greedy1, greedy2, ... = "alpha_i,theta_i" or
/// "alpha_i,theta_i,dSP0i,dRT0i,dTR1i,dPS1i", and the initial state x0, n0,
/// xg0 (comma list, or one value broadcast to all greedy populations).
Scenario scenario_from_config(const Config& cfg);

}  // namespace commons
