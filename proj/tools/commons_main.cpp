// Command-line front end for the resource extraction game library:
// closed-form equilibrium solves, parameter sweeps, trajectory simulation,
// large-M limits, and the brute-force verification battery.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "commons/config.hpp"
#include "commons/dynamics.hpp"
#include "commons/extraction.hpp"
#include "commons/oracles.hpp"
#include "commons/serialize.hpp"
#include "commons/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumericalFailure = 3;

struct GlobalOpts {
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw commons::domain_error("cannot write to output path: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

commons::SweepAxis parse_axis(const std::string& text) {
  commons::SweepAxis axis;
  std::istringstream in(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 4) {
    throw commons::domain_error("axis must be name:min:max:steps, got '" +
                                text + "'");
  }
  axis.name = parts[0];
  axis.min = std::stod(parts[1]);
  axis.max = std::stod(parts[2]);
  axis.steps = std::stoi(parts[3]);
  return axis;
}

// Flag values only apply when the user actually passed the flag, so config
// files can be overridden selectively.
struct MaybeFlag {
  double value = 0.0;
  CLI::Option* opt = nullptr;

  double resolve(const commons::Config& cfg, const std::string& key,
                 double fallback) const {
    if (opt != nullptr && opt->count() > 0) return value;
    if (const auto v = cfg.get_real(key)) return *v;
    return fallback;
  }
};

struct InstanceFlags {
  MaybeFlag dSP0, dRT0, dTR1, dPS1, alpha, theta;
  int M = 1;
  CLI::Option* m_opt = nullptr;
  std::string config_path;

  void add_policy_flags(CLI::App* cmd) {
    dSP0.opt = cmd->add_option("--dSP0", dSP0.value, "S0 - P0 payoff difference");
    dRT0.opt = cmd->add_option("--dRT0", dRT0.value, "R0 - T0 payoff difference");
    dTR1.opt = cmd->add_option("--dTR1", dTR1.value, "T1 - R1 payoff difference");
    dPS1.opt = cmd->add_option("--dPS1", dPS1.value, "P1 - S1 payoff difference");
    alpha.opt = cmd->add_option("--alpha", alpha.value,
                                "responsible extraction rate");
    theta.opt = cmd->add_option("--theta", theta.value,
                                "responsible restoration rate");
    cmd->add_option("--config", config_path,
                    "key-value config file; flags override file values");
  }

  void add_M_flag(CLI::App* cmd) {
    m_opt = cmd->add_option("--M", M, "number of greedy agents");
  }

  commons::Config merged_config() const {
    commons::Config cfg;
    if (!config_path.empty()) cfg = commons::Config::load(config_path);
    const auto put = [&cfg](const char* key, const MaybeFlag& f) {
      if (f.opt != nullptr && f.opt->count() > 0) {
        cfg.set(key, commons::format_g9(f.value));
      }
    };
    put("dSP0", dSP0);
    put("dRT0", dRT0);
    put("dTR1", dTR1);
    put("dPS1", dPS1);
    put("alpha", alpha);
    put("theta", theta);
    if (m_opt != nullptr && m_opt->count() > 0) {
      cfg.set("M", std::to_string(M));
    }
    return cfg;
  }

  commons::GameInstance make_instance() const {
    const commons::Config cfg = merged_config();
    return commons::GameInstance(
        cfg.get_int("M").value_or(1), commons::policy_from_config(cfg),
        cfg.get_real("alpha").value_or(0.4), cfg.get_real("theta").value_or(1.0));
  }
};

int cmd_equilibrium(const GlobalOpts& g, const InstanceFlags& flags) {
  const commons::GameInstance game = flags.make_instance();
  const commons::EquilibriumRecord rec =
      commons::make_record(game, commons::symmetric_equilibrium(game));
  Output out(g.out);
  if (g.format == "json") {
    out.stream() << commons::equilibrium_json(rec).dump(2) << '\n';
  } else {
    out.stream() << commons::equilibrium_csv_header() << '\n'
                 << commons::equilibrium_csv_row(rec) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const GlobalOpts& g, const InstanceFlags& flags,
              const std::string& axis1, const std::string& axis2) {
  commons::SweepSpec spec;
  spec.axis1 = parse_axis(axis1);
  if (!axis2.empty()) spec.axis2 = parse_axis(axis2);
  const commons::Config cfg = flags.merged_config();
  spec.fixed.M = cfg.get_int("M").value_or(spec.fixed.M);
  spec.fixed.dSP0 = cfg.get_real("dSP0").value_or(spec.fixed.dSP0);
  spec.fixed.dRT0 = cfg.get_real("dRT0").value_or(spec.fixed.dRT0);
  spec.fixed.dTR1 = cfg.get_real("dTR1").value_or(spec.fixed.dTR1);
  spec.fixed.dPS1 = cfg.get_real("dPS1").value_or(spec.fixed.dPS1);
  spec.fixed.alpha = cfg.get_real("alpha").value_or(spec.fixed.alpha);
  spec.fixed.theta = cfg.get_real("theta").value_or(spec.fixed.theta);

  const std::vector<commons::SweepCell> cells = commons::run_sweep(spec);
  Output out(g.out);
  if (g.format == "json") {
    out.stream() << commons::sweep_json(spec, cells).dump(2) << '\n';
  } else {
    commons::write_sweep_csv(out.stream(), spec, cells);
  }
  return kExitOk;
}

int cmd_simulate(const GlobalOpts& g, const InstanceFlags& flags,
                 const std::vector<std::string>& greedy_flags,
                 const MaybeFlag& eps, const MaybeFlag& dt,
                 const MaybeFlag& t_end, const MaybeFlag& x0,
                 const MaybeFlag& n0, const std::string& xg0, int stride,
                 CLI::Option* stride_opt) {
  commons::Config cfg = flags.merged_config();
  const auto put = [&cfg](const char* key, const MaybeFlag& f) {
    if (f.opt != nullptr && f.opt->count() > 0) {
      cfg.set(key, commons::format_g9(f.value));
    }
  };
  put("eps", eps);
  put("dt", dt);
  put("t_end", t_end);
  put("x0", x0);
  put("n0", n0);
  if (!xg0.empty()) cfg.set("xg0", xg0);
  if (stride_opt->count() > 0) cfg.set("stride", std::to_string(stride));
  if (!greedy_flags.empty()) {
    for (std::size_t k = 1;; ++k) {  // flags replace the whole file list
      const std::string key = "greedy" + std::to_string(k);
      if (!cfg.has(key)) break;
      cfg.set(key, "");
    }
    commons::Config cleaned;
    for (const auto& [key, value] : cfg.entries()) {
      if (!(key.rfind("greedy", 0) == 0 && value.empty())) {
        cleaned.set(key, value);
      }
    }
    cfg = cleaned;
    for (std::size_t k = 0; k < greedy_flags.size(); ++k) {
      cfg.set("greedy" + std::to_string(k + 1), greedy_flags[k]);
    }
  }

  const commons::Scenario sc = commons::scenario_from_config(cfg);
  const commons::MultiPopSystem sys(sc.rates, sc.policy);
  const commons::Trajectory traj =
      commons::integrate(sys, sc.initial_state, sc.t_end, sc.dt);

  Output out(g.out);
  commons::write_trajectory_csv(out.stream(), traj, sc.stride);
  const commons::State& last = traj.final_state();
  out.stream() << "# final: t=" << commons::format_g9(traj.times.back());
  out.stream() << " x=" << commons::format_g9(commons::resp_share(last));
  for (Eigen::Index i = 1; i + 1 < last.size(); ++i) {
    out.stream() << " x" << i << "=" << commons::format_g9(last(i));
  }
  out.stream() << " n=" << commons::format_g9(commons::resource(last)) << '\n';
  out.stream() << "# classify_multi: "
               << commons::outcome_to_string(
                      commons::classify_multi(sc.rates, sc.policy))
               << '\n';
  return kExitOk;
}

int cmd_limits(const GlobalOpts& g, const InstanceFlags& flags) {
  const commons::Config cfg = flags.merged_config();
  const commons::Policy policy = commons::policy_from_config(cfg);
  const double alpha = cfg.get_real("alpha").value_or(0.4);
  const double theta = cfg.get_real("theta").value_or(1.0);
  const commons::LimitResult lim = commons::limits(policy, alpha, theta);
  const std::vector<commons::EquilibriumRecord> table =
      commons::limit_table(policy, alpha, theta);

  Output out(g.out);
  if (g.format == "json") {
    nlohmann::json doc;
    doc["abar_inf"] = lim.abar_inf;
    doc["R_inf"] = lim.R_inf;
    doc["table"] = nlohmann::json::array();
    for (const auto& rec : table) {
      doc["table"].push_back(commons::equilibrium_json(rec));
    }
    out.stream() << doc.dump(2) << '\n';
  } else {
    out.stream() << "# abar_inf=" << commons::format_g9(lim.abar_inf)
                 << " R_inf=" << commons::format_g9(lim.R_inf) << '\n';
    out.stream() << "M,alpha_star,abar_star,R_star,utility_star\n";
    for (const auto& rec : table) {
      out.stream() << rec.M << ',' << commons::format_g9(rec.alpha_star) << ','
                   << commons::format_g9(rec.abar_star) << ','
                   << commons::format_g9(rec.R_star) << ','
                   << commons::format_g9(rec.utility_star) << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const GlobalOpts& g) {
  const std::vector<commons::OracleReport> reports =
      commons::run_all_oracles(g.seed);
  Output out(g.out);
  bool all_pass = true;
  for (const auto& rep : reports) {
    out.stream() << commons::oracle_report_json(rep).dump() << '\n';
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"commons: equilibria and dynamics of hierarchical "
               "common-pool resource extraction games"};
  app.require_subcommand(1);
  // Global flags (--seed/--out/--format) may appear after the subcommand.
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "seed for randomized verification")
      ->capture_default_str();
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* eq_cmd = app.add_subcommand(
      "equilibrium", "solve the unique symmetric Nash equilibrium");
  InstanceFlags eq_flags;
  eq_flags.add_policy_flags(eq_cmd);
  eq_flags.add_M_flag(eq_cmd);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "equilibrium solves over a parameter grid");
  InstanceFlags sweep_flags;
  sweep_flags.add_policy_flags(sweep_cmd);
  sweep_flags.add_M_flag(sweep_cmd);
  std::string axis1, axis2;
  sweep_cmd->add_option("--axis1", axis1, "first axis as name:min:max:steps")
      ->required();
  sweep_cmd->add_option("--axis2", axis2, "second axis as name:min:max:steps");

  auto* sim_cmd = app.add_subcommand(
      "simulate", "integrate the coupled population/resource dynamics");
  InstanceFlags sim_flags;
  sim_flags.add_policy_flags(sim_cmd);
  std::vector<std::string> greedy_flags;
  MaybeFlag eps, dt, t_end, x0, n0;
  std::string xg0;
  int stride = 1;
  sim_cmd->add_option("--greedy", greedy_flags,
                      "greedy population 'alpha_i,theta_i' or "
                      "'alpha_i,theta_i,dSP0i,dRT0i,dTR1i,dPS1i' (repeatable)");
  eps.opt = sim_cmd->add_option("--eps", eps.value, "resource timescale factor");
  dt.opt = sim_cmd->add_option("--dt", dt.value, "integration step");
  t_end.opt = sim_cmd->add_option("--t_end", t_end.value, "time horizon");
  x0.opt = sim_cmd->add_option("--x0", x0.value, "initial responsible share");
  n0.opt = sim_cmd->add_option("--n0", n0.value, "initial resource level");
  sim_cmd->add_option("--xg0", xg0,
                      "initial greedy shares, comma list or one value");
  CLI::Option* stride_opt =
      sim_cmd->add_option("--stride", stride, "keep every k-th row");

  auto* limits_cmd = app.add_subcommand(
      "limits", "large-M limits plus a finite-M equilibrium table");
  InstanceFlags limits_flags;
  limits_flags.add_policy_flags(limits_cmd);

  auto* verify_cmd = app.add_subcommand(
      "verify", "run every closed form against its brute-force oracle");
  (void)verify_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (eq_cmd->parsed()) return cmd_equilibrium(g, eq_flags);
    if (sweep_cmd->parsed()) return cmd_sweep(g, sweep_flags, axis1, axis2);
    if (sim_cmd->parsed()) {
      return cmd_simulate(g, sim_flags, greedy_flags, eps, dt, t_end, x0, n0,
                          xg0, stride, stride_opt);
    }
    if (limits_cmd->parsed()) return cmd_limits(g, limits_flags);
    if (verify_cmd->parsed()) return cmd_verify(g);
  } catch (const commons::non_finite_state_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
  return kExitOk;
}
