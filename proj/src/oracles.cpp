#include "commons/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "commons/dynamics.hpp"
#include "commons/serialize.hpp"

namespace commons {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const GameInstance& g) {
  const Policy& p = g.policy();
  return "M=" + std::to_string(g.M()) + " dSP0=" + format_g9(p.dSP0) +
         " dRT0=" + format_g9(p.dRT0) + " dTR1=" + format_g9(p.dTR1) +
         " dPS1=" + format_g9(p.dPS1) + " alpha=" + format_g9(g.alpha()) +
         " theta=" + format_g9(g.theta());
}

double u_of(const GameInstance& game, double abar_minus, double a_i) {
  return a_i * resource_level(abar_minus + a_i, game);
}

void track(OracleReport& rep, double err, const std::string& instance) {
  if (err > rep.max_abs_error) {
    rep.max_abs_error = err;
    rep.worst_instance = instance;
  }
}

}  // namespace

double grid_best_response(double abar_minus, const GameInstance& game,
                          double resolution) {
  if (!(resolution > 0.0)) throw domain_error("resolution must be > 0");
  const double cap = strategy_cap(abar_minus, game);
  const long long n = static_cast<long long>(std::floor(cap / resolution + 1e-9));
  double best_a = 0.0;
  double best_u = u_of(game, abar_minus, 0.0);
  for (long long k = 1; k <= n; ++k) {
    const double a = static_cast<double>(k) * resolution;
    const double u = u_of(game, abar_minus, a);
    if (u > best_u) {
      best_u = u;
      best_a = a;
    }
  }
  if (static_cast<double>(n) * resolution < cap) {
    const double u = u_of(game, abar_minus, cap);
    if (u > best_u) best_a = cap;
  }
  return best_a;
}

BrIterationResult br_iteration(const GameInstance& game, StrategyProfile init,
                               int max_iter, double tol) {
  if (init.size() != game.M()) {
    throw domain_error("profile size must equal M");
  }
  std::vector<double>& a = init.rates;
  const int m = init.size();
  std::vector<double> target(static_cast<std::size_t>(m));
  double damping = 1.0;
  double prev_residual = kInf;

  for (int iter = 1; iter <= max_iter; ++iter) {
    double total = 0.0;
    for (double v : a) total += v;
    double residual = 0.0;
    for (int i = 0; i < m; ++i) {
      const double am = std::max(total - a[static_cast<std::size_t>(i)], 0.0);
      double t;
      try {
        t = best_response(am, game);
      } catch (const empty_strategy_set_error&) {
        t = 0.0;  // the others already destroy the resource; extracting is futile
      }
      target[static_cast<std::size_t>(i)] = t;
      residual = std::max(residual, std::abs(t - a[static_cast<std::size_t>(i)]));
    }
    if (residual < tol) {
      return {StrategyProfile(a), true, iter};
    }
    if (residual >= prev_residual) {
      damping = std::max(0.5 * damping, 1.0 / 1024.0);
    }
    for (int i = 0; i < m; ++i) {
      auto& ai = a[static_cast<std::size_t>(i)];
      ai = (1.0 - damping) * ai + damping * target[static_cast<std::size_t>(i)];
    }
    prev_residual = residual;
  }
  return {StrategyProfile(a), false, max_iter};
}

OracleReport fd_concavity_check(const GameInstance& game, int samples,
                                std::uint64_t seed) {
  if (samples <= 0) throw domain_error("samples must be > 0");
  Rng rng(seed);
  OracleReport rep;
  rep.name = "fd_concavity";
  rep.tolerance = 1e-6;
  rep.max_abs_error = -kInf;

  const double h = 1e-5;
  const double margin = 1e-4;
  const double max_am = game.policy().dRT0 > 0.0 ? game.theta()
                                                 : game.extraction_capacity();
  for (int s = 0; s < samples; ++s) {
    double am = 0.0, cap = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      am = rng.uniform(0.0, 0.95 * max_am);
      cap = strategy_cap(am, game);
      if (cap > 2.0 * (margin + h)) {
        found = true;
        break;
      }
    }
    if (!found) continue;
    const double a_i = rng.uniform(margin + h, cap - margin - h);
    const double fd = (u_of(game, am, a_i + h) - 2.0 * u_of(game, am, a_i) +
                       u_of(game, am, a_i - h)) /
                      (h * h);
    ++rep.instances_checked;
    track(rep, fd, describe(game) + " abar_minus=" + format_g9(am) +
                       " alpha_i=" + format_g9(a_i));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

OracleReport ode_equilibrium_consistency(const GameInstance& game,
                                         const EquilibriumResult& eq,
                                         std::uint64_t seed) {
  Rng rng(seed);
  OracleReport rep;
  rep.name = "ode_equilibrium_consistency";
  rep.tolerance = 1e-3;

  const bool cap_case = eq.regime == Regime::CapSaturated;
  const double alpha_run =
      cap_case ? (game.theta() - 1e-6) / game.M() : eq.alpha_star;
  std::vector<GreedyPopulation> greedy(
      static_cast<std::size_t>(game.M()),
      GreedyPopulation(alpha_run, 1.0));
  const RateParams rates(game.alpha(), game.theta(), 1.0, greedy);
  const MultiPopSystem sys(rates, game.policy());

  for (int run = 0; run < 5; ++run) {
    State s0(game.M() + 2);
    for (Eigen::Index i = 0; i < s0.size(); ++i) {
      s0(i) = rng.uniform(0.05, 0.95);
    }
    const IntegrationResult res =
        integrate_to_steady(sys, s0, kDefaultTEnd, kDefaultDt);
    const double n_f = resource(res.final_state);
    double err;
    if (cap_case) {
      // On the knife edge the attractor is a segment of fixed points; check
      // membership rather than a pointwise limit.
      err = std::max(n_f - eq.R_star, 1.0 - resp_share(res.final_state));
      err = std::max(err, greedy_shares(res.final_state).maxCoeff());
      err = std::max(err, 0.0);
    } else {
      err = std::abs(n_f - eq.R_star);
    }
    ++rep.instances_checked;
    track(rep, err, describe(game) + " run=" + std::to_string(run));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

GameInstance InstanceGenerator::next(int M) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double dSP0 = rng_.uniform(0.5, 3.0);
    const double dTR1 = rng_.uniform(0.5, 3.0);
    const double dPS1 = rng_.uniform(0.5, 3.0);
    const double alpha = rng_.uniform(0.1, 1.0);
    const double theta = rng_.uniform(0.5, 2.0);
    const double lo = std::max(-(theta / alpha) * dSP0, -dTR1);
    const double hi = dTR1 / dPS1 * dSP0;
    const double dRT0 = lo + rng_.uniform(1e-6, 1.0 - 1e-6) * (hi - lo);
    try {
      return GameInstance(M, Policy(dSP0, dRT0, dTR1, dPS1), alpha, theta);
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::logic_error("instance generator failed to produce a valid draw");
}

double InstanceGenerator::draw_abar_minus(const GameInstance& game,
                                          double fill) {
  const double max_am = game.policy().dRT0 > 0.0
                            ? game.theta()
                            : game.extraction_capacity();
  return rng_.uniform(0.0, fill * max_am);
}

namespace {

std::uint64_t subseed(std::uint64_t seed, int k) {
  return seed * 1000003ULL + 10007ULL * static_cast<std::uint64_t>(k);
}

// --- closed-form best response vs grid search -------------------------------

OracleReport oracle_best_response_grid(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "best_response_vs_grid";
  rep.tolerance = 2e-5;
  InstanceGenerator gen(seed);

  // Fill four strata: cap branch, interior a>0, interior a<0, interior
  // dRT0 <= 0, so both best-response branches and both signs of a are exercised.
  constexpr int kPerBucket = 50;
  int buckets[4] = {0, 0, 0, 0};
  int attempts = 0;
  while (rep.instances_checked < 4 * kPerBucket && attempts < 200000) {
    ++attempts;
    const GameInstance game = gen.next(1);
    const double am = gen.draw_abar_minus(game);
    const double C = threshold_C(std::min(am, game.theta()), game);
    int idx;
    if (game.policy().dRT0 >= C) {
      idx = 0;
    } else if (game.policy().dRT0 <= 0.0) {
      idx = 3;
    } else {
      idx = game.gc().a > 0.0 ? 1 : 2;
    }
    if (buckets[idx] >= kPerBucket) continue;
    ++buckets[idx];
    const double closed = best_response(am, game);
    const double grid = grid_best_response(am, game, 1e-5);
    ++rep.instances_checked;
    track(rep, std::abs(closed - grid),
          describe(game) + " abar_minus=" + format_g9(am));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance &&
             rep.instances_checked == 4 * kPerBucket;
  return rep;
}

// --- symmetric-equilibrium closed form vs best-response iteration -----------------------

OracleReport oracle_equilibrium_iteration(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "equilibrium_vs_br_iteration";
  rep.tolerance = 1e-6;
  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const int M = k % 8 + 1;
    const GameInstance game = gen.next(M);
    const EquilibriumResult eq = symmetric_equilibrium(game);
    StrategyProfile init(std::vector<double>(
        static_cast<std::size_t>(M), game.theta() / (2.0 * M)));
    const BrIterationResult res = br_iteration(game, init, 20000, 1e-8);
    double err;
    std::string note = describe(game);
    if (!res.converged) {
      err = kInf;
      note += " (iteration did not converge)";
    } else {
      err = 0.0;
      for (double v : res.profile.rates) {
        err = std::max(err, std::abs(v - eq.alpha_star));
      }
    }
    ++rep.instances_checked;
    track(rep, err, note);
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

// --- quadratic residual of the interior equilibrium -------------------------

OracleReport oracle_quadratic_residual(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "equilibrium_quadratic_residual";
  rep.tolerance = 1e-9;
  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const int M = k % 8 + 1;
    const GameInstance game = gen.next(M);
    const EquilibriumResult eq = symmetric_equilibrium(game);
    if (eq.regime != Regime::InteriorEplus &&
        eq.regime != Regime::InteriorEminus) {
      continue;
    }
    const SymmetricQuadratic quad = symmetric_quadratic(game);
    ++rep.instances_checked;
    track(rep, quad.residual(eq.alpha_star, game.M()), describe(game));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

// --- threshold C vs a bisection root of D'(cap) ------------------------------

// D'(theta - abar_minus) as a function of the candidate dRT0, assembled from
// the resource map and its analytic derivative rather than from the C formula.
double dprime_at_cap(const GameInstance& game, double abar_minus,
                     double dRT0_candidate) {
  const Policy& p = game.policy();
  const double span = game.alpha() + game.theta();
  const double Y = p.dTR1 * p.dSP0 - dRT0_candidate * p.dPS1;
  const double denom = dRT0_candidate + p.dTR1;
  return dRT0_candidate / denom -
         (game.theta() - abar_minus) * Y / (span * denom * denom);
}

OracleReport oracle_threshold_bisection(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "threshold_C_vs_bisection";
  rep.tolerance = 1e-9;
  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const GameInstance game = gen.next(1);
    const double am = gen.rng().uniform(0.0, 0.99 * game.theta());
    double lo = 0.0;
    double hi = game.policy().dTR1 / game.policy().dPS1 * game.policy().dSP0;
    // D'(cap) is negative at dRT0 = 0 and positive where Y vanishes.
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dprime_at_cap(game, am, mid) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double root = 0.5 * (lo + hi);
    ++rep.instances_checked;
    track(rep, std::abs(root - threshold_C(am, game)),
          describe(game) + " abar_minus=" + format_g9(am));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

// --- E_+- vs bisection roots of the symmetric quadratic ----------------------

OracleReport oracle_equilibrium_roots(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "equilibrium_vs_quadratic_roots";
  rep.tolerance = 1e-10;
  InstanceGenerator gen(seed);
  int checked = 0;
  int attempts = 0;
  while (checked < 100 && attempts < 20000) {
    ++attempts;
    const int M = attempts % 8 + 1;
    const GameInstance game = gen.next(M);
    const EquilibriumResult eq = symmetric_equilibrium(game);
    if (eq.regime != Regime::InteriorEplus &&
        eq.regime != Regime::InteriorEminus) {
      continue;
    }
    const SymmetricQuadratic quad = symmetric_quadratic(game);
    const double m2 = static_cast<double>(game.M()) * game.M();
    const auto Q = [&](double g) { return m2 * g * g + quad.K1 * g + quad.K0; };

    // Scan for sign changes on [0, 2 theta] and bisect each bracket.
    const int cells = 4096;
    const double width = 2.0 * game.theta();
    double best = kInf;
    double prev = Q(0.0);
    for (int c = 1; c <= cells; ++c) {
      const double x = width * c / cells;
      const double cur = Q(x);
      if ((prev < 0.0) != (cur < 0.0)) {
        double lo = width * (c - 1) / cells, hi = x;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if ((Q(lo) < 0.0) == (Q(mid) < 0.0)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        best = std::min(best, std::abs(0.5 * (lo + hi) - eq.alpha_star));
      }
      prev = cur;
    }
    ++checked;
    ++rep.instances_checked;
    track(rep, best, describe(game));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance && checked == 100;
  return rep;
}

// --- concavity across instances ----------------------------------------------

OracleReport oracle_concavity(std::uint64_t seed) {
  OracleReport rep;
  rep.name = "concavity_fd";
  rep.tolerance = 1e-6;
  rep.max_abs_error = -kInf;
  InstanceGenerator gen(seed);
  for (int k = 0; k < 100; ++k) {
    const GameInstance game = gen.next(1);
    const OracleReport one = fd_concavity_check(game, 10, subseed(seed, k + 1));
    rep.instances_checked += one.instances_checked;
    track(rep, one.max_abs_error, one.worst_instance);
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

// --- dynamics consistency -----------------------------------------------------

GameInstance find_instance(InstanceGenerator& gen, int M,
                           const std::function<bool(const GameInstance&)>& want) {
  for (int attempt = 0; attempt < 20000; ++attempt) {
    GameInstance g = gen.next(M);
    if (want(g)) return g;
  }
  throw std::logic_error("no instance matching the requested profile");
}

OracleReport oracle_ode_consistency(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  OracleReport rep;
  rep.name = "ode_equilibrium_consistency";
  rep.tolerance = 1e-3;

  const auto fast_interior = [](const GameInstance& g) {
    const EquilibriumResult eq = symmetric_equilibrium(g);
    if (eq.regime == Regime::CapSaturated) return false;
    return fixed_point_decay_rate(g.policy(), g.alpha(), g.theta(),
                                  eq.abar_star) > 8e-3;
  };
  const auto cap_regime = [](const GameInstance& g) {
    return symmetric_equilibrium(g).regime == Regime::CapSaturated;
  };
  const auto a_negative_interior = [&](const GameInstance& g) {
    return g.gc().a < 0.0 && fast_interior(g);
  };

  const GameInstance picks[4] = {
      find_instance(gen, 2, fast_interior),
      find_instance(gen, 3, a_negative_interior),
      find_instance(gen, 1, fast_interior),
      find_instance(gen, 4, cap_regime),
  };
  for (int k = 0; k < 4; ++k) {
    const OracleReport one = ode_equilibrium_consistency(
        picks[k], symmetric_equilibrium(picks[k]), subseed(seed, 40 + k));
    rep.instances_checked += one.instances_checked;
    track(rep, one.max_abs_error, one.worst_instance);
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

OracleReport oracle_ode_collapse(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  Rng rng(subseed(seed, 77));
  OracleReport rep;
  rep.name = "ode_collapse";
  rep.tolerance = 1e-3;
  for (int k = 0; k < 2; ++k) {
    const GameInstance game = gen.next(2);
    // Total extraction 1.5 theta guarantees a tragedy of the commons.
    std::vector<GreedyPopulation> greedy(
        2, GreedyPopulation(0.75 * game.theta(), 1.0));
    const RateParams rates(game.alpha(), game.theta(), 1.0, greedy);
    const MultiPopSystem sys(rates, game.policy());
    for (int run = 0; run < 5; ++run) {
      State s0(4);
      for (Eigen::Index i = 0; i < 4; ++i) s0(i) = rng.uniform(0.05, 0.95);
      const IntegrationResult res =
          integrate_to_steady(sys, s0, kDefaultTEnd, kDefaultDt);
      ++rep.instances_checked;
      track(rep, resource(res.final_state), describe(game));
    }
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

OracleReport oracle_ode_zero_extraction(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  Rng rng(subseed(seed, 88));
  OracleReport rep;
  rep.name = "ode_zero_extraction";
  rep.tolerance = 1e-3;
  const GameInstance game = find_instance(gen, 1, [](const GameInstance& g) {
    return fixed_point_decay_rate(g.policy(), g.alpha(), g.theta(), 0.0) > 8e-3;
  });
  const double target = resource_level(0.0, game);
  std::vector<GreedyPopulation> greedy(1, GreedyPopulation(0.0, 1.0));
  const RateParams rates(game.alpha(), game.theta(), 1.0, greedy);
  const MultiPopSystem sys(rates, game.policy());
  for (int run = 0; run < 5; ++run) {
    State s0(3);
    for (Eigen::Index i = 0; i < 3; ++i) s0(i) = rng.uniform(0.05, 0.95);
    const IntegrationResult res =
        integrate_to_steady(sys, s0, kDefaultTEnd, kDefaultDt);
    ++rep.instances_checked;
    track(rep, std::abs(resource(res.final_state) - target), describe(game));
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

// --- depleting equilibria vs exhaustive deviation checks ----------------------

OracleReport oracle_depletion_grid(std::uint64_t /*seed*/) {
  OracleReport rep;
  rep.name = "depletion_equilibrium_grid";
  rep.tolerance = 0.0;

  // dRT0 > 0 keeps the characterization an exact iff; rates are offset from the lattice
  // so no unilateral total lands exactly on theta.
  const GameInstance game(3, Policy(2.0, 0.2, 2.1, 2.0), 0.4, 1.0);
  const double theta = game.theta();
  const double offset = 0.013;
  const double step = 0.05;
  const int per_agent = 30;

  // A deviation grid finer than the profile grid; the profitable window
  // theta - abar_minus can be as narrow as ~0.024 on this lattice.
  std::vector<double> deviations;
  for (double d = 0.0; d <= 1.5 * theta; d += 0.005) deviations.push_back(d);

  int mismatches = 0;
  std::string worst;
  for (int i = 0; i < per_agent; ++i) {
    for (int j = 0; j < per_agent; ++j) {
      for (int k = 0; k < per_agent; ++k) {
        const StrategyProfile profile(
            {offset + step * i, offset + step * j, offset + step * k});
        const bool literal = is_depleting_equilibrium(profile, game);
        bool brute = resource_level(profile.abar(), game) == 0.0;
        for (int agent = 0; brute && agent < 3; ++agent) {
          const double am = profile.abar_minus(agent);
          for (double d : deviations) {
            if (d * resource_level(am + d, game) > 0.0) {
              brute = false;
              break;
            }
          }
        }
        ++rep.instances_checked;
        if (literal != brute) {
          ++mismatches;
          if (worst.empty()) {
            worst = "rates=(" + format_g9(profile.rates[0]) + "," +
                    format_g9(profile.rates[1]) + "," +
                    format_g9(profile.rates[2]) + ")";
          }
        }
      }
    }
  }
  rep.max_abs_error = mismatches;
  rep.worst_instance = worst;
  rep.pass = mismatches == 0;
  return rep;
}

}  // namespace

std::vector<OracleReport> run_all_oracles(std::uint64_t seed) {
  return {
      oracle_best_response_grid(subseed(seed, 1)),
      oracle_equilibrium_iteration(subseed(seed, 2)),
      oracle_quadratic_residual(subseed(seed, 2)),  // same draws as above
      oracle_threshold_bisection(subseed(seed, 3)),
      oracle_equilibrium_roots(subseed(seed, 4)),
      oracle_concavity(subseed(seed, 5)),
      oracle_ode_consistency(subseed(seed, 6)),
      oracle_ode_collapse(subseed(seed, 7)),
      oracle_ode_zero_extraction(subseed(seed, 8)),
      oracle_depletion_grid(subseed(seed, 9)),
  };
}

}  // namespace commons
