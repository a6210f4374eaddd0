#include "commons/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "commons/errors.hpp"

namespace commons {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument(raw);
    return v;
  } catch (const std::exception&) {
    throw domain_error("config key '" + key + "': cannot parse '" + raw +
                       "' as a real number");
  }
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw domain_error("config line " + std::to_string(lineno) +
                         ": expected 'key = value'");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> Config::get_real(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  return parse_real(key, *v);
}

std::optional<int> Config::get_int(const std::string& key) const {
  const auto v = get_real(key);
  if (!v) return std::nullopt;
  const int i = static_cast<int>(*v);
  if (static_cast<double>(i) != *v) {
    throw domain_error("config key '" + key + "' must be an integer");
  }
  return i;
}

std::optional<std::vector<double>> Config::get_reals(
    const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::vector<double> out;
  std::istringstream in(*v);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(parse_real(key, trim(item)));
  }
  return out;
}

Policy policy_from_config(const Config& cfg) {
  static const char* delta_keys[4] = {"dSP0", "dRT0", "dTR1", "dPS1"};
  static const char* matrix_keys[8] = {"r1", "s1", "t1", "p1",
                                       "r0", "s0", "t0", "p0"};
  int deltas = 0, matrix = 0;
  for (const char* k : delta_keys) deltas += cfg.has(k) ? 1 : 0;
  for (const char* k : matrix_keys) matrix += cfg.has(k) ? 1 : 0;

  if (deltas > 0 && matrix > 0) {
    throw domain_error(
        "give either the four payoff differences or the eight matrix "
        "entries, not both");
  }
  if (deltas == 4) {
    return Policy(*cfg.get_real("dSP0"), *cfg.get_real("dRT0"),
                  *cfg.get_real("dTR1"), *cfg.get_real("dPS1"));
  }
  if (matrix == 8) {
    PayoffMatrices mats;
    mats.A1 << *cfg.get_real("r1"), *cfg.get_real("s1"),
               *cfg.get_real("t1"), *cfg.get_real("p1");
    mats.A0 << *cfg.get_real("r0"), *cfg.get_real("s0"),
               *cfg.get_real("t0"), *cfg.get_real("p0");
    return mats.to_policy();
  }
  throw domain_error(
      "incomplete policy: need dSP0,dRT0,dTR1,dPS1 or r1,s1,t1,p1,r0,s0,t0,p0");
}

Scenario scenario_from_config(const Config& cfg) {
  const Policy policy = policy_from_config(cfg);

  std::vector<GreedyPopulation> greedy;
  for (int k = 1;; ++k) {
    const std::string key = "greedy" + std::to_string(k);
    if (!cfg.has(key)) break;
    const auto vals = *cfg.get_reals(key);
    if (vals.size() == 2) {
      greedy.emplace_back(vals[0], vals[1]);
    } else if (vals.size() == 6) {
      greedy.emplace_back(vals[0], vals[1],
                          GreedyPolicy(vals[2], vals[3], vals[4], vals[5]));
    } else {
      throw domain_error(key +
                         ": expected 'alpha_i,theta_i' or "
                         "'alpha_i,theta_i,dSP0i,dRT0i,dTR1i,dPS1i'");
    }
  }

  const RateParams rates(cfg.get_real("alpha").value_or(0.4),
                         cfg.get_real("theta").value_or(1.0),
                         cfg.get_real("eps").value_or(1.0), greedy);

  const int m = rates.num_greedy();
  Eigen::VectorXd xg(m);
  if (const auto xg0 = cfg.get_reals("xg0")) {
    if (xg0->size() == 1) {
      xg.setConstant((*xg0)[0]);
    } else if (static_cast<int>(xg0->size()) == m) {
      for (int i = 0; i < m; ++i) xg(i) = (*xg0)[static_cast<std::size_t>(i)];
    } else {
      throw domain_error("xg0 must have one entry or one per greedy population");
    }
  } else {
    xg.setConstant(0.5);
  }

  Scenario sc{policy, rates,
              make_state(cfg.get_real("x0").value_or(0.5), xg,
                         cfg.get_real("n0").value_or(0.5)),
              cfg.get_real("dt").value_or(kDefaultDt),
              cfg.get_real("t_end").value_or(kDefaultTEnd),
              cfg.get_int("stride").value_or(1)};
  if (!(sc.dt > 0.0) || !(sc.t_end >= 0.0) || sc.stride < 1) {
    throw domain_error("need dt > 0, t_end >= 0 and stride >= 1");
  }
  return sc;
}

}  // namespace commons
