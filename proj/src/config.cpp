#include "mcp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mcp/bounds.hpp"
#include "mcp/errors.hpp"

namespace mcp {

namespace {

constexpr std::string_view kExperimentNames[] = {"NOISELESS_SCALING", "PER_ELEMENT", "STABILITY",
                                                 "LEMMAS"};
constexpr std::string_view kRuleNames[] = {"NONE", "D_EQ_KAPPA_LOG_N", "D_EQ_3KAPPA",
                                           "D_EQ_8R_KAPPA_M"};

const std::set<std::string> kKnownKeys = {
    "experiment_id", "n",      "m",          "d",     "d_rule", "families",
    "max_sparsity",  "max_breakpoints",      "max_seed_bits",   "budget", "budget_cap",
    "sigma",         "r",      "tau",        "t",     "epsilon", "trials", "base_seed"};

template <typename T>
T get_as(const nlohmann::json& j, const std::string& key) {
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_unsigned()) {
      throw ConfigError("config key '" + key + "' must be a non-negative integer");
    }
  } else {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  }
  return v.get<T>();
}

template <typename T>
std::vector<T> scalar_or_array(const nlohmann::json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array()) return {get_as<T>(j, key)};
  if (v.empty()) throw ConfigError("config key '" + key + "' must not be an empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    nlohmann::json wrap = {{key, v[i]}};
    out.push_back(get_as<T>(wrap, key));
  }
  return out;
}

}  // namespace

std::string_view experiment_name(ExperimentId id) noexcept {
  return kExperimentNames[static_cast<int>(id)];
}

ExperimentId parse_experiment(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kExperimentNames[i] == name) return static_cast<ExperimentId>(i);
  }
  throw ConfigError("unknown experiment_id '" + std::string(name) + "'");
}

std::string_view d_rule_name(DRule rule) noexcept { return kRuleNames[static_cast<int>(rule)]; }

DRule parse_d_rule(std::string_view name) {
  for (int i = 1; i < 4; ++i) {
    if (kRuleNames[i] == name) return static_cast<DRule>(i);
  }
  throw ConfigError("unknown d_rule '" + std::string(name) + "'");
}

std::size_t measurements_for(DRule rule, int kappa_bits, int m, std::size_t n, double r) {
  if (kappa_bits < 0 || m < 1) throw DomainError("measurement rule needs kappa_bits >= 0, m >= 1");
  double d = 0.0;
  switch (rule) {
    case DRule::kKappaLogN:
      d = std::ceil(static_cast<double>(kappa_bits) / m * std::log(static_cast<double>(n)));
      break;
    case DRule::kThreeKappa:
      d = static_cast<double>((3 * kappa_bits + m - 1) / m);
      break;
    case DRule::kEightRKappaM:
      if (!(r > 1.0)) throw DomainError("D_EQ_8R_KAPPA_M needs r > 1");
      d = std::ceil(8.0 * r * kappa_bits);
      break;
    case DRule::kNone:
      throw DomainError("no measurement rule configured");
  }
  return d < 1.0 ? 1 : static_cast<std::size_t>(d);
}

void ExperimentConfig::validate() const {
  if (n.empty()) throw ConfigError("n must not be empty");
  for (auto v : n) {
    if (v < 1) throw ConfigError("n must be >= 1");
  }
  if (m && (*m < 1 || *m > Resolution::kMaxBits)) throw ConfigError("m must be in [1, 53]");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (families.empty()) throw ConfigError("families must not be empty");
  if (max_sparsity < 0 || max_sparsity > kMaxCount) throw ConfigError("max_sparsity must be in [0, 3]");
  if (max_breakpoints < 0 || max_breakpoints > kMaxCount) {
    throw ConfigError("max_breakpoints must be in [0, 3]");
  }
  if (max_seed_bits < 1 || max_seed_bits > kMaxSeedBits) {
    throw ConfigError("max_seed_bits must be in [1, 64]");
  }
  if (budget_cap < 1) throw ConfigError("budget_cap must be >= 1");
  ComplexityBudget(budget, budget_cap);
  for (double s : sigma) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma must be finite and >= 0");
  }
  if (sigma.empty()) throw ConfigError("sigma must not be empty");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0, 1]");
  if (!(t >= 0.0)) throw ConfigError("t must be >= 0");
  if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(r > 0.0)) throw ConfigError("r must be > 0");
  for (auto v : d) {
    if (v < 1) throw ConfigError("d must be >= 1");
  }
  if (experiment_id == ExperimentId::kLemmas) return;
  if (d.empty() == (d_rule == DRule::kNone)) throw ConfigError("exactly one of d and d_rule is required");
  if ((d_rule == DRule::kEightRKappaM || experiment_id == ExperimentId::kStability) && !(r > 1.0)) {
    throw ConfigError("r must be > 1");
  }
  for (double s : sigma) {
    if (experiment_id == ExperimentId::kStability && s <= 0.0) {
      throw ConfigError("STABILITY needs sigma > 0");
    }
    if (experiment_id != ExperimentId::kStability && s != 0.0) {
      throw ConfigError("noiseless experiments need sigma = 0");
    }
  }
  for (auto v : n) codebook_for(v).validate();
}

int ExperimentConfig::resolution_for(std::size_t n_value) const {
  return m ? *m : natural_log_resolution(n_value);
}

CodebookSpec ExperimentConfig::codebook_for(std::size_t n_value) const {
  CodebookSpec spec;
  spec.n = n_value;
  spec.m = Resolution(resolution_for(n_value));
  spec.families = families;
  spec.max_sparsity = max_sparsity;
  spec.max_breakpoints = max_breakpoints;
  spec.max_seed_bits = max_seed_bits;
  return spec;
}

double ExperimentConfig::epsilon_for(std::size_t n_value) const {
  if (epsilon) return *epsilon;
  const int mm = resolution_for(n_value);
  return std::max(0.1, std::sqrt(static_cast<double>(n_value)) * std::ldexp(1.0, -mm + 1));
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (!j.contains("experiment_id")) throw ConfigError("config key 'experiment_id' is required");
    c.experiment_id = parse_experiment(get_as<std::string>(j, "experiment_id"));
    if (j.contains("n")) c.n = scalar_or_array<std::size_t>(j, "n");
    if (j.contains("m")) c.m = get_as<int>(j, "m");
    if (j.contains("d")) c.d = scalar_or_array<std::size_t>(j, "d");
    if (j.contains("d_rule")) c.d_rule = parse_d_rule(get_as<std::string>(j, "d_rule"));
    if (j.contains("families")) {
      const auto& f = j.at("families");
      if (!f.is_array()) throw ConfigError("config key 'families' must be an array");
      c.families.clear();
      for (const auto& name : f) {
        if (!name.is_string()) throw ConfigError("config key 'families' must hold strings");
        try {
          c.families.push_back(parse_generator(name.get<std::string>()));
        } catch (const std::exception&) {
          throw ConfigError("unknown generator family '" + name.get<std::string>() + "'");
        }
      }
    }
    if (j.contains("max_sparsity")) c.max_sparsity = get_as<int>(j, "max_sparsity");
    if (j.contains("max_breakpoints")) c.max_breakpoints = get_as<int>(j, "max_breakpoints");
    if (j.contains("max_seed_bits")) c.max_seed_bits = get_as<int>(j, "max_seed_bits");
    if (j.contains("budget")) c.budget = get_as<int>(j, "budget");
    if (j.contains("budget_cap")) c.budget_cap = get_as<int>(j, "budget_cap");
    if (j.contains("sigma")) c.sigma = scalar_or_array<double>(j, "sigma");
    if (j.contains("r")) c.r = get_as<double>(j, "r");
    if (j.contains("tau")) c.tau = get_as<double>(j, "tau");
    if (j.contains("t")) c.t = get_as<double>(j, "t");
    if (j.contains("epsilon")) c.epsilon = get_as<double>(j, "epsilon");
    if (j.contains("trials")) c.trials = get_as<std::uint64_t>(j, "trials");
    if (j.contains("base_seed")) c.base_seed = get_as<std::uint64_t>(j, "base_seed");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ExperimentConfig parse_config_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw IoError(path, "read failed");
  return parse_config_text(text.str());
}

nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment_id"] = experiment_name(c.experiment_id);
  j["n"] = c.n;
  if (c.m) j["m"] = *c.m;
  if (!c.d.empty()) j["d"] = c.d;
  if (c.d_rule != DRule::kNone) j["d_rule"] = d_rule_name(c.d_rule);
  auto families = nlohmann::ordered_json::array();
  for (auto g : c.families) families.push_back(generator_name(g));
  j["families"] = families;
  j["max_sparsity"] = c.max_sparsity;
  j["max_breakpoints"] = c.max_breakpoints;
  j["max_seed_bits"] = c.max_seed_bits;
  j["budget"] = c.budget;
  j["budget_cap"] = c.budget_cap;
  j["sigma"] = c.sigma;
  j["r"] = c.r;
  j["tau"] = c.tau;
  j["t"] = c.t;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  j["trials"] = c.trials;
  j["base_seed"] = c.base_seed;
  return j;
}

}  // namespace mcp
