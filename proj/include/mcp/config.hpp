#pragma once

// Experiment configuration: a JSON object whose keys map one-to-one onto
// ExperimentConfig fields. Unknown keys are rejected.
//
//   experiment_id    NOISELESS_SCALING | PER_ELEMENT | STABILITY | LEMMAS
//   n                integer or array of integers
//   m                integer; omitted means m = ceil(ln n) per n
//   d                integer or array; mutually exclusive with d_rule
//   d_rule           D_EQ_KAPPA_LOG_N | D_EQ_3KAPPA | D_EQ_8R_KAPPA_M
//   families         array of generator names
//   max_sparsity, max_breakpoints, max_seed_bits   enumeration limits
//   budget, budget_cap                             description length in bits
//   sigma            number or array
//   r, tau, t        bound parameters (defaults 4, 0.1, 1.0)
//   epsilon          scaling success threshold on ||x_hat - x||_2
//   trials, base_seed

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mcp/codebook.hpp"

namespace mcp {

enum class ExperimentId { kNoiselessScaling, kPerElement, kStability, kLemmas };

std::string_view experiment_name(ExperimentId id) noexcept;
ExperimentId parse_experiment(std::string_view name);

enum class DRule { kNone, kKappaLogN, kThreeKappa, kEightRKappaM };

std::string_view d_rule_name(DRule rule) noexcept;
DRule parse_d_rule(std::string_view name);

/// Number of measurements a rule assigns to a truth of `kappa_bits` bits:
///   D_EQ_KAPPA_LOG_N  ceil((kappa_bits / m) ln n)
///   D_EQ_3KAPPA       ceil(3 kappa_bits / m)
///   D_EQ_8R_KAPPA_M   ceil(8 r kappa_bits)
/// kappa_bits / m is the per-symbol rate kappa_{m,n}. Never below 1.
std::size_t measurements_for(DRule rule, int kappa_bits, int m, std::size_t n, double r);

struct ExperimentConfig {
  ExperimentId experiment_id = ExperimentId::kNoiselessScaling;
  std::vector<std::size_t> n{64};
  std::optional<int> m;
  std::vector<std::size_t> d;
  DRule d_rule = DRule::kNone;
  std::vector<Generator> families{Generator::kConstant};
  int max_sparsity = 1;
  int max_breakpoints = 1;
  int max_seed_bits = 16;
  int budget = 16;
  int budget_cap = kDefaultBudgetCap;
  std::vector<double> sigma{0.0};
  double r = 4.0;
  double tau = 0.1;
  double t = 1.0;
  std::optional<double> epsilon;
  std::uint64_t trials = 100;
  std::uint64_t base_seed = 0;

  /// Throws ConfigError (or BudgetTooLarge for budget above budget_cap).
  void validate() const;

  int resolution_for(std::size_t n_value) const;
  CodebookSpec codebook_for(std::size_t n_value) const;
  /// max(0.1, sqrt(n) 2^(-m+1)) unless set.
  double epsilon_for(std::size_t n_value) const;
};

/// Parses and validates. Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(std::string_view text);
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Every set field, defaults included, in a fixed key order; parse_config
/// accepts the result.
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

}  // namespace mcp
