#include "mcp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "mcp/bounds.hpp"
#include "mcp/errors.hpp"
#include "mcp/parallel.hpp"
#include "mcp/rng.hpp"
#include "mcp/sensing.hpp"
#include "mcp/solver.hpp"

namespace mcp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GridPoint {
  std::size_t n;
  std::size_t d;  // 0 when a rule decides per trial
  double sigma;
};

std::vector<GridPoint> grid(const ExperimentConfig& cfg) {
  std::vector<GridPoint> points;
  const std::vector<std::size_t> ds = cfg.d.empty() ? std::vector<std::size_t>{0} : cfg.d;
  for (auto n : cfg.n) {
    for (auto d : ds) {
      for (double s : cfg.sigma) points.push_back({n, d, s});
    }
  }
  return points;
}

std::string failure_kind(const std::exception& e) {
  if (dynamic_cast<const NoFeasibleCandidate*>(&e)) return "NO_FEASIBLE_CANDIDATE";
  if (dynamic_cast<const EmptyCodebook*>(&e)) return "EMPTY_CODEBOOK";
  if (dynamic_cast<const SizeOverflow*>(&e)) return "SIZE_OVERFLOW";
  if (dynamic_cast<const NonConvergence*>(&e)) return "NON_CONVERGENCE";
  return "ERROR";
}

void mark_failed(TrialRecord& r, const std::exception& e) {
  r.status = failure_kind(e);
  r.recovered_entry.clear();
  r.recovered_bits = 0;
  r.residual = r.l2 = r.l2_per_element = r.quantized_l2 = kNaN;
  r.within_bound = false;
}

GridSummary summarize(const ExperimentConfig& cfg, const GridPoint& p, int m,
                      std::span<const TrialRecord> records) {
  GridSummary s;
  s.n = p.n;
  s.m = m;
  s.d = p.d == 0 ? std::string(d_rule_name(cfg.d_rule)) : std::to_string(p.d);
  s.sigma = p.sigma;
  s.trials = records.size();
  std::vector<double> errors;
  double prob = 0.0;
  for (const auto& r : records) {
    if (r.status == "OK") {
      ++s.solved;
      errors.push_back(r.l2);
    }
    s.within += r.within_bound;
    prob += r.bound_probability;
  }
  s.within_fraction = s.trials ? static_cast<double>(s.within) / static_cast<double>(s.trials) : 0.0;
  s.median_l2 = errors.empty() ? kNaN : median(errors);
  s.mean_l2 = errors.empty() ? kNaN
                             : std::accumulate(errors.begin(), errors.end(), 0.0) /
                                   static_cast<double>(errors.size());
  s.mean_bound_probability = s.trials ? prob / static_cast<double>(s.trials) : kNaN;
  return s;
}

ExperimentResult run_grid(const ExperimentConfig& cfg, bool noisy) {
  cfg.validate();
  ExperimentResult out;
  out.config = cfg;
  const ComplexityBudget budget(cfg.budget, cfg.budget_cap);
  const auto points = grid(cfg);
  const std::string name(experiment_name(cfg.experiment_id));

  std::size_t cached_n = 0;
  std::unique_ptr<CandidateSet> candidates;
  for (const auto& p : points) {
    const CodebookSpec spec = cfg.codebook_for(p.n);
    const int m = spec.m.bits();
    if (!candidates || cached_n != p.n) {
      candidates = std::make_unique<CandidateSet>(spec, budget);
      cached_n = p.n;
    }
    if (candidates->size() == 0) throw EmptyCodebook("no codebook entry fits the budget");
    const double epsilon = cfg.epsilon_for(p.n);
    const std::size_t first = out.records.size();
    out.records.resize(first + cfg.trials);

    parallel_for(cfg.trials, [&](std::size_t k) {
      TrialRecord& r = out.records[first + k];
      r.experiment_id = name;
      r.trial = k;
      r.n = p.n;
      r.m = m;
      r.sigma = p.sigma;
      r.truth_seed = rng::derive_seed(cfg.base_seed, k, rng::Purpose::kTruth);
      r.matrix_seed = rng::derive_seed(cfg.base_seed, k, rng::Purpose::kMatrix);
      r.noise_seed = rng::derive_seed(cfg.base_seed, k, rng::Purpose::kNoise);

      // Same draw as sample_entry(spec, budget, truth_seed).
      rng::CounterStream pick(r.truth_seed);
      const ProgramEntry& truth_entry = candidates->entry(pick.next_below(candidates->size()));
      const auto truth = decode(truth_entry).values();
      r.truth_entry = entry_id(truth_entry);
      r.truth_bits = description_length(truth_entry);
      r.solver_budget = noisy ? r.truth_bits : cfg.budget;
      r.d = p.d != 0 ? p.d : measurements_for(cfg.d_rule, r.truth_bits, m, p.n, cfg.r);

      if (noisy) {
        r.bound = theorem2_bound(r.truth_bits, p.sigma, static_cast<double>(r.d), cfg.r);
        const auto params = EventParams::paper_choice(cfg.r, static_cast<double>(r.d),
                                                      r.truth_bits, p.sigma);
        r.bound_probability = event_bounds(params, r.d, p.n, r.truth_bits, p.sigma).total();
      } else {
        r.bound = epsilon;
      }
      BoundInputs in;
      in.kappa_bits = r.solver_budget;
      in.m = m;
      in.n = static_cast<double>(p.n);
      in.d = static_cast<double>(r.d);
      in.sigma = p.sigma;
      in.r = cfg.r;
      in.tau = cfg.tau;
      in.t = cfg.t;
      const auto t1 = theorem1_rhs(in);
      r.theorem1_threshold = t1.threshold;
      if (!noisy) r.bound_probability = t1.probability_bound;

      try {
        const auto a = SensingEnsemble::draw(r.d, p.n, r.matrix_seed);
        const auto y = measure_noisy(a, truth, p.sigma, r.noise_seed);
        const auto g = noise_vector(r.d, p.sigma, r.noise_seed);
        double w2 = 0.0;
        for (double v : g) w2 += v * v;
        r.noise_norm = std::sqrt(w2);
        const ComplexityBudget solver_budget(r.solver_budget, cfg.budget_cap);
        const RecoveryResult result =
            noisy ? solve_noisy(a, y, *candidates, solver_budget)
                  : solve_noiseless(a, y.y, *candidates, solver_budget,
                                    FeasibilityTolerance::relative_to(y.y));
        const auto err = reconstruction_error(result, truth);
        r.status = "OK";
        r.recovered_entry = entry_id(result.entry);
        r.recovered_bits = result.complexity_bits;
        r.residual = result.residual;
        r.candidates_scored = result.candidates_scored;
        r.l2 = err.l2;
        r.l2_per_element = err.l2_per_element;
        r.quantized_l2 = err.quantized_l2;
        switch (cfg.experiment_id) {
          case ExperimentId::kStability:
            r.within_bound = err.l2 * err.l2 <= r.bound;
            break;
          case ExperimentId::kPerElement:
            r.within_bound = err.l2_per_element <= epsilon / std::sqrt(static_cast<double>(p.n));
            break;
          default:
            r.within_bound = err.l2 <= epsilon;
        }
      } catch (const std::exception& e) {
        mark_failed(r, e);
      }
    });

    out.summaries.push_back(
        summarize(cfg, p, m, std::span<const TrialRecord>(out.records).subspan(first)));
  }

  if (noisy && cfg.sigma.size() >= 2) {
    for (auto n : cfg.n) {
      std::vector<double> xs, ys;
      for (const auto& s : out.summaries) {
        if (s.n == n && std::isfinite(s.median_l2)) {
          xs.push_back(s.sigma);
          ys.push_back(s.median_l2);
        }
      }
      const double k = static_cast<double>(xs.size());
      const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
      const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      out.stability_slopes.push_back(sxx > 0.0 ? sxy / sxx : kNaN);
    }
  }
  return out;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

ExperimentResult run_noiseless_scaling(const ExperimentConfig& cfg) {
  if (cfg.experiment_id != ExperimentId::kNoiselessScaling &&
      cfg.experiment_id != ExperimentId::kPerElement) {
    throw ConfigError("run_noiseless_scaling needs NOISELESS_SCALING or PER_ELEMENT");
  }
  return run_grid(cfg, false);
}

ExperimentResult run_stability(const ExperimentConfig& cfg) {
  if (cfg.experiment_id != ExperimentId::kStability) throw ConfigError("run_stability needs STABILITY");
  return run_grid(cfg, true);
}

std::vector<TailCheckReport> run_lemma_suite(const LemmaSuiteOptions& o) {
  auto seed = [&](std::uint64_t i) { return rng::derive_seed(o.seed, i, rng::Purpose::kMonteCarlo); };
  std::vector<TailCheckReport> out;
  const std::pair<std::size_t, double> chi[] = {{50, 0.3}, {100, 0.5}, {200, 0.2}};
  std::uint64_t index = 0;
  for (auto [d, tau] : chi) {
    const auto c = verify_chi_square(d, tau, o.chi_trials, seed(index++));
    out.push_back(c.lower);
    out.push_back(c.upper);
  }
  auto dot_rows = [&](const DotCheck& c, const std::string& tag, bool control) {
    TailCheckReport ks;
    ks.event_name = (control ? "DOT_RAW_KS" : "DOT_KS") + tag;
    ks.trials = o.dot_trials;
    ks.empirical_rate = c.ks_statistic;
    ks.analytic_bound = c.ks_critical;
    ks.pass = control ? c.ks_statistic >= c.ks_critical : c.ks_statistic < c.ks_critical;
    out.push_back(ks);
    if (control) return;
    TailCheckReport corr;
    corr.event_name = "DOT_CORR" + tag;
    corr.trials = o.dot_trials;
    corr.empirical_rate = std::abs(c.independence_corr);
    corr.analytic_bound = c.corr_critical;
    corr.pass = corr.empirical_rate < c.corr_critical;
    out.push_back(corr);
  };
  for (std::size_t n : {1, 2, 10, 50}) {
    dot_rows(verify_gaussian_dot(n, o.dot_trials, seed(index++)), "(n=" + std::to_string(n) + ")",
             false);
  }
  dot_rows(verify_gaussian_dot(2, o.dot_trials, seed(index++), DotStatistic::kRaw), "(n=2)", true);
  auto sm = verify_sigma_max_tail(50, 200, 0.5, o.sigma_trials, seed(index++));
  sm.event_name = "SIGMA_MAX(d=50,n=200,t3=0.5)";
  out.push_back(sm);

  CodebookSpec spec;
  spec.n = 32;
  spec.m = Resolution(4);
  spec.families = {Generator::kConstant, Generator::kSparse};
  spec.max_sparsity = 1;
  const ComplexityBudget budget(19);
  const double sigma = 0.2;
  const auto params = EventParams::paper_choice(4.0, 64.0, budget.max_bits(), sigma);
  const auto ev = verify_events(params, spec, budget, 64, sigma, o.event_trials, seed(index++));
  for (const auto& e : ev.events) out.push_back(e);
  out.push_back(ev.any_failure);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment_id) {
    case ExperimentId::kNoiselessScaling:
    case ExperimentId::kPerElement:
      return run_noiseless_scaling(cfg);
    case ExperimentId::kStability:
      return run_stability(cfg);
    case ExperimentId::kLemmas: {
      cfg.validate();
      LemmaSuiteOptions o;
      o.chi_trials = o.dot_trials = cfg.trials;
      o.seed = cfg.base_seed;
      ExperimentResult out;
      out.config = cfg;
      out.lemma_reports = run_lemma_suite(o);
      return out;
    }
  }
  throw ConfigError("unknown experiment");
}

}  // namespace mcp
