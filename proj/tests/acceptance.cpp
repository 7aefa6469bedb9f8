// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mcp/bounds.hpp"
#include "mcp/complexity.hpp"
#include "mcp/concentration.hpp"
#include "mcp/config.hpp"
#include "mcp/harness.hpp"
#include "mcp/report.hpp"
#include "mcp/rng.hpp"
#include "mcp/solver.hpp"
#include "solver_oracle.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using big = boost::multiprecision::cpp_bin_float_50;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string report_line(const mcp::TailCheckReport& r) {
  return r.event_name + " " + fmt(r.empirical_rate) + "<=" + fmt(r.analytic_bound) +
         (r.pass ? "" : " (FAIL)");
}

Outcome chi_square_tails() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  const std::pair<std::size_t, double> cases[] = {{50, 0.3}, {100, 0.5}, {200, 0.2}};
  std::uint64_t seed = 100;
  for (auto [d, tau] : cases) {
    const auto c = mcp::verify_chi_square(d, tau, 100000, seed++);
    ok = ok && c.lower.pass && c.upper.pass;
    detail += report_line(c.lower) + "; " + report_line(c.upper) + "; ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  ok = ok && secs < 30.0;
  return {ok, detail + "runtime " + fmt(secs) + " s (target < 30 s)"};
}

Outcome gaussian_dot() {
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 200;
  for (std::size_t n : {1, 2, 10, 50}) {
    const auto c = mcp::verify_gaussian_dot(n, 100000, seed++);
    ok = ok && c.pass;
    detail += "n=" + std::to_string(n) + " KS " + fmt(c.ks_statistic) + "<" + fmt(c.ks_critical) +
              " |corr| " + fmt(std::abs(c.independence_corr)) + "<" + fmt(c.corr_critical) + "; ";
  }
  const auto raw = mcp::verify_gaussian_dot(2, 100000, seed, mcp::DotStatistic::kRaw);
  const bool control_fails = raw.ks_statistic >= raw.ks_critical;
  ok = ok && control_fails;
  detail += "raw n=2 control KS " + fmt(raw.ks_statistic) + (control_fails ? " rejected" : " NOT rejected");
  return {ok, detail};
}

Outcome sigma_max_tail() {
  const auto r = mcp::verify_sigma_max_tail(50, 200, 0.5, 10000, 300);
  return {r.pass, std::to_string(r.hits) + "/" + std::to_string(r.trials) + " hits, rate " +
                      fmt(r.empirical_rate) + " vs bound " + fmt(r.analytic_bound)};
}

Outcome events() {
  mcp::CodebookSpec spec;
  spec.n = 32;
  spec.m = mcp::Resolution(4);
  spec.families = {mcp::Generator::kConstant, mcp::Generator::kSparse};
  spec.max_sparsity = 1;
  const mcp::ComplexityBudget budget(19);
  const double sigma = 0.2;
  const auto params = mcp::EventParams::paper_choice(4.0, 64.0, budget.max_bits(), sigma);
  const auto r = mcp::verify_events(params, spec, budget, 64, sigma, 1000, 400);
  bool ok = r.any_failure.pass;
  std::string detail = "|S|=" + std::to_string(r.difference_set_size) + " t1=" + fmt(params.t1) + "; ";
  for (const auto& e : r.events) {
    ok = ok && e.pass;
    detail += report_line(e) + "; ";
  }
  detail += "union " + report_line(r.any_failure);
  return {ok, detail};
}

Outcome noiseless_recovery() {
  const auto start = Clock::now();
  const auto cfg = mcp::parse_config_text(R"({
    "experiment_id": "PER_ELEMENT", "n": 256, "m": 6, "d_rule": "D_EQ_3KAPPA",
    "families": ["CONSTANT", "K_SPARSE"], "max_sparsity": 1, "budget": 24,
    "trials": 100, "base_seed": 500})");
  const auto r = mcp::run_noiseless_scaling(cfg);
  int max_bits = 0;
  for (const auto& t : r.records) max_bits = std::max(max_bits, t.truth_bits);
  const double frac = r.summaries.at(0).within_fraction;
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  return {frac >= 0.90 && max_bits <= 24 && secs < 300.0,
          "success fraction " + fmt(frac) + " (>= 0.90), eps/sqrt(n) = " +
              fmt(cfg.epsilon_for(256) / 16.0) + ", max truth bits " + std::to_string(max_bits) +
              ", runtime " + fmt(secs) + " s"};
}

Outcome stability() {
  const auto cfg = mcp::parse_config_text(R"({
    "experiment_id": "STABILITY", "n": 256, "m": 6, "d_rule": "D_EQ_8R_KAPPA_M", "r": 4,
    "sigma": [0.05, 0.1, 0.2], "families": ["CONSTANT", "K_SPARSE"], "max_sparsity": 1,
    "budget": 24, "trials": 200, "base_seed": 600})");
  const auto r = mcp::run_stability(cfg);
  bool ok = true;
  std::string detail;
  double prev_median = -1.0;
  for (const auto& s : r.summaries) {
    ok = ok && s.within_fraction >= 0.95;
    ok = ok && s.median_l2 >= prev_median;
    prev_median = s.median_l2;
    detail += "sigma " + fmt(s.sigma) + ": within " + fmt(s.within_fraction) + ", median l2 " +
              fmt(s.median_l2) + ", mean l2 " + fmt(s.mean_l2) + "; ";
  }
  detail += "median non-decreasing in sigma";
  return {ok, detail};
}

// High-precision re-evaluation of the printed formulas, products and powers
// taken directly rather than in the log domain.
Outcome bound_calculators() {
  double worst = 0.0;
  bool gamma_ok = true;
  auto rel = [&](double got, const big& want) {
    const big diff = abs(big(got) - want);
    const double e = want == 0 ? static_cast<double>(diff) : static_cast<double>(diff / abs(want));
    worst = std::max(worst, e);
  };
  for (int i = 0; i < 20; ++i) {
    mcp::BoundInputs in;
    in.kappa_bits = 5 + i;
    in.m = 3 + i % 5;
    in.n = 64 + 23 * i;
    in.d = 40 + 13 * i;
    in.sigma = 0.05 + 0.1 * i;
    in.r = 1.5 + 0.45 * i;
    in.tau = 0.05 + 0.045 * i;
    in.t = 0.1 + 0.1 * i;
    const big K = in.kappa_bits, n = in.n, d = in.d, s = in.sigma, r = in.r, tau = in.tau, t = in.t;
    const big two = 2, one = 1;

    const auto t1 = mcp::theorem1_rhs(in);
    rel(t1.threshold, (sqrt(n / d + t + one) + one) / tau * sqrt(n * pow(two, -2 * in.m + 2)));
    rel(t1.probability_bound, pow(two, 2 * K) * exp(d / 2 * (one - tau * tau + 2 * log(tau))) +
                                  exp(-d * t * t / 2));

    const big rho = pow(one - one / sqrt(r), 2) / 2;
    rel(mcp::stability_rho(in.r), rho);
    rel(mcp::theorem2_bound(in.kappa_bits, in.sigma, in.d, in.r), 2 * K * s * s / (rho * d));

    const auto p = mcp::EventParams::paper_choice(in.r, in.d, in.kappa_bits, in.sigma);
    const big t2 = one / sqrt(r), t4 = t2, t3 = p.t3, t5 = p.t5, t7 = p.t7, t8 = p.t8;
    const big t6 = (one - t8) * (one + t7) - one;
    const big bt1 = 2 * s * sqrt(d * (one + t2) * (2 * K));
    rel(p.t1, bt1);
    const auto g = mcp::gamma_constants(p.t2, p.t3, p.t4, p.t5, p.t6);
    rel(g.g1, sqrt(one + t5) * (one + t3) / (one - t4));
    rel(g.g2, sqrt(one + t5) / (one - t4));
    rel(g.g3, sqrt(one + t2) / (one - t4));
    rel(g.g4, sqrt(one + t6) / (one - t4));
    gamma_ok = gamma_ok && g.g3 < std::sqrt(2.0) / (1.0 - 1.0 / std::sqrt(in.r));

    const auto eb = mcp::event_bounds(p, static_cast<std::size_t>(in.d),
                                      static_cast<std::size_t>(in.n), in.kappa_bits, in.sigma);
    const big count = pow(two, 2 * K);
    rel(eb.bound[0], count * (exp(-d * t2 * t2 / 2) + exp(-bt1 * bt1 / (2 * s * s * d * (one + t2)))));
    rel(eb.bound[1], exp(-d * t3 * t3 / 2));
    rel(eb.bound[2], count * exp(d / 2 * (t4 + log(one - t4))));
    rel(eb.bound[3], count * exp(-d / 2 * (t5 - log(one + t5))));
    rel(eb.bound[4], exp(-n / 2 * (t7 - log(one + t7))) + exp(d / 2 * (t8 + log(one - t8))));
  }
  return {worst <= 1e-12 && gamma_ok, "20 grid points, worst relative error " + fmt(worst) +
                                          " (<= 1e-12); gamma3 < sqrt(2)/(1-r^-1/2) " +
                                          (gamma_ok ? "holds" : "VIOLATED")};
}

Outcome lz78_surrogate() {
  double lo = 10.0, hi = 0.0;
  const std::size_t n = 4096;
  const int m = 8;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const mcp::rng::CounterStream s(mcp::rng::derive_seed(800, k, mcp::rng::Purpose::kTruth));
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = s.uniform_at(i);
    const auto q = mcp::quantize_vector(x, mcp::Resolution(m));
    const double ratio = static_cast<double>(mcp::lz78_length(q).bits) / (n * m);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const mcp::QuantizedSignal zero(std::vector<double>(n, 0.0), mcp::Resolution(m));
  const double zratio = static_cast<double>(mcp::lz78_length(zero).bits) / (n * m);
  return {lo >= 0.85 && hi <= 1.15 && zratio <= 0.15,
          "uniform ratios in [" + fmt(lo) + ", " + fmt(hi) + "] (within [0.85, 1.15]); zero control " +
              fmt(zratio) + " (<= 0.15)"};
}

Outcome solver_oracle() {
  using mcp::Generator;
  struct Family {
    std::size_t n;
    int m;
    std::vector<Generator> gens;
    int budget;
  };
  const Family families[] = {
      {16, 4, {Generator::kConstant, Generator::kSparse}, 18},
      {12, 3, {Generator::kConstant, Generator::kSparse, Generator::kPiecewiseConstant}, 20},
      {8, 2, {Generator::kConstant, Generator::kPrngExpansion}, 18},
  };
  int agree = 0, ties = 0;
  std::size_t largest = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto& f = families[k % 3];
    mcp::CodebookSpec spec;
    spec.n = f.n;
    spec.m = mcp::Resolution(f.m);
    spec.families = f.gens;
    spec.max_seed_bits = 10;
    const mcp::ComplexityBudget budget(f.budget);
    const mcp::CandidateSet set(spec, budget);
    largest = std::max(largest, set.size());
    // Every fourth instance uses a signal with several encodings.
    const auto truth = k % 4 == 0 ? mcp::make_constant(f.n, spec.m, (k / 4) % 2)
                                  : mcp::sample_entry(spec, budget, mcp::rng::derive_seed(900, k, mcp::rng::Purpose::kTruth));
    const auto x = mcp::decode(truth).values();
    const auto a = mcp::SensingEnsemble::draw(1 + k % 7, f.n, mcp::rng::derive_seed(900, k, mcp::rng::Purpose::kMatrix));
    const auto clean = mcp::measure(a, x);
    const double delta = mcp::FeasibilityTolerance::relative_to(clean).delta();
    const auto want0 = oracle::noiseless(a, clean, spec, budget, delta);
    const auto got0 = mcp::solve_noiseless(a, clean, set, budget, mcp::FeasibilityTolerance(delta));
    const auto noisy = mcp::measure_noisy(a, x, 0.1, mcp::rng::derive_seed(900, k, mcp::rng::Purpose::kNoise));
    const auto want1 = oracle::noisy(a, noisy.y, spec, budget);
    const auto got1 = mcp::solve_noisy(a, noisy, set, budget);
    if (want0 && got0.entry == *want0 && got1.entry == want1) ++agree;
    std::size_t same = 0;
    for (const auto& e : mcp::enumerate(spec, budget)) same += mcp::decode(e).values() == x;
    ties += same > 1;
  }
  return {agree == 100 && largest <= 10000,
          std::to_string(agree) + "/100 instances agree (noiseless and noisy), " +
              std::to_string(ties) + " with duplicate encodings of the truth, largest codebook " +
              std::to_string(largest)};
}

Outcome reproducibility() {
  const char* configs[] = {
      R"({"experiment_id": "NOISELESS_SCALING", "n": [32, 64], "d": [2, 4, 6],
          "families": ["CONSTANT", "K_SPARSE", "PIECEWISE_CONSTANT"], "budget": 20,
          "trials": 40, "base_seed": 1000})",
      R"({"experiment_id": "PER_ELEMENT", "n": 64, "d_rule": "D_EQ_KAPPA_LOG_N",
          "families": ["CONSTANT", "K_SPARSE", "PRNG_EXPANSION"], "max_seed_bits": 12,
          "budget": 20, "trials": 40, "base_seed": 1001})",
      R"({"experiment_id": "STABILITY", "n": 64, "m": 4, "d_rule": "D_EQ_8R_KAPPA_M", "r": 2,
          "sigma": [0.1, 0.5], "families": ["CONSTANT", "K_SPARSE"], "budget": 20,
          "trials": 40, "base_seed": 1002})",
  };
  int identical = 0;
  std::size_t bytes = 0;
  for (const char* text : configs) {
    const auto cfg = mcp::parse_config_text(text);
    std::ostringstream a, b;
    mcp::write_csv(mcp::run_experiment(cfg), a);
    mcp::write_csv(mcp::run_experiment(cfg), b);
    identical += a.str() == b.str();
    bytes += a.str().size();
  }
  return {identical == 3, std::to_string(identical) + "/3 configs byte-identical across two runs (" +
                              std::to_string(bytes) + " bytes)"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"chi-square tails", chi_square_tails},
      {"gaussian dot product", gaussian_dot},
      {"sigma_max tail", sigma_max_tail},
      {"events E1-E5", events},
      {"noiseless recovery d = ceil(3 kappa)", noiseless_recovery},
      {"stability", stability},
      {"bound calculators", bound_calculators},
      {"LZ78 complexity surrogate", lz78_surrogate},
      {"solver vs exhaustive oracle", solver_oracle},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
