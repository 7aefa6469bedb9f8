#pragma once

// Monte Carlo checks of the probabilistic ingredients of the recovery
// proofs, each compared against its closed-form bound.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mcp/codebook.hpp"

namespace mcp {

/// Empirical tail frequency against an analytic bound.
///
/// pass <=> empirical_rate <= bound + 3 sqrt(b (1 - b) / trials) + 3 / trials,
/// with b = min(bound, 1) inside the square root (bounds above 1 are
/// vacuous but still reported). slack_sigmas = (bound - rate) / se with
/// se = sqrt(b (1 - b) / trials), or 1 / trials when that is zero.
struct TailCheckReport {
  std::string event_name;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double empirical_rate = 0.0;
  double analytic_bound = 0.0;
  double slack_sigmas = 0.0;
  bool pass = false;

  static TailCheckReport evaluate(std::string name, std::uint64_t trials, std::uint64_t hits,
                                  double analytic_bound);
};

struct ChiSquareBounds {
  double lower;  // P(sum Z^2 < d(1 - tau)) <= exp((d/2)(tau + ln(1 - tau)))
  double upper;  // P(sum Z^2 > d(1 + tau)) <= exp(-(d/2)(tau - ln(1 + tau)))
};

ChiSquareBounds chi_square_bounds(std::size_t d, double tau);

struct ChiSquareCheck {
  TailCheckReport lower;
  TailCheckReport upper;
};

/// Samples sum_{i<d} Z_i^2 `trials` times; trial k uses stream k under seed.
ChiSquareCheck verify_chi_square(std::size_t d, double tau, std::uint64_t trials,
                                 std::uint64_t seed);

enum class DotStatistic {
  kNormalized,  // T = X^T Y / ||X||_2, distributed N(0,1) independent of ||X||
  kRaw,         // X^T Y, the negative control
};

struct DotCheck {
  double ks_statistic;
  double independence_corr;  // Pearson correlation of |T| with ||X||_2
  double ks_critical;        // 1.63 / sqrt(trials), alpha = 0.01
  double corr_critical;      // 4 / sqrt(trials)
  bool pass;
};

DotCheck verify_gaussian_dot(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                             DotStatistic statistic = DotStatistic::kNormalized);

/// One-sample Kolmogorov-Smirnov distance to the standard normal CDF.
double ks_statistic_normal(std::vector<double> samples);

double standard_normal_cdf(double x) noexcept;

/// Deviation levels of the five events; tau and r are carried along for
/// the theorem bounds.
struct EventParams {
  double t1 = 1.0, t2 = 0.5, t3 = 0.5, t4 = 0.5, t5 = 0.5, t6 = 0.2, t7 = 0.5, t8 = 0.2;
  double tau = 0.1;
  double r = 4.0;

  /// Throws DomainError unless t1..t8 > 0, t4 < 1, t8 < 1, 0 < tau < 1,
  /// r > 1, t6 < t7 and 1 + t6 = (1 - t8)(1 + t7) to 1e-12.
  void validate() const;

  /// t2 = t4 = 1/sqrt(r), t1 = 2 sigma sqrt(d (1 + t2) (2 kappa_bits)),
  /// t6 from 1 + t6 = (1 - t8)(1 + t7). sigma = 0 gives t1 = 0, which
  /// validate() rejects; callers with noiseless data should not use E1.
  static EventParams paper_choice(double r, double d, double kappa_bits, double sigma,
                                  double t3 = 0.5, double t5 = 0.5, double t7 = 0.5,
                                  double t8 = 0.2);
};

inline constexpr std::array<const char*, 5> kEventNames = {"E1", "E2", "E3", "E4", "E5"};

struct EventBounds {
  std::array<double, 5> bound;
  double total() const noexcept;
};

/// Bounds on P(E_i^c):
///   E1  2^(2K) (e^(-d t2^2/2) + e^(-t1^2 / (2 sigma^2 d (1+t2))))
///   E2  e^(-d t3^2/2)
///   E3  2^(2K) e^((d/2)(t4 + ln(1-t4)))
///   E4  2^(2K) e^(-(d/2)(t5 - ln(1+t5)))
///   E5  e^(-(n/2)(t7 - ln(1+t7))) + e^((d/2)(t8 + ln(1-t8)))
/// with K = kappa_bits. The E4 exponent uses ln(1+t5), the upper chi-square
/// tail; with sigma = 0 the second E1 term is 0.
EventBounds event_bounds(const EventParams& params, std::size_t d, std::size_t n,
                         double kappa_bits, double sigma);

struct EventCheck {
  std::array<TailCheckReport, 5> events;
  TailCheckReport any_failure;  // union of complements vs the sum of bounds
  std::size_t distinct_signals = 0;
  std::size_t difference_set_size = 0;  // |S|, zero vector included
};

inline constexpr std::size_t kMaxDifferenceSet = 1'000'000;

/// Draws fresh (A, w) per trial and evaluates every event exactly over the
/// difference set S of decoded codebook signals within the budget. The zero
/// difference satisfies E1, E3 and E4 vacuously.
EventCheck verify_events(const EventParams& params, const CodebookSpec& spec,
                         ComplexityBudget budget, std::size_t d, double sigma,
                         std::uint64_t trials, std::uint64_t seed);

/// P(sigma_max(A) >= (1 + t3) sqrt(d) + sqrt(n)) vs e^(-d t3^2 / 2).
TailCheckReport verify_sigma_max_tail(std::size_t d, std::size_t n, double t3,
                                      std::uint64_t trials, std::uint64_t seed);

}  // namespace mcp
