#include "mcp/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <unordered_set>

#include "mcp/errors.hpp"
#include "mcp/parallel.hpp"
#include "mcp/rng.hpp"
#include "mcp/sensing.hpp"

namespace mcp {

namespace {

constexpr std::uint64_t kMinTrials = 10'000;

void require_trials(std::uint64_t trials) {
  if (trials < kMinTrials) throw DomainError("Monte Carlo checks need at least 10^4 trials");
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Packs a code difference vector into bytes for exact set membership.
std::string pack_difference(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                            int width) {
  std::string key;
  key.reserve(a.size() * static_cast<std::size_t>(width));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto diff = static_cast<std::uint64_t>(static_cast<std::int64_t>(a[i]) -
                                                 static_cast<std::int64_t>(b[i]));
    for (int byte = 0; byte < width; ++byte) key.push_back(static_cast<char>((diff >> (8 * byte)) & 0xFF));
  }
  return key;
}

}  // namespace

TailCheckReport TailCheckReport::evaluate(std::string name, std::uint64_t trials,
                                          std::uint64_t hits, double analytic_bound) {
  TailCheckReport r;
  r.event_name = std::move(name);
  r.trials = trials;
  r.hits = hits;
  r.empirical_rate = trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
  r.analytic_bound = analytic_bound;
  const double t = static_cast<double>(trials);
  const double b = std::clamp(analytic_bound, 0.0, 1.0);
  const double se = std::sqrt(b * (1.0 - b) / t);
  r.pass = r.empirical_rate <= analytic_bound + 3.0 * se + 3.0 / t;
  r.slack_sigmas = (analytic_bound - r.empirical_rate) / (se > 0.0 ? se : 1.0 / t);
  return r;
}

ChiSquareBounds chi_square_bounds(std::size_t d, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("chi-square bounds need 0 < tau < 1");
  if (d < 1) throw DomainError("chi-square bounds need d >= 1");
  const double half = 0.5 * static_cast<double>(d);
  return {std::exp(half * (tau + std::log1p(-tau))), std::exp(-half * (tau - std::log1p(tau)))};
}

ChiSquareCheck verify_chi_square(std::size_t d, double tau, std::uint64_t trials,
                                 std::uint64_t seed) {
  require_trials(trials);
  const auto bounds = chi_square_bounds(d, tau);
  const double low = static_cast<double>(d) * (1.0 - tau);
  const double high = static_cast<double>(d) * (1.0 + tau);
  std::vector<std::uint8_t> outcome(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    std::vector<double> z(d);
    rng::CounterStream(seed, k).fill_normal(z);
    double s = 0.0;
    for (double v : z) s += v * v;
    outcome[k] = static_cast<std::uint8_t>((s < low ? 1 : 0) | (s > high ? 2 : 0));
  });
  std::uint64_t lower_hits = 0, upper_hits = 0;
  for (auto o : outcome) {
    lower_hits += o & 1u;
    upper_hits += (o >> 1) & 1u;
  }
  const std::string tag = "(d=" + std::to_string(d) + ",tau=" + std::to_string(tau) + ")";
  return {TailCheckReport::evaluate("CHI2_LOWER" + tag, trials, lower_hits, bounds.lower),
          TailCheckReport::evaluate("CHI2_UPPER" + tag, trials, upper_hits, bounds.upper)};
}

double standard_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double ks_statistic_normal(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = standard_normal_cdf(samples[i]);
    worst = std::max({worst, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return worst;
}

DotCheck verify_gaussian_dot(std::size_t n, std::uint64_t trials, std::uint64_t seed,
                             DotStatistic statistic) {
  if (n < 1) throw DomainError("gaussian dot check needs n >= 1");
  require_trials(trials);
  std::vector<double> t(trials), abs_t(trials), norm_x(trials);
  std::vector<std::uint8_t> degenerate(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    std::vector<double> xy(2 * n);
    rng::CounterStream(seed, k).fill_normal(xy);
    double dot = 0.0, xx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot += xy[i] * xy[n + i];
      xx += xy[i] * xy[i];
    }
    const double norm = std::sqrt(xx);
    if (norm == 0.0) degenerate[k] = 1;
    t[k] = statistic == DotStatistic::kNormalized ? dot / norm : dot;
    abs_t[k] = std::abs(t[k]);
    norm_x[k] = norm;
  });
  if (std::find(degenerate.begin(), degenerate.end(), 1) != degenerate.end()) {
    throw std::runtime_error("degenerate draw: ||X||_2 = 0");
  }
  DotCheck out;
  out.ks_statistic = ks_statistic_normal(std::move(t));
  out.independence_corr = pearson(abs_t, norm_x);
  const double root = std::sqrt(static_cast<double>(trials));
  out.ks_critical = 1.63 / root;
  out.corr_critical = 4.0 / root;
  out.pass = out.ks_statistic < out.ks_critical && std::abs(out.independence_corr) < out.corr_critical;
  return out;
}

void EventParams::validate() const {
  for (double t : {t1, t2, t3, t4, t5, t6, t7, t8}) {
    if (!(t > 0.0)) throw DomainError("event parameters t1..t8 must be positive");
  }
  if (!(t4 < 1.0) || !(t8 < 1.0)) throw DomainError("event parameters need t4 < 1 and t8 < 1");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("event parameters need 0 < tau < 1");
  if (!(r > 1.0)) throw DomainError("event parameters need r > 1");
  if (!(t6 < t7)) throw DomainError("event parameters need t6 < t7");
  if (std::abs((1.0 + t6) - (1.0 - t8) * (1.0 + t7)) > 1e-12) {
    throw DomainError("event parameters need 1 + t6 = (1 - t8)(1 + t7)");
  }
}

EventParams EventParams::paper_choice(double r, double d, double kappa_bits, double sigma,
                                      double t3, double t5, double t7, double t8) {
  if (!(r > 1.0)) throw DomainError("event parameters need r > 1");
  EventParams p;
  p.r = r;
  p.t2 = p.t4 = 1.0 / std::sqrt(r);
  p.t1 = 2.0 * sigma * std::sqrt(d * (1.0 + p.t2) * (2.0 * kappa_bits));
  p.t3 = t3;
  p.t5 = t5;
  p.t7 = t7;
  p.t8 = t8;
  p.t6 = (1.0 - t8) * (1.0 + t7) - 1.0;
  return p;
}

double EventBounds::total() const noexcept {
  double s = 0.0;
  for (double b : bound) s += b;
  return s;
}

EventBounds event_bounds(const EventParams& p, std::size_t d, std::size_t n, double kappa_bits,
                         double sigma) {
  p.validate();
  if (d < 1 || n < 1) throw DomainError("event bounds need d, n >= 1");
  if (!(sigma >= 0.0) || !(kappa_bits >= 0.0)) throw DomainError("event bounds need sigma, kappa >= 0");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double log_count = 2.0 * kappa_bits * std::numbers::ln2;  // ln 2^(2K)
  const double noise_term =
      sigma > 0.0 ? std::exp(log_count - p.t1 * p.t1 / (2.0 * sigma * sigma * dd * (1.0 + p.t2)))
                  : 0.0;
  EventBounds b;
  b.bound[0] = std::exp(log_count - dd * p.t2 * p.t2 / 2.0) + noise_term;
  b.bound[1] = std::exp(-dd * p.t3 * p.t3 / 2.0);
  b.bound[2] = std::exp(log_count + 0.5 * dd * (p.t4 + std::log1p(-p.t4)));
  b.bound[3] = std::exp(log_count - 0.5 * dd * (p.t5 - std::log1p(p.t5)));
  b.bound[4] = std::exp(-0.5 * nn * (p.t7 - std::log1p(p.t7))) +
               std::exp(0.5 * dd * (p.t8 + std::log1p(-p.t8)));
  return b;
}

TailCheckReport verify_sigma_max_tail(std::size_t d, std::size_t n, double t3,
                                      std::uint64_t trials, std::uint64_t seed) {
  if (!(t3 > 0.0)) throw DomainError("sigma_max tail needs t3 > 0");
  const double level = (1.0 + t3) * std::sqrt(static_cast<double>(d)) + std::sqrt(static_cast<double>(n));
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    const auto a = SensingEnsemble::draw(d, n, rng::derive_seed(seed, k, rng::Purpose::kMatrix));
    hit[k] = sigma_max(a) >= level;
  });
  const auto hits = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1));
  return TailCheckReport::evaluate("SIGMA_MAX", trials, hits,
                                   std::exp(-static_cast<double>(d) * t3 * t3 / 2.0));
}

EventCheck verify_events(const EventParams& params, const CodebookSpec& spec,
                         ComplexityBudget budget, std::size_t d, double sigma,
                         std::uint64_t trials, std::uint64_t seed) {
  params.validate();
  const std::size_t n = spec.n;

  // Distinct decoded signals, first occurrence in canonical order.
  std::vector<std::vector<std::uint64_t>> codes;
  {
    std::set<std::vector<std::uint64_t>> seen;
    for_each_entry(spec, budget, [&](const ProgramEntry& e) {
      const auto x = decode(e);
      std::vector<std::uint64_t> c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = x.code(i);
      if (seen.insert(c).second) codes.push_back(std::move(c));
      return true;
    });
  }
  const std::size_t u = codes.size();

  EventCheck out;
  out.distinct_signals = u;
  {
    const int width = (spec.m.bits() + 1 + 7) / 8;
    std::unordered_set<std::string> differences;
    for (std::size_t i = 0; i < u; ++i) {
      for (std::size_t j = 0; j < u; ++j) {
        differences.insert(pack_difference(codes[i], codes[j], width));
        if (differences.size() > kMaxDifferenceSet) {
          throw DifferenceSetTooLarge("difference set exceeds 10^6 vectors");
        }
      }
    }
    out.difference_set_size = differences.size();
  }

  const double step = spec.m.step();
  std::vector<double> values(u * n);
  for (std::size_t s = 0; s < u; ++s) {
    for (std::size_t i = 0; i < n; ++i) values[s * n + i] = static_cast<double>(codes[s][i]) * step;
  }
  // ||h||^2 for each unordered pair i < j, row by row.
  std::vector<double> pair_norm2;
  pair_norm2.reserve(u * (u - 1) / 2);
  for (std::size_t i = 0; i < u; ++i) {
    for (std::size_t j = i + 1; j < u; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double h = values[i * n + t] - values[j * n + t];
        s += h * h;
      }
      pair_norm2.push_back(s);
    }
  }

  const double dd = static_cast<double>(d);
  const double e2_level = (1.0 + params.t3) * std::sqrt(dd) + std::sqrt(static_cast<double>(n));
  const double e5_level = static_cast<double>(n) * dd * (1.0 + params.t6);
  std::vector<std::uint8_t> failures(trials, 0);  // bit e set when E_{e+1} fails

  parallel_for(trials, [&](std::size_t k) {
    const auto a = SensingEnsemble::draw(d, n, rng::derive_seed(seed, k, rng::Purpose::kMatrix));
    const auto w = noise_vector(d, sigma, rng::derive_seed(seed, k, rng::Purpose::kNoise));
    std::vector<double> images(u * d);
    std::vector<double> w_images(u);
    for (std::size_t s = 0; s < u; ++s) {
      const auto img = measure(a, std::span<const double>(values).subspan(s * n, n));
      double wi = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        images[s * d + r] = img[r];
        wi += w[r] * img[r];
      }
      w_images[s] = wi;
    }
    bool e1 = false, e3 = false, e4 = false;
    std::size_t pair = 0;
    for (std::size_t i = 0; i < u && !(e1 && e3 && e4); ++i) {
      for (std::size_t j = i + 1; j < u; ++j, ++pair) {
        const double h2 = pair_norm2[pair];
        const double* ai = images.data() + i * d;
        const double* aj = images.data() + j * d;
        double ah2 = 0.0;
        for (std::size_t r = 0; r < d; ++r) {
          const double diff = ai[r] - aj[r];
          ah2 += diff * diff;
        }
        e1 = e1 || std::abs(w_images[i] - w_images[j]) > params.t1 * std::sqrt(h2);
        e3 = e3 || ah2 <= (1.0 - params.t4) * dd * h2;
        e4 = e4 || ah2 >= (1.0 + params.t5) * dd * h2;
      }
    }
    const bool e2 = sigma_max(a) >= e2_level;
    double atw2 = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < d; ++r) s += a(r, c) * w[r];
      atw2 += s * s;
    }
    const bool e5 = atw2 > e5_level;
    failures[k] = static_cast<std::uint8_t>(e1 | (e2 << 1) | (e3 << 2) | (e4 << 3) | (e5 << 4));
  });

  const auto bounds = event_bounds(params, d, n, static_cast<double>(budget.max_bits()), sigma);
  std::uint64_t any = 0;
  for (std::size_t e = 0; e < 5; ++e) {
    std::uint64_t hits = 0;
    for (auto f : failures) hits += (f >> e) & 1u;
    out.events[e] = TailCheckReport::evaluate(kEventNames[e], trials, hits, bounds.bound[e]);
  }
  for (auto f : failures) any += f != 0;
  out.any_failure = TailCheckReport::evaluate("ANY", trials, any, bounds.total());
  return out;
}

}  // namespace mcp
