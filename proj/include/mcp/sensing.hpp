#pragma once

// Gaussian sensing matrices, the additive noise channel and sigma_max.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mcp {

/// d x n matrix with i.i.d. N(0,1) entries, a pure function of (d, n, seed).
/// Entry (i, j) is normal number i n + j of CounterStream(seed, 0).
class SensingEnsemble {
 public:
  /// Default limit on d n, in entries (2 GiB of doubles).
  static constexpr std::size_t kDefaultMaxEntries = std::size_t{1} << 28;

  static SensingEnsemble draw(std::size_t d, std::size_t n, std::uint64_t seed,
                              std::size_t max_entries = kDefaultMaxEntries);

  /// Wraps explicit row-major entries (test matrices, files).
  static SensingEnsemble from_entries(std::size_t d, std::size_t n, std::vector<double> entries,
                                      std::uint64_t seed = 0);

  std::size_t rows() const noexcept { return d_; }
  std::size_t cols() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const noexcept {
    return std::span<const double>(entries_).subspan(i * n_, n_);
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  friend bool operator==(const SensingEnsemble&, const SensingEnsemble&) = default;

 private:
  SensingEnsemble(std::size_t d, std::size_t n, std::uint64_t seed, std::vector<double> entries);

  std::size_t d_;
  std::size_t n_;
  std::uint64_t seed_;
  std::vector<double> entries_;
};

struct MeasurementRecord {
  std::vector<double> y;
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

/// A x.
std::vector<double> measure(const SensingEnsemble& a, std::span<const double> x);

/// sigma g, g_i = normal number i of CounterStream(noise_seed, 1).
std::vector<double> noise_vector(std::size_t d, double sigma, std::uint64_t noise_seed);

/// y = A x + sigma g; with sigma = 0 this is exactly measure(a, x).
MeasurementRecord measure_noisy(const SensingEnsemble& a, std::span<const double> x, double sigma,
                                std::uint64_t noise_seed);

/// Largest singular value by power iteration on the smaller Gram matrix
/// (A^T A or A A^T; both share the nonzero spectrum). Stops when the
/// Rayleigh quotient changes by less than `rel_tol` relative; throws
/// NonConvergence after `max_iter` iterations.
double sigma_max(const SensingEnsemble& a, double rel_tol = 1e-10, int max_iter = 10000);

/// Binary layout, little-endian throughout:
///   bytes 0-7   magic "MCPENS01"
///   bytes 8-15  d (uint64)
///   bytes 16-23 n (uint64)
///   bytes 24-31 seed (uint64)
///   then d n IEEE-754 binary64 entries, row-major.
void write_ensemble(const std::string& path, const SensingEnsemble& a);
SensingEnsemble read_ensemble(const std::string& path);

}  // namespace mcp
