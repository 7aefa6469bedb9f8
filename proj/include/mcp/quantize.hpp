#pragma once

// Binary expansions and m-bit truncation of values in [0, 1].
//
// Endpoint convention: x = 1 has no terminating expansion, so it is
// quantized as if it were 1 - 2^-(m+1); [1]_m = 1 - 2^-m. Dyadic rationals
// use their terminating expansion (0.5 -> 0.1000...).

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mcp {

using Bits = std::vector<std::uint8_t>;

/// Bits per coordinate, 1 <= m <= 53 so every grid point k 2^-m is an
/// exact double.
class Resolution {
 public:
  static constexpr int kMaxBits = 53;

  explicit Resolution(int bits);

  int bits() const noexcept { return bits_; }
  /// Grid spacing 2^-m.
  double step() const noexcept;
  /// Number of grid points, 2^m.
  std::uint64_t levels() const noexcept { return std::uint64_t{1} << bits_; }

  friend bool operator==(Resolution, Resolution) = default;

 private:
  int bits_;
};

/// First m binary digits of x, most significant first.
Bits binary_expansion(double x, Resolution m);

/// [x]_m = sum_{i<=m} 2^-i (x)_i.
double truncate(double x, Resolution m);

/// Integer k with [x]_m = k 2^-m.
std::uint64_t truncate_code(double x, Resolution m);

/// A length-n vector of m-bit dyadic values in [0, 1).
class QuantizedSignal {
 public:
  /// Throws DomainError unless every value is k 2^-m with 0 <= k < 2^m.
  QuantizedSignal(std::vector<double> values, Resolution m);

  static QuantizedSignal from_codes(std::span<const std::uint64_t> codes, Resolution m);

  std::size_t size() const noexcept { return values_.size(); }
  Resolution resolution() const noexcept { return resolution_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::uint64_t code(std::size_t i) const;

  friend bool operator==(const QuantizedSignal&, const QuantizedSignal&) = default;

 private:
  std::vector<double> values_;
  Resolution resolution_;
};

/// Coordinate-wise truncate; a DomainError names the offending index.
QuantizedSignal quantize_vector(std::span<const double> x, Resolution m);

/// sqrt(n 2^(-2m+2)): bound on the l2 distance between the quantization
/// errors of any two signals in [0,1]^n.
double quantization_error_bound(std::size_t n, Resolution m);

}  // namespace mcp
