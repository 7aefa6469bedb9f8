#include "mcp/quantize.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Accepts [0,1] widened by one ulp at each end and clamps back into range.
double checked_unit(double x) {
  if (!(x >= -kEps && x <= 1.0 + kEps)) {
    throw DomainError("value " + std::to_string(x) + " outside [0, 1]");
  }
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}

}  // namespace

Resolution::Resolution(int bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw DomainError("resolution must be in [1, 53], got " + std::to_string(bits));
  }
}

double Resolution::step() const noexcept { return std::ldexp(1.0, -bits_); }

std::uint64_t truncate_code(double x, Resolution m) {
  x = checked_unit(x);
  // Multiplication by 2^m is exact, so floor() sees the true expansion.
  const double scaled = std::floor(std::ldexp(x, m.bits()));
  const auto code = static_cast<std::uint64_t>(scaled);
  return code >= m.levels() ? m.levels() - 1 : code;
}

double truncate(double x, Resolution m) {
  return std::ldexp(static_cast<double>(truncate_code(x, m)), -m.bits());
}

Bits binary_expansion(double x, Resolution m) {
  const std::uint64_t code = truncate_code(x, m);
  Bits bits(static_cast<std::size_t>(m.bits()));
  for (int i = 0; i < m.bits(); ++i) {
    bits[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((code >> (m.bits() - 1 - i)) & 1u);
  }
  return bits;
}

QuantizedSignal::QuantizedSignal(std::vector<double> values, Resolution m)
    : values_(std::move(values)), resolution_(m) {
  if (values_.empty()) throw DomainError("quantized signal must have n >= 1");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    const double scaled = std::ldexp(v, m.bits());
    if (!(v >= 0.0 && v < 1.0) || scaled != std::floor(scaled)) {
      throw DomainError("value at index " + std::to_string(i) + " is not on the 2^-" +
                        std::to_string(m.bits()) + " grid");
    }
  }
}

QuantizedSignal QuantizedSignal::from_codes(std::span<const std::uint64_t> codes, Resolution m) {
  std::vector<double> values(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] >= m.levels()) {
      throw DomainError("code at index " + std::to_string(i) + " exceeds 2^m - 1");
    }
    values[i] = std::ldexp(static_cast<double>(codes[i]), -m.bits());
  }
  return QuantizedSignal(std::move(values), m);
}

std::uint64_t QuantizedSignal::code(std::size_t i) const {
  return static_cast<std::uint64_t>(std::ldexp(values_.at(i), resolution_.bits()));
}

QuantizedSignal quantize_vector(std::span<const double> x, Resolution m) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    try {
      out[i] = truncate(x[i], m);
    } catch (const DomainError& e) {
      throw DomainError("index " + std::to_string(i) + ": " + e.what());
    }
  }
  return QuantizedSignal(std::move(out), m);
}

double quantization_error_bound(std::size_t n, Resolution m) {
  return std::sqrt(static_cast<double>(n) * std::ldexp(1.0, -2 * m.bits() + 2));
}

}  // namespace mcp
