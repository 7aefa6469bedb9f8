#include "mcp/bounds.hpp"

#include <cmath>
#include <numbers>

#include "mcp/errors.hpp"

namespace mcp {

Theorem1Bound theorem1_rhs(const BoundInputs& b) {
  if (!(b.tau > 0.0 && b.tau <= 1.0)) throw DomainError("theorem 1 needs 0 < tau <= 1");
  if (!(b.t >= 0.0)) throw DomainError("theorem 1 needs t >= 0");
  if (!(b.n > 0.0 && b.d > 0.0 && b.kappa_bits >= 0.0)) {
    throw DomainError("theorem 1 needs n, d > 0 and kappa_bits >= 0");
  }
  const double quant = std::sqrt(b.n * std::ldexp(1.0, -2 * b.m + 2));
  const double threshold = (std::sqrt(b.n / b.d + b.t + 1.0) + 1.0) / b.tau * quant;
  const double exponent = 2.0 * b.kappa_bits * std::numbers::ln2 +
                          0.5 * b.d * (1.0 - b.tau * b.tau + 2.0 * std::log(b.tau));
  return {threshold, std::exp(exponent) + std::exp(-0.5 * b.d * b.t * b.t)};
}

double stability_rho(double r) {
  if (!(r > 1.0)) throw DomainError("stability needs r > 1");
  const double gap = 1.0 - 1.0 / std::sqrt(r);
  return gap * gap / 2.0;
}

double theorem2_bound(double kappa_bits, double sigma, double d, double r) {
  if (!(d > 0.0)) throw DomainError("theorem 2 needs d > 0");
  return 2.0 * kappa_bits * sigma * sigma / (stability_rho(r) * d);
}

GammaConstants gamma_constants(double t2, double t3, double t4, double t5, double t6) {
  if (!(t4 < 1.0)) throw DomainError("gamma constants need t4 < 1");
  if (!(t2 >= 0.0 && t3 >= 0.0 && t4 >= 0.0 && t5 >= 0.0 && t6 >= 0.0)) {
    throw DomainError("gamma constants need nonnegative t's");
  }
  const double inv = 1.0 / (1.0 - t4);
  const double s5 = std::sqrt(1.0 + t5);
  return {s5 * (1.0 + t3) * inv, s5 * inv, std::sqrt(1.0 + t2) * inv, std::sqrt(1.0 + t6) * inv};
}

int natural_log_resolution(std::size_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
  const int m = static_cast<int>(std::ceil(std::log(static_cast<double>(n))));
  return m < 1 ? 1 : m;
}

}  // namespace mcp
