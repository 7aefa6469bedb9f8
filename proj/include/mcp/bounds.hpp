#pragma once

// Closed-form recovery guarantees. Logarithms are natural; kappa_bits is the
// product kappa_{m,n} m, so 2^(2 kappa m) is written 2^(2 kappa_bits).

#include <cstddef>

namespace mcp {

struct BoundInputs {
  double kappa_bits = 1.0;
  int m = 1;
  double n = 1.0;
  double d = 1.0;
  double sigma = 0.0;
  double r = 2.0;
  double tau = 0.1;
  double t = 1.0;
};

struct Theorem1Bound {
  double threshold;          // error level the l2 distance may exceed
  double probability_bound;  // bound on the probability that it does
};

/// Noiseless MCP guarantee:
///   threshold = (sqrt(n/d + t + 1) + 1) / tau * sqrt(n 2^(-2m+2))
///   bound     = 2^(2 kappa_bits) e^((d/2)(1 - tau^2 + 2 ln tau)) + e^(-d t^2 / 2)
/// Requires 0 < tau <= 1 and t >= 0 (tau = 1 and t = 0 are the closed
/// endpoints of the stated ranges).
Theorem1Bound theorem1_rhs(const BoundInputs& b);

/// rho = (1 - r^(-1/2))^2 / 2, r > 1.
double stability_rho(double r);

/// Squared-error level of the noisy guarantee: 2 kappa_bits sigma^2 / (rho d).
double theorem2_bound(double kappa_bits, double sigma, double d, double r);

struct GammaConstants {
  double g1, g2, g3, g4;
};

/// g1 = sqrt(1+t5)(1+t3)/(1-t4), g2 = sqrt(1+t5)/(1-t4),
/// g3 = sqrt(1+t2)/(1-t4),       g4 = sqrt(1+t6)/(1-t4).
GammaConstants gamma_constants(double t2, double t3, double t4, double t5, double t6);

/// m = ceil(ln n), the resolution schedule used by the corollaries.
int natural_log_resolution(std::size_t n);

}  // namespace mcp
