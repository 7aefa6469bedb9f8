#pragma once

// Exhaustive minimum-complexity pursuit over the codebook:
//
//   noiseless:  min description_length(e)  s.t. ||A decode(e) - y|| <= delta
//   noisy:      min ||A decode(e) - y||     s.t. description_length(e) <= budget
//
// Both scan candidates in canonical order and keep the first optimum, so
// ties resolve to the canonically smallest entry.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcp/codebook.hpp"
#include "mcp/quantize.hpp"
#include "mcp/sensing.hpp"

namespace mcp {

struct RecoveryResult {
  ProgramEntry entry;
  QuantizedSignal x_hat;
  double residual;  // ||A x_hat - y||_2
  int complexity_bits;
  std::size_t candidates_scored;
};

class FeasibilityTolerance {
 public:
  explicit FeasibilityTolerance(double delta);
  /// factor * max(1, ||y||_2).
  static FeasibilityTolerance relative_to(std::span<const double> y, double factor = 1e-9);

  double delta() const noexcept { return delta_; }

 private:
  double delta_;
};

/// The decoded codebook up to a budget, in canonical order. Decoding once
/// and reusing across trials is what makes repeated solves cheap.
///
/// Each signal is kept as baseline * 1 + sparse deviations, where the
/// baseline is x[0] if it occurs more often than 0 and 0 otherwise. The form
/// depends only on the decoded values, so entries that decode to the same
/// signal are scored by identical arithmetic.
class CandidateSet {
 public:
  CandidateSet(const CodebookSpec& spec, ComplexityBudget budget);

  std::size_t size() const noexcept { return candidates_.size(); }
  const CodebookSpec& spec() const noexcept { return spec_; }
  int budget_bits() const noexcept { return budget_bits_; }
  const ProgramEntry& entry(std::size_t i) const { return candidates_.at(i).entry; }
  int length(std::size_t i) const { return candidates_.at(i).bits; }
  /// Number of leading candidates with description length <= max_bits.
  std::size_t prefix_size(int max_bits) const noexcept;

  struct Candidate {
    ProgramEntry entry;
    int bits;
    double baseline;
    std::vector<std::uint32_t> index;
    std::vector<double> value;
  };
  const Candidate& candidate(std::size_t i) const { return candidates_.at(i); }

 private:
  CodebookSpec spec_;
  int budget_bits_;
  std::vector<Candidate> candidates_;
};

RecoveryResult solve_noiseless(const SensingEnsemble& a, std::span<const double> y,
                               const CandidateSet& candidates, ComplexityBudget budget,
                               FeasibilityTolerance tol);
RecoveryResult solve_noiseless(const SensingEnsemble& a, std::span<const double> y,
                               const CodebookSpec& spec, ComplexityBudget budget,
                               FeasibilityTolerance tol);

RecoveryResult solve_noisy(const SensingEnsemble& a, const MeasurementRecord& y,
                           const CandidateSet& candidates, ComplexityBudget budget);
RecoveryResult solve_noisy(const SensingEnsemble& a, const MeasurementRecord& y,
                           const CodebookSpec& spec, ComplexityBudget budget);

struct ReconstructionError {
  double l2;
  double l2_per_element;
  double quantized_l2;  // ||[x_hat]_m - [truth]_m||_2
};

ReconstructionError reconstruction_error(const RecoveryResult& result,
                                         std::span<const double> truth);

}  // namespace mcp
