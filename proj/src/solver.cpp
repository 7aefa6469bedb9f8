#include "mcp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcp/errors.hpp"

namespace mcp {

namespace {

// A in column-major order plus A 1, for scoring baseline + deviations.
class ScoringOperator {
 public:
  explicit ScoringOperator(const SensingEnsemble& a)
      : d_(a.rows()), columns_(a.rows() * a.cols()), row_sums_(a.rows(), 0.0) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const auto row = a.row(i);
      for (std::size_t j = 0; j < a.cols(); ++j) {
        columns_[j * d_ + i] = row[j];
        row_sums_[i] += row[j];
      }
    }
  }

  double squared_residual(const CandidateSet::Candidate& c, std::span<const double> y,
                          std::vector<double>& r) const {
    r.resize(d_);
    if (c.baseline != 0.0) {
      for (std::size_t i = 0; i < d_; ++i) r[i] = c.baseline * row_sums_[i] - y[i];
    } else {
      for (std::size_t i = 0; i < d_; ++i) r[i] = -y[i];
    }
    for (std::size_t t = 0; t < c.index.size(); ++t) {
      const double coef = c.value[t] - c.baseline;
      const double* col = columns_.data() + std::size_t{c.index[t]} * d_;
      for (std::size_t i = 0; i < d_; ++i) r[i] += coef * col[i];
    }
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
  }

 private:
  std::size_t d_;
  std::vector<double> columns_;
  std::vector<double> row_sums_;
};

void check_inputs(const SensingEnsemble& a, std::span<const double> y,
                  const CandidateSet& candidates, ComplexityBudget budget) {
  if (y.size() != a.rows()) {
    throw DimensionMismatch("measurement length " + std::to_string(y.size()) + " != d = " +
                            std::to_string(a.rows()));
  }
  if (candidates.spec().n != a.cols()) {
    throw DimensionMismatch("codebook n != ensemble columns");
  }
  if (budget.max_bits() > candidates.budget_bits()) {
    throw std::invalid_argument("budget exceeds the candidate set's enumeration budget");
  }
}

RecoveryResult make_result(const CandidateSet& candidates, std::size_t best, double sq,
                           std::size_t scored) {
  const auto& entry = candidates.entry(best);
  return {entry, decode(entry), std::sqrt(sq), candidates.length(best), scored};
}

}  // namespace

FeasibilityTolerance::FeasibilityTolerance(double delta) : delta_(delta) {
  if (!(delta >= 0.0)) throw DomainError("feasibility tolerance must be >= 0");
}

FeasibilityTolerance FeasibilityTolerance::relative_to(std::span<const double> y, double factor) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return FeasibilityTolerance(factor * std::max(1.0, std::sqrt(s)));
}

CandidateSet::CandidateSet(const CodebookSpec& spec, ComplexityBudget budget)
    : spec_(spec), budget_bits_(budget.max_bits()) {
  for_each_entry(spec, budget, [&](const ProgramEntry& e) {
    const QuantizedSignal x = decode(e);
    const auto& v = x.values();
    const auto zeros = std::count(v.begin(), v.end(), 0.0);
    const auto firsts = std::count(v.begin(), v.end(), v.front());
    Candidate c{e, description_length(e), firsts > zeros ? v.front() : 0.0, {}, {}};
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != c.baseline) {
        c.index.push_back(static_cast<std::uint32_t>(j));
        c.value.push_back(v[j]);
      }
    }
    candidates_.push_back(std::move(c));
    return true;
  });
}

std::size_t CandidateSet::prefix_size(int max_bits) const noexcept {
  const auto it = std::partition_point(candidates_.begin(), candidates_.end(),
                                       [&](const Candidate& c) { return c.bits <= max_bits; });
  return static_cast<std::size_t>(it - candidates_.begin());
}

RecoveryResult solve_noiseless(const SensingEnsemble& a, std::span<const double> y,
                               const CandidateSet& candidates, ComplexityBudget budget,
                               FeasibilityTolerance tol) {
  check_inputs(a, y, candidates, budget);
  const ScoringOperator op(a);
  const std::size_t limit = candidates.prefix_size(budget.max_bits());
  std::vector<double> scratch;
  // Canonical order is length-first, so the first feasible entry is the
  // minimum description length solution.
  for (std::size_t i = 0; i < limit; ++i) {
    const double sq = op.squared_residual(candidates.candidate(i), y, scratch);
    if (std::sqrt(sq) <= tol.delta()) return make_result(candidates, i, sq, i + 1);
  }
  throw NoFeasibleCandidate("no entry within " + std::to_string(budget.max_bits()) +
                            " bits meets the measurements within delta = " +
                            std::to_string(tol.delta()));
}

RecoveryResult solve_noiseless(const SensingEnsemble& a, std::span<const double> y,
                               const CodebookSpec& spec, ComplexityBudget budget,
                               FeasibilityTolerance tol) {
  return solve_noiseless(a, y, CandidateSet(spec, budget), budget, tol);
}

RecoveryResult solve_noisy(const SensingEnsemble& a, const MeasurementRecord& y,
                           const CandidateSet& candidates, ComplexityBudget budget) {
  check_inputs(a, y.y, candidates, budget);
  const std::size_t limit = candidates.prefix_size(budget.max_bits());
  if (limit == 0) throw EmptyCodebook("no codebook entry fits the budget");
  const ScoringOperator op(a);
  std::vector<double> scratch;
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < limit; ++i) {
    const double sq = op.squared_residual(candidates.candidate(i), y.y, scratch);
    if (sq < best_sq) {
      best_sq = sq;
      best = i;
    }
  }
  return make_result(candidates, best, best_sq, limit);
}

RecoveryResult solve_noisy(const SensingEnsemble& a, const MeasurementRecord& y,
                           const CodebookSpec& spec, ComplexityBudget budget) {
  return solve_noisy(a, y, CandidateSet(spec, budget), budget);
}

ReconstructionError reconstruction_error(const RecoveryResult& result,
                                         std::span<const double> truth) {
  const auto& xh = result.x_hat.values();
  if (truth.size() != xh.size()) throw DimensionMismatch("truth length != recovered length");
  const QuantizedSignal truth_q = quantize_vector(truth, result.x_hat.resolution());
  double l2 = 0.0;
  double ql2 = 0.0;
  for (std::size_t i = 0; i < xh.size(); ++i) {
    l2 += (xh[i] - truth[i]) * (xh[i] - truth[i]);
    ql2 += (xh[i] - truth_q[i]) * (xh[i] - truth_q[i]);
  }
  l2 = std::sqrt(l2);
  return {l2, l2 / std::sqrt(static_cast<double>(xh.size())), std::sqrt(ql2)};
}

}  // namespace mcp
