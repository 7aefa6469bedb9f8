#pragma once

// Computable upper bounds on the description length of arbitrary quantized
// signals. Each estimator is the exact length of one concrete code, so it
// bounds complexity only within that coding scheme.

#include <cstdint>
#include <span>
#include <string_view>

#include "mcp/quantize.hpp"

namespace mcp {

enum class Estimator { kLz78, kSparse, kRaw };

std::string_view estimator_name(Estimator e) noexcept;

struct ComplexityEstimate {
  std::uint64_t bits;
  Estimator estimator;
};

/// n m + 8: the signal's expansion bits stored verbatim.
ComplexityEstimate raw_length(const QuantizedSignal& sig);

/// 8 + ceil(log2(n+1)) + k (ceil(log2 n) + m), k = number of nonzeros.
ComplexityEstimate sparse_length(const QuantizedSignal& sig);

/// 8 + LZ78 code length of the concatenated n m expansion bits.
ComplexityEstimate lz78_length(const QuantizedSignal& sig);

/// LZ78 incremental parse of a bit string. Phrase j (1-based, including a
/// trailing partial phrase) costs ceil(log2(j + 1)) + 1 bits: a pointer
/// into the dictionary of j + 1 entries it is about to occupy (the root
/// included) plus the innovation bit. No header, no dictionary reset.
std::uint64_t lz78_code_bits(std::span<const std::uint8_t> bits);

/// Number of phrases in the same parse.
std::uint64_t lz78_phrase_count(std::span<const std::uint8_t> bits);

/// Concatenated m-bit expansions of every coordinate.
Bits signal_bits(const QuantizedSignal& sig);

/// Minimum over the estimators above; ties resolve to LZ78, then SPARSE,
/// then RAW.
ComplexityEstimate best_estimate(const QuantizedSignal& sig);

}  // namespace mcp
