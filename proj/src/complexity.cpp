#include "mcp/complexity.hpp"

#include <array>
#include <bit>
#include <vector>

#include "mcp/codebook.hpp"

namespace mcp {

namespace {

std::uint64_t ceil_log2(std::uint64_t x) {
  return x <= 1 ? 0 : static_cast<std::uint64_t>(std::bit_width(x - 1));
}

struct Lz78Parse {
  std::uint64_t phrases = 0;
  std::uint64_t bits = 0;
};

// Binary trie stored as child index pairs; node 0 is the empty phrase.
Lz78Parse parse_lz78(std::span<const std::uint8_t> input) {
  std::vector<std::array<std::uint32_t, 2>> trie(1, {0, 0});
  Lz78Parse out;
  auto close_phrase = [&] {
    ++out.phrases;
    out.bits += ceil_log2(out.phrases + 1) + 1;
  };
  std::uint32_t node = 0;
  for (std::uint8_t b : input) {
    const std::uint32_t child = trie[node][b & 1u];
    if (child != 0) {
      node = child;
      continue;
    }
    trie[node][b & 1u] = static_cast<std::uint32_t>(trie.size());
    trie.push_back({0, 0});
    close_phrase();
    node = 0;
  }
  if (node != 0) close_phrase();
  return out;
}

}  // namespace

std::string_view estimator_name(Estimator e) noexcept {
  switch (e) {
    case Estimator::kLz78: return "LZ78";
    case Estimator::kSparse: return "SPARSE";
    case Estimator::kRaw: return "RAW";
  }
  return "?";
}

Bits signal_bits(const QuantizedSignal& sig) {
  const int m = sig.resolution().bits();
  Bits out;
  out.reserve(sig.size() * static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < sig.size(); ++i) {
    const std::uint64_t code = sig.code(i);
    for (int b = m - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((code >> b) & 1u));
  }
  return out;
}

ComplexityEstimate raw_length(const QuantizedSignal& sig) {
  return {sig.size() * static_cast<std::uint64_t>(sig.resolution().bits()) + kHeaderBits,
          Estimator::kRaw};
}

ComplexityEstimate sparse_length(const QuantizedSignal& sig) {
  const std::uint64_t n = sig.size();
  std::uint64_t k = 0;
  for (double v : sig.values()) k += (v != 0.0);
  const std::uint64_t per = ceil_log2(n) + static_cast<std::uint64_t>(sig.resolution().bits());
  return {kHeaderBits + ceil_log2(n + 1) + k * per, Estimator::kSparse};
}

std::uint64_t lz78_code_bits(std::span<const std::uint8_t> bits) { return parse_lz78(bits).bits; }

std::uint64_t lz78_phrase_count(std::span<const std::uint8_t> bits) {
  return parse_lz78(bits).phrases;
}

ComplexityEstimate lz78_length(const QuantizedSignal& sig) {
  const Bits bits = signal_bits(sig);
  return {kHeaderBits + lz78_code_bits(bits), Estimator::kLz78};
}

ComplexityEstimate best_estimate(const QuantizedSignal& sig) {
  ComplexityEstimate best = lz78_length(sig);
  for (const auto& e : {sparse_length(sig), raw_length(sig)}) {
    if (e.bits < best.bits) best = e;
  }
  return best;
}

}  // namespace mcp
