#pragma once

// A constructive program model. Every candidate signal is the output of a
// short program: an 8-bit generator tag followed by a fixed-layout payload.
// Description length (header + payload bits) is therefore exact.
//
// Payload layouts, fields most significant bit first; ib = ceil(log2 n):
//
//   CONSTANT            [level: m]
//   K_SPARSE            [k: 2][position_1..k: ib each][value_1..k: m each]
//                       positions strictly increasing and < n
//   PIECEWISE_CONSTANT  [b: 2][breakpoint_1..b: ib each][level_0..b: m each]
//                       breakpoints strictly increasing, in [1, n-1]; segment
//                       j covers [breakpoint_j, breakpoint_j+1)
//   PRNG_EXPANSION      [seed: s], 1 <= s <= 64; see expand_prng()

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcp/quantize.hpp"

namespace mcp {

enum class Generator : std::uint8_t {
  kConstant = 0,
  kSparse = 1,
  kPiecewiseConstant = 2,
  kPrngExpansion = 3,
};

std::string_view generator_name(Generator g) noexcept;
/// Accepts the upper-case names printed by generator_name().
Generator parse_generator(std::string_view name);

inline constexpr int kHeaderBits = 8;
inline constexpr int kCountFieldBits = 2;
inline constexpr int kMaxCount = (1 << kCountFieldBits) - 1;
inline constexpr int kMaxSeedBits = 64;
inline constexpr int kDefaultBudgetCap = 26;

/// ceil(log2 n); 0 for n = 1.
int index_bits(std::size_t n) noexcept;

struct ProgramEntry {
  Generator generator;
  Bits payload;
  std::size_t n;
  Resolution m;

  friend bool operator==(const ProgramEntry&, const ProgramEntry&) = default;
};

/// header bits + payload bits.
int description_length(const ProgramEntry& entry) noexcept;

/// Deterministic output of the program. Throws MalformedPayload naming the
/// first field that violates the layout.
QuantizedSignal decode(const ProgramEntry& entry);

/// "GENERATOR:payloadbits", e.g. "K_SPARSE:0100101". Empty payloads print
/// nothing after the colon.
std::string entry_id(const ProgramEntry& entry);
ProgramEntry parse_entry_id(std::string_view id, std::size_t n, Resolution m);

/// Total order: description length, then generator tag, then payload read
/// as an unsigned integer.
bool canonical_less(const ProgramEntry& a, const ProgramEntry& b) noexcept;

// Builders for the documented layouts.
ProgramEntry make_constant(std::size_t n, Resolution m, std::uint64_t level);
ProgramEntry make_sparse(std::size_t n, Resolution m, const std::vector<std::size_t>& positions,
                         const std::vector<std::uint64_t>& values);
ProgramEntry make_piecewise(std::size_t n, Resolution m, const std::vector<std::size_t>& breakpoints,
                            const std::vector<std::uint64_t>& levels);
ProgramEntry make_prng(std::size_t n, Resolution m, std::uint64_t seed, int seed_bits);

/// The PRNG_EXPANSION bit expander, returning n integer codes.
///
///   state = splitmix64(splitmix64(seed_bits) ^ seed), replaced by
///           0x9E3779B97F4A7C15 if zero
///   word  = xorshift64 step (<<13, >>7, <<17) on state, then
///           state * 0x2545F4914F6CDD1D
///
/// Words are concatenated most significant bit first; coordinate i takes
/// the next m bits of that stream as its code.
std::vector<std::uint64_t> expand_prng(std::uint64_t seed, int seed_bits, std::size_t n,
                                       Resolution m);

/// Upper bound on description length (kappa_{m,n} m bits).
class ComplexityBudget {
 public:
  /// Throws DomainError for max_bits < 1 and BudgetTooLarge above `cap`.
  explicit ComplexityBudget(int max_bits, int cap = kDefaultBudgetCap);

  int max_bits() const noexcept { return max_bits_; }
  int cap() const noexcept { return cap_; }

 private:
  int max_bits_;
  int cap_;
};

/// Which programs the enumerator emits. Decoding accepts any valid entry;
/// these limits only restrict enumeration.
struct CodebookSpec {
  std::size_t n = 1;
  Resolution m{1};
  std::vector<Generator> families{Generator::kConstant};
  int max_sparsity = 1;     // k <= max_sparsity for K_SPARSE
  int max_breakpoints = 1;  // b <= max_breakpoints for PIECEWISE_CONSTANT
  int max_seed_bits = 16;   // s <= max_seed_bits for PRNG_EXPANSION

  void validate() const;
};

/// Visits every entry with description length <= budget in canonical order.
/// The visitor returns false to stop early.
template <typename Visitor>
void for_each_entry(const CodebookSpec& spec, ComplexityBudget budget, Visitor&& visit);

std::vector<ProgramEntry> enumerate(const CodebookSpec& spec, ComplexityBudget budget);
std::size_t count_entries(const CodebookSpec& spec, ComplexityBudget budget);

/// Uniform draw from enumerate(spec, budget), deterministic in seed.
/// Throws EmptyCodebook when nothing fits.
ProgramEntry sample_entry(const CodebookSpec& spec, ComplexityBudget budget, std::uint64_t seed);

namespace detail {

// Emits payloads of exactly `payload_bits` bits for one generator in
// increasing integer order.
class PayloadEnumerator {
 public:
  PayloadEnumerator(const CodebookSpec& spec, Generator g, int payload_bits);
  bool next(Bits& payload);

 private:
  bool advance();

  const CodebookSpec* spec_;
  Generator generator_;
  int payload_bits_;
  int count_ = -1;  // k or b; -1 when the length admits no payload
  std::vector<std::size_t> indices_;
  std::vector<std::uint64_t> levels_;
  std::uint64_t seed_ = 0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace detail

template <typename Visitor>
void for_each_entry(const CodebookSpec& spec, ComplexityBudget budget, Visitor&& visit) {
  spec.validate();
  std::vector<Generator> families = spec.families;
  std::sort(families.begin(), families.end());
  families.erase(std::unique(families.begin(), families.end()), families.end());
  Bits payload;
  for (int length = kHeaderBits + 1; length <= budget.max_bits(); ++length) {
    for (Generator g : families) {
      detail::PayloadEnumerator payloads(spec, g, length - kHeaderBits);
      while (payloads.next(payload)) {
        if (!visit(ProgramEntry{g, payload, spec.n, spec.m})) return;
      }
    }
  }
}

}  // namespace mcp
