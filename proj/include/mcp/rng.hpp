#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream, index), so results do not depend on evaluation order.

#include <array>
#include <cstdint>
#include <span>

namespace mcp::rng {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Purpose tags used when deriving per-trial seeds.
enum class Purpose : std::uint64_t {
  kTruth = 1,
  kMatrix = 2,
  kNoise = 3,
  kMonteCarlo = 4,
};

/// Seed for trial `index` and `purpose` under `base`. Independent of how
/// many other trials exist or the order they run in.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index,
                          Purpose purpose) noexcept;

/// A random-access stream of 64-bit words, uniforms and standard normals.
///
/// Block b of the stream is philox(counter = {lo(b), hi(b), lo(stream),
/// hi(stream)}, key = {lo(seed), hi(seed)}). Each block yields two 64-bit
/// words, i.e. two uniforms or one Box-Muller pair of normals.
class CounterStream {
 public:
  explicit CounterStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  /// Words 2b and 2b+1 come from block b.
  std::uint64_t word_at(std::uint64_t index) const noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t index) const noexcept;
  /// Normal number `index`; normals 2b and 2b+1 are the cosine and sine
  /// halves of one Box-Muller transform on block b.
  double normal_at(std::uint64_t index) const noexcept;
  /// out[i] = normal_at(first + i).
  void fill_normal(std::span<double> out, std::uint64_t first = 0) const noexcept;

  // Sequential interface over the same word sequence.
  std::uint64_t next_word() noexcept { return word_at(position_++); }
  double next_uniform() noexcept;
  /// Uniform integer in [0, bound), bound > 0; rejection sampling on words.
  std::uint64_t next_below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 2> block_words(std::uint64_t block) const noexcept;
  std::array<double, 2> normal_pair(std::uint64_t block) const noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
};

}  // namespace mcp::rng
