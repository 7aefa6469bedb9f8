#include "mcp/rng.hpp"

#include <cmath>
#include <numbers>

namespace mcp::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline PhiloxCounter philox_round(const PhiloxCounter& c, const PhiloxKey& k) noexcept {
  const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

inline PhiloxCounter make_counter(std::uint64_t block, std::uint64_t stream) noexcept {
  return {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
}

__extension__ typedef unsigned __int128 uint128;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept {
  counter = philox_round(counter, key);
  for (int round = 1; round < 10; ++round) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    counter = philox_round(counter, key);
  }
  return counter;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, Purpose purpose) noexcept {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ull));
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream) {}

std::array<std::uint64_t, 2> CounterStream::block_words(std::uint64_t block) const noexcept {
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(make_counter(block, stream_), key);
  return {(std::uint64_t{out[1]} << 32) | out[0], (std::uint64_t{out[3]} << 32) | out[2]};
}

std::uint64_t CounterStream::word_at(std::uint64_t index) const noexcept {
  return block_words(index / 2)[index % 2];
}

double CounterStream::uniform_at(std::uint64_t index) const noexcept {
  return static_cast<double>(word_at(index) >> 11) * kTwoPow53Inv;
}

std::array<double, 2> CounterStream::normal_pair(std::uint64_t block) const noexcept {
  const auto w = block_words(block);
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((w[0] >> 11) + 1) * kTwoPow53Inv;
  const double u2 = static_cast<double>(w[1] >> 11) * kTwoPow53Inv;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double CounterStream::normal_at(std::uint64_t index) const noexcept {
  return normal_pair(index / 2)[index % 2];
}

void CounterStream::fill_normal(std::span<double> out, std::uint64_t first) const noexcept {
  std::size_t i = 0;
  std::uint64_t index = first;
  if (index % 2 == 1 && i < out.size()) {
    out[i++] = normal_pair(index / 2)[1];
    ++index;
  }
  for (; i + 1 < out.size(); i += 2, index += 2) {
    const auto pair = normal_pair(index / 2);
    out[i] = pair[0];
    out[i + 1] = pair[1];
  }
  if (i < out.size()) out[i] = normal_pair(index / 2)[0];
}

double CounterStream::next_uniform() noexcept {
  return static_cast<double>(next_word() >> 11) * kTwoPow53Inv;
}

std::uint64_t CounterStream::next_below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection of the biased low region.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const uint128 product = static_cast<uint128>(next_word()) * bound;
    if (static_cast<std::uint64_t>(product) >= threshold) {
      return static_cast<std::uint64_t>(product >> 64);
    }
  }
}

}  // namespace mcp::rng
