#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "mcp/complexity.hpp"
#include "mcp/rng.hpp"

namespace {

using mcp::Estimator;
using mcp::QuantizedSignal;
using mcp::Resolution;

// Independent LZ78 parse over strings: each new phrase is the longest seen
// phrase plus one bit; a final partial phrase is charged like a new one.
std::uint64_t lz78_oracle(const std::string& s) {
  std::map<std::string, int> dict{{"", 0}};
  std::uint64_t bits = 0;
  std::uint64_t phrases = 0;
  std::string cur;
  auto charge = [&] {
    ++phrases;
    bits += static_cast<std::uint64_t>(std::ceil(std::log2(static_cast<double>(phrases + 1)))) + 1;
  };
  for (char c : s) {
    cur.push_back(c);
    if (!dict.contains(cur)) {
      dict.emplace(cur, static_cast<int>(dict.size()));
      charge();
      cur.clear();
    }
  }
  if (!cur.empty()) charge();
  return bits;
}

std::string as_string(const mcp::Bits& b) {
  std::string s;
  for (auto v : b) s.push_back(v ? '1' : '0');
  return s;
}

QuantizedSignal uniform_signal(std::size_t n, int m, std::uint64_t seed) {
  const mcp::rng::CounterStream s(seed);
  std::vector<std::uint64_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = s.word_at(i) >> (64 - m);
  return QuantizedSignal::from_codes(codes, Resolution(m));
}

QuantizedSignal zeros(std::size_t n, int m) {
  return QuantizedSignal(std::vector<double>(n, 0.0), Resolution(m));
}

TEST(RawLength, Examples) {
  EXPECT_EQ(mcp::raw_length(zeros(4, 2)).bits, 16u);
  EXPECT_EQ(mcp::raw_length(zeros(1, 1)).bits, 9u);
  EXPECT_EQ(mcp::raw_length(zeros(1, 1)).estimator, Estimator::kRaw);
}

TEST(SparseLength, Examples) {
  EXPECT_EQ(mcp::sparse_length(zeros(16, 4)).bits, 13u);
  std::vector<double> one(16, 0.0);
  one[5] = 0.25;
  EXPECT_EQ(mcp::sparse_length(QuantizedSignal(one, Resolution(4))).bits, 21u);
}

TEST(Lz78, SinglePhrase) {
  const QuantizedSignal half({0.5}, Resolution(1));
  EXPECT_EQ(mcp::lz78_length(half).bits, 10u);
  EXPECT_EQ(mcp::lz78_phrase_count(mcp::signal_bits(half)), 1u);
}

TEST(Lz78, EmptyInput) {
  const std::vector<std::uint8_t> none;
  EXPECT_EQ(mcp::lz78_code_bits(none), 0u);
  EXPECT_EQ(mcp::lz78_phrase_count(none), 0u);
}

TEST(Lz78, MatchesOracleOnRandomAndStructuredInputs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sig = uniform_signal(37 + seed, 1 + static_cast<int>(seed % 8), seed);
    const auto bits = mcp::signal_bits(sig);
    EXPECT_EQ(mcp::lz78_code_bits(bits), lz78_oracle(as_string(bits)));
  }
  for (std::size_t len : {1u, 2u, 3u, 10u, 512u, 1000u}) {
    const std::vector<std::uint8_t> z(len, 0);
    EXPECT_EQ(mcp::lz78_code_bits(z), lz78_oracle(std::string(len, '0')));
  }
}

TEST(Lz78, AllZeroSignal) {
  // 512 zero bits parse into phrases of length 1, 2, ..., 31 plus a
  // partial phrase of 16 bits: 32 phrases.
  const auto sig = zeros(64, 8);
  EXPECT_EQ(mcp::lz78_phrase_count(mcp::signal_bits(sig)), 32u);
  const auto expected = 8 + lz78_oracle(std::string(512, '0'));
  EXPECT_EQ(mcp::lz78_length(sig).bits, expected);
  // Far below the verbatim length, though above 0.15 n m at this size.
  EXPECT_LT(static_cast<double>(expected) / 512.0, 0.4);
}

TEST(Lz78, RepetitionIsCheaperThanTwice) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sig = uniform_signal(128, 4, seed + 100);
    auto bits = mcp::signal_bits(sig);
    const auto single = mcp::lz78_code_bits(bits);
    const auto copy = bits;
    bits.insert(bits.end(), copy.begin(), copy.end());
    EXPECT_LT(mcp::lz78_code_bits(bits), 2 * single);
  }
}

TEST(BestEstimate, ZeroSignalPrefersSparse) {
  const auto e = mcp::best_estimate(zeros(16, 4));
  EXPECT_EQ(e.estimator, Estimator::kSparse);
  EXPECT_EQ(e.bits, 13u);
}

TEST(BestEstimate, NeverExceedsRaw) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto sig = uniform_signal(1 + seed * 7, 1 + static_cast<int>(seed % 10), seed);
    const auto best = mcp::best_estimate(sig);
    EXPECT_LE(best.bits, mcp::raw_length(sig).bits);
    EXPECT_GE(best.bits, 1u);
  }
}

TEST(BestEstimate, UniformSignalNearFullLength) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sig = uniform_signal(4096, 8, seed);
    const double ratio = static_cast<double>(mcp::best_estimate(sig).bits) / (4096.0 * 8.0);
    EXPECT_GT(ratio, 0.85);
    EXPECT_LE(ratio, 1.0 + 8.0 / (4096.0 * 8.0));
  }
}

}  // namespace
