#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"
#include "mcp/sensing.hpp"

namespace {

using mcp::SensingEnsemble;

TEST(Ensemble, EntriesFollowCounterStream) {
  const auto a = SensingEnsemble::draw(3, 5, 1234);
  const mcp::rng::CounterStream s(1234, 0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(a(i, j), s.normal_at(i * 5 + j));
  }
  EXPECT_EQ(a, SensingEnsemble::draw(3, 5, 1234));
  EXPECT_NE(a, SensingEnsemble::draw(3, 5, 1235));
}

TEST(Ensemble, RowsNestAcrossD) {
  const auto small = SensingEnsemble::draw(4, 6, 9);
  const auto big = SensingEnsemble::draw(10, 6, 9);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(small(i, j), big(i, j));
  }
}

TEST(Ensemble, SizeGuards) {
  EXPECT_THROW(SensingEnsemble::draw(0, 3, 1), mcp::DomainError);
  EXPECT_THROW(SensingEnsemble::draw(3, 0, 1), mcp::DomainError);
  EXPECT_THROW(SensingEnsemble::draw(1000, 1000, 1, 999'999), mcp::SizeOverflow);
  EXPECT_THROW(SensingEnsemble::from_entries(2, 2, {1, 2, 3}), mcp::DimensionMismatch);
}

TEST(Ensemble, SingleEntryMeanOverSeeds) {
  double sum = 0.0;
  for (std::uint64_t s = 0; s < 100000; ++s) sum += SensingEnsemble::draw(1, 1, s)(0, 0);
  EXPECT_NEAR(sum / 1e5, 0.0, 0.02);
}

TEST(Ensemble, EntryVariance) {
  const auto a = SensingEnsemble::draw(1000, 1000, 77);
  double sum = 0.0, sum2 = 0.0;
  for (double v : a.entries()) {
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / 1e6;
  EXPECT_NEAR(sum2 / 1e6 - mean * mean, 1.0, 0.01);
}

TEST(Measure, Examples) {
  const auto a = SensingEnsemble::draw(4, 3, 5);
  EXPECT_EQ(mcp::measure(a, std::vector<double>(3, 0.0)), std::vector<double>(4, 0.0));
  const auto row = SensingEnsemble::from_entries(1, 2, {1.5, -0.25});
  EXPECT_EQ(mcp::measure(row, std::vector<double>{1, 1}), std::vector<double>{1.25});
  EXPECT_THROW(mcp::measure(a, std::vector<double>(2, 0.0)), mcp::DimensionMismatch);
}

TEST(Measure, MatchesNaiveProductAndIsLinear) {
  const auto a = SensingEnsemble::draw(17, 23, 31);
  const mcp::rng::CounterStream s(8);
  std::vector<double> x(23), z(23), combo(23);
  for (std::size_t j = 0; j < 23; ++j) {
    x[j] = s.uniform_at(j);
    z[j] = s.uniform_at(100 + j);
    combo[j] = 2.5 * x[j] - 0.75 * z[j];
  }
  const auto ax = mcp::measure(a, x);
  const auto az = mcp::measure(a, z);
  const auto ac = mcp::measure(a, combo);
  for (std::size_t i = 0; i < 17; ++i) {
    long double naive = 0.0L;
    for (std::size_t j = 0; j < 23; ++j) naive += static_cast<long double>(a(i, j)) * x[j];
    EXPECT_NEAR(ax[i], static_cast<double>(naive), 1e-12 * std::max(1.0, std::abs(ax[i])));
    EXPECT_NEAR(ac[i], 2.5 * ax[i] - 0.75 * az[i], 1e-10 * std::max(1.0, std::abs(ac[i])));
  }
}

TEST(MeasureNoisy, ZeroSigmaIsExact) {
  const auto a = SensingEnsemble::draw(6, 4, 2);
  const std::vector<double> x{0.25, 0.5, 0.0, 0.75};
  const auto rec = mcp::measure_noisy(a, x, 0.0, 99);
  EXPECT_EQ(rec.y, mcp::measure(a, x));
  EXPECT_EQ(rec, mcp::measure_noisy(a, x, 0.0, 99));
  EXPECT_THROW(mcp::measure_noisy(a, x, -1.0, 99), mcp::DomainError);
}

TEST(MeasureNoisy, NoiseFollowsStreamOne) {
  const auto g = mcp::noise_vector(5, 2.0, 44);
  const mcp::rng::CounterStream s(44, 1);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(g[i], 2.0 * s.normal_at(i));
}

TEST(MeasureNoisy, NoiseEnergyMatchesSigma) {
  const auto a = SensingEnsemble::draw(50, 3, 1);
  const std::vector<double> x(3, 0.0);
  double total = 0.0;
  for (std::uint64_t s = 0; s < 2000; ++s) {
    const auto rec = mcp::measure_noisy(a, x, 1.0, s);
    for (double v : rec.y) total += v * v;
  }
  // Mean of chi^2_{100000}/100000: sd = sqrt(2/100000) ~ 0.0045.
  EXPECT_NEAR(total / (2000.0 * 50.0), 1.0, 5 * 0.0045);
}

TEST(MeasureNoisy, NoiseUncorrelatedWithMatrixRow) {
  const int trials = 10000;
  std::vector<double> w(trials), a0(trials);
  for (int k = 0; k < trials; ++k) {
    const auto seed = mcp::rng::derive_seed(5, k, mcp::rng::Purpose::kMatrix);
    const auto nseed = mcp::rng::derive_seed(5, k, mcp::rng::Purpose::kNoise);
    a0[k] = SensingEnsemble::draw(1, 1, seed)(0, 0);
    w[k] = mcp::noise_vector(1, 1.0, nseed)[0];
  }
  double sw = 0, sa = 0, swa = 0, sww = 0, saa = 0;
  for (int k = 0; k < trials; ++k) {
    sw += w[k];
    sa += a0[k];
  }
  sw /= trials;
  sa /= trials;
  for (int k = 0; k < trials; ++k) {
    swa += (w[k] - sw) * (a0[k] - sa);
    sww += (w[k] - sw) * (w[k] - sw);
    saa += (a0[k] - sa) * (a0[k] - sa);
  }
  EXPECT_LT(std::abs(swa / std::sqrt(sww * saa)), 5.0 / std::sqrt(trials));
}

TEST(SigmaMax, SmallExamples) {
  EXPECT_NEAR(mcp::sigma_max(SensingEnsemble::from_entries(1, 1, {3.0})), 3.0, 1e-12);
  EXPECT_NEAR(mcp::sigma_max(SensingEnsemble::from_entries(2, 2, {2.0, 0.0, 0.0, 1.0})), 2.0,
              1e-9);
  EXPECT_NEAR(mcp::sigma_max(SensingEnsemble::from_entries(2, 3, {0, 0, 0, 0, 0, 0})), 0.0, 1e-12);
}

TEST(SigmaMax, MatchesDenseSvd) {
  for (auto [d, n, seed] : {std::tuple{50, 200, 1}, std::tuple{200, 50, 2}, std::tuple{30, 30, 3}}) {
    const auto a = SensingEnsemble::draw(d, n, seed);
    Eigen::MatrixXd m(d, n);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = a(i, j);
    }
    const double oracle = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
    EXPECT_NEAR(mcp::sigma_max(a), oracle, 1e-8 * oracle) << d << "x" << n;
  }
}

TEST(SigmaMax, ReportsNonConvergence) {
  // Gap 0.9 leaves the Rayleigh quotient moving after three steps.
  const auto a = SensingEnsemble::from_entries(2, 2, {1.0, 0.0, 0.0, 0.9});
  EXPECT_THROW(mcp::sigma_max(a, 1e-15, 3), mcp::NonConvergence);
}

TEST(EnsembleFile, RoundTripAndLayout) {
  const auto a = SensingEnsemble::draw(3, 4, 0xfeedull);
  const auto path = (std::filesystem::temp_directory_path() / "mcp_ensemble_test.bin").string();
  mcp::write_ensemble(path, a);
  EXPECT_EQ(mcp::read_ensemble(path), a);
  std::ifstream in(path, std::ios::binary);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(raw.size(), 32u + 12u * 8u);
  EXPECT_EQ(std::string(raw.data(), 8), "MCPENS01");
  EXPECT_EQ(static_cast<unsigned char>(raw[8]), 3);
  EXPECT_EQ(static_cast<unsigned char>(raw[16]), 4);
  EXPECT_EQ(static_cast<unsigned char>(raw[24]), 0xed);
  EXPECT_EQ(static_cast<unsigned char>(raw[25]), 0xfe);
  std::filesystem::remove(path);
  EXPECT_THROW(mcp::read_ensemble(path), mcp::IoError);
}

}  // namespace
