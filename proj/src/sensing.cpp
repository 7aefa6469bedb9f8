#include "mcp/sensing.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"

namespace mcp {

namespace {

constexpr char kMagic[8] = {'M', 'C', 'P', 'E', 'N', 'S', '0', '1'};
constexpr std::uint64_t kMatrixStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw IoError(path, "truncated ensemble file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SensingEnsemble::SensingEnsemble(std::size_t d, std::size_t n, std::uint64_t seed,
                                 std::vector<double> entries)
    : d_(d), n_(n), seed_(seed), entries_(std::move(entries)) {}

SensingEnsemble SensingEnsemble::draw(std::size_t d, std::size_t n, std::uint64_t seed,
                                      std::size_t max_entries) {
  if (d < 1 || n < 1) throw DomainError("ensemble needs d >= 1 and n >= 1");
  if (n > max_entries / d) {
    throw SizeOverflow("ensemble of " + std::to_string(d) + " x " + std::to_string(n) +
                       " exceeds the entry cap");
  }
  std::vector<double> entries(d * n);
  rng::CounterStream(seed, kMatrixStream).fill_normal(entries);
  return SensingEnsemble(d, n, seed, std::move(entries));
}

SensingEnsemble SensingEnsemble::from_entries(std::size_t d, std::size_t n,
                                              std::vector<double> entries, std::uint64_t seed) {
  if (d < 1 || n < 1) throw DomainError("ensemble needs d >= 1 and n >= 1");
  if (entries.size() != d * n) throw DimensionMismatch("entry count does not equal d * n");
  return SensingEnsemble(d, n, seed, std::move(entries));
}

std::vector<double> measure(const SensingEnsemble& a, std::span<const double> x) {
  if (x.size() != a.cols()) {
    throw DimensionMismatch("signal length " + std::to_string(x.size()) + " != n = " +
                            std::to_string(a.cols()));
  }
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

std::vector<double> noise_vector(std::size_t d, double sigma, std::uint64_t noise_seed) {
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  std::vector<double> w(d);
  rng::CounterStream(noise_seed, kNoiseStream).fill_normal(w);
  for (auto& v : w) v *= sigma;
  return w;
}

MeasurementRecord measure_noisy(const SensingEnsemble& a, std::span<const double> x, double sigma,
                                std::uint64_t noise_seed) {
  if (!(sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  MeasurementRecord rec{measure(a, x), sigma, noise_seed};
  if (sigma > 0.0) {
    const auto w = noise_vector(a.rows(), sigma, noise_seed);
    for (std::size_t i = 0; i < w.size(); ++i) rec.y[i] += w[i];
  }
  return rec;
}

double sigma_max(const SensingEnsemble& a, double rel_tol, int max_iter) {
  const std::size_t d = a.rows();
  const std::size_t n = a.cols();
  const bool use_rows = d <= n;  // Gram of size min(d, n)
  const std::size_t k = use_rows ? d : n;
  std::vector<double> gram(k * k, 0.0);
  if (use_rows) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) gram[i * k + j] = gram[j * k + i] = dot(a.row(i), a.row(j));
    }
  } else {
    for (std::size_t r = 0; r < d; ++r) {
      const auto row = a.row(r);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) gram[i * k + j] += row[i] * row[j];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) gram[i * k + j] = gram[j * k + i];
    }
  }

  // Fixed pseudo-random start; an all-ones start is orthogonal to the top
  // eigenvector of some structured test matrices.
  std::vector<double> v(k);
  rng::CounterStream(0x5eed5eedull, 7).fill_normal(v);
  std::vector<double> gv(k);
  auto normalize = [](std::vector<double>& x) {
    const double norm = std::sqrt(dot(x, x));
    for (auto& e : x) e /= norm;
  };
  normalize(v);
  double previous = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (std::size_t i = 0; i < k; ++i) {
      gv[i] = dot(std::span<const double>(gram).subspan(i * k, k), v);
    }
    const double rayleigh = dot(v, gv);
    if (rayleigh == 0.0) return 0.0;
    if (iter > 0 && std::abs(rayleigh - previous) <= rel_tol * std::abs(rayleigh)) {
      return std::sqrt(rayleigh);
    }
    previous = rayleigh;
    v.swap(gv);
    normalize(v);
  }
  throw NonConvergence("power iteration did not reach the tolerance in " +
                       std::to_string(max_iter) + " iterations");
}

void write_ensemble(const std::string& path, const SensingEnsemble& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out.write(kMagic, sizeof kMagic);
  put_u64(out, a.rows());
  put_u64(out, a.cols());
  put_u64(out, a.seed());
  for (double v : a.entries()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError(path, "write failed");
}

SensingEnsemble read_ensemble(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
    throw IoError(path, "not an ensemble file (bad magic)");
  }
  const std::uint64_t d = get_u64(in, path);
  const std::uint64_t n = get_u64(in, path);
  const std::uint64_t seed = get_u64(in, path);
  if (d == 0 || n == 0 || n > SensingEnsemble::kDefaultMaxEntries / d) {
    throw IoError(path, "implausible ensemble dimensions");
  }
  std::vector<double> entries(d * n);
  for (auto& v : entries) v = std::bit_cast<double>(get_u64(in, path));
  return SensingEnsemble::from_entries(d, n, std::move(entries), seed);
}

}  // namespace mcp
