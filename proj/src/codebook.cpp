#include "mcp/codebook.hpp"

#include <array>
#include <bit>
#include <string>

#include "mcp/errors.hpp"
#include "mcp/rng.hpp"

namespace mcp {

namespace {

constexpr std::array<std::string_view, 4> kGeneratorNames = {
    "CONSTANT", "K_SPARSE", "PIECEWISE_CONSTANT", "PRNG_EXPANSION"};

class BitReader {
 public:
  explicit BitReader(const Bits& bits) : bits_(bits) {}

  std::uint64_t read(int width, const std::string& field) {
    if (pos_ + static_cast<std::size_t>(width) > bits_.size()) {
      throw MalformedPayload(field, "payload ends before the field");
    }
    std::uint64_t value = 0;
    for (int i = 0; i < width; ++i) value = (value << 1) | bits_[pos_++];
    return value;
  }

 private:
  const Bits& bits_;
  std::size_t pos_ = 0;
};

void append_bits(Bits& out, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

std::string indexed(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

// Reads `count` strictly increasing indices in [lo, n) under `name`.
std::vector<std::size_t> read_increasing(BitReader& in, std::size_t count, int width,
                                         std::size_t lo, std::size_t n, const char* name) {
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = static_cast<std::size_t>(in.read(width, indexed(name, i)));
    if (out[i] < lo || out[i] >= n) throw MalformedPayload(indexed(name, i), "out of range");
    if (i > 0 && out[i] <= out[i - 1]) {
      throw MalformedPayload(indexed(name, i), "not strictly increasing");
    }
  }
  return out;
}

void require_length(const ProgramEntry& e, std::size_t expected) {
  if (e.payload.size() != expected) {
    throw MalformedPayload("length", "payload has " + std::to_string(e.payload.size()) +
                                         " bits, layout needs " + std::to_string(expected));
  }
}

std::size_t count_layout_bits(Generator g, std::size_t count, std::size_t n, Resolution m) {
  const auto ib = static_cast<std::size_t>(index_bits(n));
  const auto mb = static_cast<std::size_t>(m.bits());
  if (g == Generator::kSparse) return kCountFieldBits + count * (ib + mb);
  return kCountFieldBits + count * ib + (count + 1) * mb;
}

// Lexicographic successor of strictly increasing indices bounded by hi.
bool next_combination(std::vector<std::size_t>& idx, std::size_t hi) {
  const std::size_t k = idx.size();
  for (std::size_t j = k; j-- > 0;) {
    const std::size_t limit = hi - (k - 1 - j);
    if (idx[j] < limit) {
      ++idx[j];
      for (std::size_t t = j + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
      return true;
    }
  }
  return false;
}

bool next_levels(std::vector<std::uint64_t>& levels, std::uint64_t base) {
  for (std::size_t j = levels.size(); j-- > 0;) {
    if (++levels[j] < base) return true;
    levels[j] = 0;
  }
  return false;
}

}  // namespace

std::string_view generator_name(Generator g) noexcept {
  return kGeneratorNames[static_cast<std::size_t>(g)];
}

Generator parse_generator(std::string_view name) {
  for (std::size_t i = 0; i < kGeneratorNames.size(); ++i) {
    if (kGeneratorNames[i] == name) return static_cast<Generator>(i);
  }
  throw DomainError("unknown generator '" + std::string(name) + "'");
}

int index_bits(std::size_t n) noexcept {
  return n <= 1 ? 0 : static_cast<int>(std::bit_width(n - 1));
}

int description_length(const ProgramEntry& entry) noexcept {
  return kHeaderBits + static_cast<int>(entry.payload.size());
}

QuantizedSignal decode(const ProgramEntry& e) {
  if (e.n == 0) throw MalformedPayload("n", "signal length must be positive");
  const int mb = e.m.bits();
  const int ib = index_bits(e.n);
  BitReader in(e.payload);
  std::vector<std::uint64_t> codes(e.n, 0);

  switch (e.generator) {
    case Generator::kConstant: {
      require_length(e, static_cast<std::size_t>(mb));
      std::fill(codes.begin(), codes.end(), in.read(mb, "level"));
      break;
    }
    case Generator::kSparse: {
      const auto k = static_cast<std::size_t>(in.read(kCountFieldBits, "k"));
      require_length(e, count_layout_bits(e.generator, k, e.n, e.m));
      const auto positions = read_increasing(in, k, ib, 0, e.n, "position");
      for (std::size_t i = 0; i < k; ++i) codes[positions[i]] = in.read(mb, indexed("value", i));
      break;
    }
    case Generator::kPiecewiseConstant: {
      const auto b = static_cast<std::size_t>(in.read(kCountFieldBits, "b"));
      require_length(e, count_layout_bits(e.generator, b, e.n, e.m));
      const auto breaks = read_increasing(in, b, ib, 1, e.n, "breakpoint");
      std::size_t start = 0;
      for (std::size_t j = 0; j <= b; ++j) {
        const std::uint64_t level = in.read(mb, indexed("level", j));
        const std::size_t stop = j < b ? breaks[j] : e.n;
        std::fill(codes.begin() + static_cast<std::ptrdiff_t>(start),
                  codes.begin() + static_cast<std::ptrdiff_t>(stop), level);
        start = stop;
      }
      break;
    }
    case Generator::kPrngExpansion: {
      const std::size_t s = e.payload.size();
      if (s < 1 || s > static_cast<std::size_t>(kMaxSeedBits)) {
        throw MalformedPayload("seed", "seed width must be in [1, 64]");
      }
      const std::uint64_t seed = in.read(static_cast<int>(s), "seed");
      codes = expand_prng(seed, static_cast<int>(s), e.n, e.m);
      break;
    }
    default:
      throw MalformedPayload("generator", "unknown generator tag");
  }
  return QuantizedSignal::from_codes(codes, e.m);
}

std::string entry_id(const ProgramEntry& entry) {
  std::string id(generator_name(entry.generator));
  id.push_back(':');
  for (auto b : entry.payload) id.push_back(b ? '1' : '0');
  return id;
}

ProgramEntry parse_entry_id(std::string_view id, std::size_t n, Resolution m) {
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) throw DomainError("entry id lacks ':'");
  ProgramEntry e{parse_generator(id.substr(0, colon)), {}, n, m};
  for (char c : id.substr(colon + 1)) {
    if (c != '0' && c != '1') throw DomainError("entry id payload must be binary");
    e.payload.push_back(static_cast<std::uint8_t>(c == '1'));
  }
  return e;
}

bool canonical_less(const ProgramEntry& a, const ProgramEntry& b) noexcept {
  if (a.payload.size() != b.payload.size()) return a.payload.size() < b.payload.size();
  if (a.generator != b.generator) return a.generator < b.generator;
  return a.payload < b.payload;  // equal widths: lexicographic == integer order
}

ProgramEntry make_constant(std::size_t n, Resolution m, std::uint64_t level) {
  ProgramEntry e{Generator::kConstant, {}, n, m};
  append_bits(e.payload, level, m.bits());
  return e;
}

ProgramEntry make_sparse(std::size_t n, Resolution m, const std::vector<std::size_t>& positions,
                         const std::vector<std::uint64_t>& values) {
  if (positions.size() != values.size() || positions.size() > kMaxCount) {
    throw DomainError("sparse entry needs matching positions/values, k <= 3");
  }
  ProgramEntry e{Generator::kSparse, {}, n, m};
  append_bits(e.payload, positions.size(), kCountFieldBits);
  for (auto p : positions) append_bits(e.payload, p, index_bits(n));
  for (auto v : values) append_bits(e.payload, v, m.bits());
  return e;
}

ProgramEntry make_piecewise(std::size_t n, Resolution m, const std::vector<std::size_t>& breakpoints,
                            const std::vector<std::uint64_t>& levels) {
  if (levels.size() != breakpoints.size() + 1 || breakpoints.size() > kMaxCount) {
    throw DomainError("piecewise entry needs b <= 3 breakpoints and b + 1 levels");
  }
  ProgramEntry e{Generator::kPiecewiseConstant, {}, n, m};
  append_bits(e.payload, breakpoints.size(), kCountFieldBits);
  for (auto p : breakpoints) append_bits(e.payload, p, index_bits(n));
  for (auto v : levels) append_bits(e.payload, v, m.bits());
  return e;
}

ProgramEntry make_prng(std::size_t n, Resolution m, std::uint64_t seed, int seed_bits) {
  if (seed_bits < 1 || seed_bits > kMaxSeedBits) throw DomainError("seed width must be in [1, 64]");
  ProgramEntry e{Generator::kPrngExpansion, {}, n, m};
  append_bits(e.payload, seed, seed_bits);
  return e;
}

std::vector<std::uint64_t> expand_prng(std::uint64_t seed, int seed_bits, std::size_t n,
                                       Resolution m) {
  std::uint64_t state = rng::splitmix64(rng::splitmix64(static_cast<std::uint64_t>(seed_bits)) ^ seed);
  if (state == 0) state = 0x9E3779B97F4A7C15ull;
  std::uint64_t word = 0;
  int available = 0;
  auto next_bit = [&]() -> std::uint64_t {
    if (available == 0) {
      state ^= state << 13;
      state ^= state >> 7;
      state ^= state << 17;
      word = state * 0x2545F4914F6CDD1Dull;
      available = 64;
    }
    --available;
    return (word >> available) & 1u;
  };
  std::vector<std::uint64_t> codes(n);
  for (auto& c : codes) {
    std::uint64_t v = 0;
    for (int i = 0; i < m.bits(); ++i) v = (v << 1) | next_bit();
    c = v;
  }
  return codes;
}

ComplexityBudget::ComplexityBudget(int max_bits, int cap) : max_bits_(max_bits), cap_(cap) {
  if (max_bits < 1) throw DomainError("complexity budget must be >= 1 bit");
  if (max_bits > cap) {
    throw BudgetTooLarge("budget of " + std::to_string(max_bits) + " bits exceeds the cap of " +
                         std::to_string(cap));
  }
}

void CodebookSpec::validate() const {
  if (n < 1) throw DomainError("codebook n must be >= 1");
  if (families.empty()) throw DomainError("codebook needs at least one generator family");
  if (max_sparsity < 0 || max_sparsity > kMaxCount) throw DomainError("max_sparsity must be in [0, 3]");
  if (max_breakpoints < 0 || max_breakpoints > kMaxCount) {
    throw DomainError("max_breakpoints must be in [0, 3]");
  }
  if (max_seed_bits < 1 || max_seed_bits > kMaxSeedBits) {
    throw DomainError("max_seed_bits must be in [1, 64]");
  }
}

namespace detail {

PayloadEnumerator::PayloadEnumerator(const CodebookSpec& spec, Generator g, int payload_bits)
    : spec_(&spec), generator_(g), payload_bits_(payload_bits) {
  const auto want = static_cast<std::size_t>(payload_bits);
  switch (g) {
    case Generator::kConstant:
      if (payload_bits == spec.m.bits()) {
        count_ = 0;
        levels_.assign(1, 0);
      }
      break;
    case Generator::kSparse:
      for (int k = 0; k <= spec.max_sparsity; ++k) {
        if (count_layout_bits(g, static_cast<std::size_t>(k), spec.n, spec.m) == want &&
            static_cast<std::size_t>(k) <= spec.n) {
          count_ = k;
          indices_.resize(static_cast<std::size_t>(k));
          for (std::size_t i = 0; i < indices_.size(); ++i) indices_[i] = i;
          levels_.assign(static_cast<std::size_t>(k), 0);
        }
      }
      break;
    case Generator::kPiecewiseConstant:
      for (int b = 0; b <= spec.max_breakpoints; ++b) {
        if (count_layout_bits(g, static_cast<std::size_t>(b), spec.n, spec.m) == want &&
            static_cast<std::size_t>(b) + 1 <= spec.n) {
          count_ = b;
          indices_.resize(static_cast<std::size_t>(b));
          for (std::size_t i = 0; i < indices_.size(); ++i) indices_[i] = i + 1;
          levels_.assign(static_cast<std::size_t>(b) + 1, 0);
        }
      }
      break;
    case Generator::kPrngExpansion:
      if (payload_bits >= 1 && payload_bits <= spec.max_seed_bits) count_ = 0;
      break;
  }
  done_ = count_ < 0;
}

bool PayloadEnumerator::advance() {
  switch (generator_) {
    case Generator::kConstant:
      return next_levels(levels_, spec_->m.levels());
    case Generator::kSparse:
      if (next_levels(levels_, spec_->m.levels())) return true;
      return next_combination(indices_, spec_->n - 1);
    case Generator::kPiecewiseConstant:
      if (next_levels(levels_, spec_->m.levels())) return true;
      return next_combination(indices_, spec_->n - 1);
    case Generator::kPrngExpansion:
      if (payload_bits_ < 64 && seed_ + 1 >= (std::uint64_t{1} << payload_bits_)) return false;
      if (payload_bits_ == 64 && seed_ == ~std::uint64_t{0}) return false;
      ++seed_;
      return true;
  }
  return false;
}

bool PayloadEnumerator::next(Bits& payload) {
  if (done_) return false;
  if (started_ && !advance()) {
    done_ = true;
    return false;
  }
  started_ = true;
  payload.clear();
  const int ib = index_bits(spec_->n);
  switch (generator_) {
    case Generator::kConstant:
      append_bits(payload, levels_[0], spec_->m.bits());
      break;
    case Generator::kSparse:
    case Generator::kPiecewiseConstant:
      append_bits(payload, static_cast<std::uint64_t>(count_), kCountFieldBits);
      for (auto i : indices_) append_bits(payload, i, ib);
      for (auto v : levels_) append_bits(payload, v, spec_->m.bits());
      break;
    case Generator::kPrngExpansion:
      append_bits(payload, seed_, payload_bits_);
      break;
  }
  return true;
}

}  // namespace detail

std::vector<ProgramEntry> enumerate(const CodebookSpec& spec, ComplexityBudget budget) {
  std::vector<ProgramEntry> out;
  for_each_entry(spec, budget, [&](const ProgramEntry& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

std::size_t count_entries(const CodebookSpec& spec, ComplexityBudget budget) {
  std::size_t count = 0;
  for_each_entry(spec, budget, [&](const ProgramEntry&) {
    ++count;
    return true;
  });
  return count;
}

ProgramEntry sample_entry(const CodebookSpec& spec, ComplexityBudget budget, std::uint64_t seed) {
  const std::size_t total = count_entries(spec, budget);
  if (total == 0) throw EmptyCodebook("no codebook entry fits the budget");
  rng::CounterStream stream(seed);
  std::size_t target = stream.next_below(total);
  ProgramEntry chosen{Generator::kConstant, {}, spec.n, spec.m};
  for_each_entry(spec, budget, [&](const ProgramEntry& e) {
    if (target-- == 0) {
      chosen = e;
      return false;
    }
    return true;
  });
  return chosen;
}

}  // namespace mcp
