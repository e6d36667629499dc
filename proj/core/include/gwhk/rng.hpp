#pragma once

// Counter-based random numbers. Every draw in the library is a pure function
// of (key, counter), so results never depend on thread scheduling.

#include <array>
#include <cstdint>

namespace gwhk {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// 64-bit mixing used to derive child vertex addresses from parent addresses.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Address of the `index`-th child of the vertex at `parent`.
constexpr std::uint64_t child_address(std::uint64_t parent, std::uint64_t index) {
  return mix64(parent ^ mix64(index + 0x632BE59BD9B4E019ull));
}

inline constexpr std::uint64_t kRootAddress = 0x5851F42D4C957F2Dull;

/// Sequential stream over one Philox key/counter prefix. The stream owns
/// counter word 3 as its block index; words 0..2 identify the stream.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint32_t w0, std::uint32_t w1, std::uint32_t w2)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        prefix_{w0, w1, w2} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint32_t below(std::uint32_t bound) {
    std::uint64_t m = std::uint64_t{next_u32()} * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
      while (low < threshold) {
        m = std::uint64_t{next_u32()} * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

 private:
  void refill() {
    buffer_ = Philox4x32::apply({prefix_[0], prefix_[1], prefix_[2], block_++}, key_);
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::array<std::uint32_t, 3> prefix_;
  std::uint32_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int pos_ = 4;
};

/// One uniform in [0, 1) keyed by (seed, a, b, address): a single Philox block,
/// no state. Used for per-vertex offspring draws.
inline double keyed_uniform(std::uint64_t seed, std::uint32_t a, std::uint32_t b, std::uint64_t address) {
  const auto out = Philox4x32::apply(
      {a, b, static_cast<std::uint32_t>(address), static_cast<std::uint32_t>(address >> 32)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t bits = (std::uint64_t{out[0]} << 32) | out[1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace gwhk
