#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace holab {

// Philox4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3").  Counter-based means the k-th draw of any
// stream is a pure function of (seed, stream, k), so independent substreams
// can be split off without sharing state.  That property is what makes the
// chunked parallel reductions reproducible for every worker count.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  // Derive an independent generator; child(k) of a given state is stable.
  Philox split(std::uint64_t substream) const {
    Philox child = *this;
    child.ctr_[2] ^= static_cast<std::uint32_t>(substream);
    child.ctr_[3] ^= static_cast<std::uint32_t>(substream >> 32);
    child.ctr_[0] = 0;
    child.ctr_[1] = 0;
    child.buf_pos_ = 4;
    return child;
  }

  std::uint32_t next_u32() {
    if (buf_pos_ >= 4) {
      buf_ = round10(ctr_, key_);
      advance();
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform in [0,1) with the full 53-bit mantissa.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; one value per call, no caching, so the
  // draw count stays a pure function of the call count.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    while (u1 == 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  using Ctr = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Ctr round10(Ctr ctr, Key key) {
    for (int i = 0; i < 10; ++i) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

  void advance() {
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  Key key_;
  Ctr ctr_;
  Ctr buf_{};
  int buf_pos_ = 4;
};

}  // namespace holab
