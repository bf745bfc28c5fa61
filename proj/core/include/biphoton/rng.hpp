#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al., SC'11).
//
// A generator is fully determined by (seed, stream): the seed is the key and
// the stream id occupies the upper half of the 128-bit counter. Measurement
// point i under master seed s uses stream i, so any point can be regenerated
// in isolation and results do not depend on the order workers run in.

#include <array>
#include <cstdint>
#include <limits>

namespace biphoton {

class PhiloxStream {
 public:
  using result_type = std::uint32_t;

  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (lane_ == 4) {
      block_ = generate(block_index_++);
      lane_ = 0;
    }
    return block_[lane_++];
  }

  /// Raw 4x32 output for one counter value.
  std::array<std::uint32_t, 4> generate(std::uint64_t block) const {
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block),
                                        static_cast<std::uint32_t>(block >> 32),
                                        static_cast<std::uint32_t>(stream_),
                                        static_cast<std::uint32_t>(stream_ >> 32)};
    auto key = key_;
    for (int round = 0; round < 10; ++round) {
      ctr = single_round(ctr, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> single_round(const std::array<std::uint32_t, 4>& c,
                                                   const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int lane_ = 4;
};

}  // namespace biphoton
