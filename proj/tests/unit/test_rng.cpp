#include <doctest.h>

#include <array>
#include <cstdint>
#include <vector>

#include <biphoton/detection.hpp>
#include <biphoton/rng.hpp>

using namespace biphoton;

namespace {
using Block = std::array<std::uint32_t, 4>;

// Counter words (lo to hi) and key words map onto (block, stream) and seed.
Block philox(std::uint64_t seed, std::uint64_t stream, std::uint64_t block) {
  return PhiloxStream(seed, stream).generate(block);
}
}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox(0, 0, 0) == Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox(~0ull, ~0ull, ~0ull) == Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox(0x299f31d0a4093822ull, 0x0370734413198a2eull, 0x85a308d3243f6a88ull) ==
        Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("stream output is the concatenation of blocks") {
  PhiloxStream g(42, 7);
  for (std::uint64_t b = 0; b < 3; ++b) {
    const auto expect = philox(42, 7, b);
    for (auto w : expect) CHECK(g() == w);
  }
}

TEST_CASE("same seed and stream reproduce, different streams differ") {
  PhiloxStream a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  std::vector<std::uint32_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
}

TEST_CASE("draws do not depend on the order streams are visited") {
  std::vector<std::uint64_t> forward, backward(16);
  for (std::uint64_t s = 0; s < 16; ++s) forward.push_back(sample_poisson(250.0, 99, s));
  for (std::uint64_t s = 16; s-- > 0;) backward[s] = sample_poisson(250.0, 99, s);
  CHECK(forward == backward);
}
