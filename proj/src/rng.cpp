#include "polygaf/rng.hpp"

#include <cmath>
#include <numbers>

namespace polygaf {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void philox_round(std::array<std::uint32_t, 4>& c, std::uint32_t k0, std::uint32_t k1) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    philox_round(counter, key[0], key[1]);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return counter;
}

std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto out = philox4x32(ctr, key);
  const std::uint64_t b0 = out[0] | (static_cast<std::uint64_t>(out[1]) << 32);
  const std::uint64_t b1 = out[2] | (static_cast<std::uint64_t>(out[3]) << 32);
  // 53-bit mantissas; u0 shifted into (0,1] so log(u0) is always finite.
  const double u0 = (static_cast<double>(b0 >> 11) + 1.0) * 0x1.0p-53;
  const double u1 = static_cast<double>(b1 >> 11) * 0x1.0p-53;
  return {u0, u1};
}

Complex standard_complex_gaussian(std::uint64_t seed, std::uint64_t trial, std::uint64_t index) {
  const auto [u0, u1] = uniform_pair(seed, trial, index);
  const double radius = std::sqrt(-std::log(u0));
  return std::polar(radius, 2.0 * std::numbers::pi * u1);
}

}  // namespace polygaf
