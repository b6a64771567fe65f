#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace splf {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (counter, key), so any draw can be regenerated from its
// coordinates without replaying a stream.
namespace philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

constexpr Counter round(const Counter& c, const Key& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  return {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
          static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
}

constexpr Counter generate(Counter c, Key k) {
  c = round(c, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kWeyl0;
    k[1] += kWeyl1;
    c = round(c, k);
  }
  return c;
}

}  // namespace philox

/// Logical stream a draw belongs to; keeps noise and initial data disjoint.
enum class Stream : std::uint32_t { noise = 0, initial = 1, auxiliary = 2 };

/// (seed, path, step, stream) key of one vector of normal draws.
struct DrawKey {
  std::uint64_t seed = 0;
  std::uint32_t path = 0;
  std::uint32_t step = 0;
  Stream stream = Stream::noise;
};

/// Fills `out` with independent N(0,1) draws; out[i] depends only on (key, i).
void standard_normals(const DrawKey& key, std::span<double> out);

/// Uniform draw in [0,1) from 64 random bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace splf
