#include <cmath>
#include <numeric>

#include "doctest.h"
#include "splf/errors.hpp"
#include "splf/noise.hpp"

using namespace splf;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using philox::Counter;
  using philox::Key;
  CHECK(philox::generate(Counter{0, 0, 0, 0}, Key{0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox::generate(Counter{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, Key{0xffffffff, 0xffffffff}) ==
        Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox::generate(Counter{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, Key{0xa4093822, 0x299f31d0}) ==
        Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  static_assert(philox::generate(Counter{0, 0, 0, 0}, Key{0, 0})[0] == 0x6627e8d5);
}

TEST_CASE("normal draws are keyed, prefix-stable and distinct across streams") {
  const DrawKey key{123456789012345ULL, 7, 11, Stream::noise};
  std::vector<double> a(9), b(4), c(9);
  standard_normals(key, a);
  standard_normals(key, b);
  standard_normals(key, c);
  CHECK(a == c);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(a[i] == b[i]);

  for (auto other : {DrawKey{key.seed, 8, 11, Stream::noise}, DrawKey{key.seed, 7, 12, Stream::noise},
                     DrawKey{key.seed, 7, 11, Stream::initial}, DrawKey{key.seed + 1, 7, 11, Stream::noise},
                     DrawKey{key.seed + (1ULL << 32), 7, 11, Stream::noise}}) {
    std::vector<double> d(9);
    standard_normals(other, d);
    CHECK(d != a);
  }
}

TEST_CASE("normal draws have unit variance") {
  const std::size_t N = 200000;
  std::vector<double> x(N);
  standard_normals(DrawKey{99, 0, 0, Stream::auxiliary}, x);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / N;
  double var = 0.0, m4 = 0.0;
  for (double v : x) {
    var += (v - mean) * (v - mean);
    m4 += std::pow(v - mean, 4);
  }
  var /= N - 1;
  m4 /= N;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(N));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / N));
  CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / N));
}

TEST_CASE("power spectrum eigenvalues and truncated trace") {
  const auto spec = CovarianceSpectrum::power(0.1, 3.0);
  const Basis b(3, 2);
  const auto g = spec.on_basis(b);
  for (std::size_t k = 0; k < b.size(); ++k) {
    CHECK(g[k] == doctest::Approx(0.1 * std::pow(1.0 + kFourPiSq * static_cast<double>(b[k].z.norm_sq()), -3.0)));
  }
  // Independent enumeration of the half-space: each nonzero pair {z,-z}
  // carries 2d - 2 = 2 eigenvalues.
  double trace = 0.0;
  for (int a = -3; a <= 3; ++a) {
    for (int c = -3; c <= 3; ++c) {
      if (a == 0 && c == 0) continue;
      trace += 0.1 * std::pow(1.0 + kFourPiSq * (a * a + c * c), -3.0);  // counts both z and -z
    }
  }
  CHECK(trace_Pn(spec, 3, 2) == doctest::Approx(trace).epsilon(1e-13));
  CHECK(operator_norm(spec, 3, 2) == doctest::Approx(0.1 * std::pow(1.0 + kFourPiSq, -3.0)));
  CHECK(trace_Pn(CovarianceSpectrum::zero(), 3, 2) == 0.0);
}

TEST_CASE("explicit spectra canonicalize negative wave vectors") {
  const auto spec = CovarianceSpectrum::explicit_map({{WaveVector({-1, 0}), 2, 0.5}, {WaveVector({0, 1}), 1, 0.25}});
  const Basis b(1, 2);
  const auto g = spec.on_basis(b);
  double total = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    total += g[k];
    CHECK(g[k] == spec.gamma(b[k]));
    if (b[k].z == WaveVector({1, 0}) && b[k].j == 2) CHECK(g[k] == 0.5);
    if (b[k].z == WaveVector({0, 1}) && b[k].j == 1) CHECK(g[k] == 0.25);
  }
  CHECK(total == 0.75);
  CHECK_NOTHROW(validate(spec, 2));
}

TEST_CASE("spectrum validation names the failing condition") {
  CHECK_NOTHROW(validate(CovarianceSpectrum::power(0.1, 3.0), 2));
  CHECK_NOTHROW(validate(CovarianceSpectrum::power(0.0, 0.5), 2));
  CHECK_THROWS_AS(validate(CovarianceSpectrum::power(0.1, 2.0), 2), DomainError);
  CHECK_THROWS_AS(validate(CovarianceSpectrum::power(0.1, 2.5), 3), DomainError);
  CHECK_NOTHROW(validate(CovarianceSpectrum::power(0.1, 2.51), 3));
  CHECK_THROWS_AS(validate(CovarianceSpectrum::power(-0.1, 3.0), 2), DomainError);
  try {
    validate(CovarianceSpectrum::power(1.0, 1.0), 2);
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("diverges") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(CovarianceSpectrum::explicit_map({{WaveVector({0, 0}), 1, 1.0}}), 2), DomainError);
  CHECK_THROWS_AS(validate(CovarianceSpectrum::explicit_map({{WaveVector({1, 0}), 3, 1.0}}), 2), DomainError);
  CHECK_THROWS_AS(validate(CovarianceSpectrum::explicit_map({{WaveVector({1, 0}), 1, -1.0}}), 2), DomainError);
  CHECK_THROWS_AS(validate(CovarianceSpectrum::explicit_map({{WaveVector({1, 0}), 1, 1.0}, {WaveVector({-1, 0}), 1, 1.0}}), 2),
                  DomainError);
  CHECK_THROWS_AS(validate(CovarianceSpectrum::explicit_map({{WaveVector({1, 0, 0}), 1, 1.0}}), 2), DomainError);
}

TEST_CASE("increments scale with gamma dt") {
  const Basis b(2, 2);
  const auto spec = CovarianceSpectrum::power(0.1, 3.0);
  const DrawKey key{5, 2, 3, Stream::noise};
  const auto g = spec.on_basis(b);
  const auto dw = sample_increment(spec, b, 1e-3, key);
  std::vector<double> z(b.size());
  standard_normals(key, z);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(dw[k] == doctest::Approx(std::sqrt(g[k] * 1e-3) * z[k]).epsilon(1e-15));
  const auto zero = sample_increment(std::vector<double>(4, 0.0), 0.5, key);
  for (double v : zero) CHECK(v == 0.0);
  CHECK_THROWS_AS(sample_increment(g, 0.0, key), DomainError);
}
