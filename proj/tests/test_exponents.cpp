#include <cmath>
#include <random>

#include "doctest.h"
#include "splf/errors.hpp"
#include "splf/exponents.hpp"
#include "splf/spectral_core.hpp"

using namespace splf;

TEST_CASE("critical exponents for small dimensions are exact rationals") {
  CHECK(critical_exponents(2).p1 == Rational(3, 2));
  CHECK(critical_exponents(3).p1 == Rational(9, 5));
  CHECK(critical_exponents(4).p1 == Rational(2));
  CHECK(critical_exponents(5).p1 == Rational(11, 5));
  CHECK_FALSE(critical_exponents(2).p2.has_value());
  CHECK(std::isinf(critical_exponents(2).p2_value()));
  CHECK(*critical_exponents(3).p2 == Rational(6));
  CHECK(to_string(critical_exponents(3).p1) == "9/5");
  CHECK_THROWS_AS(critical_exponents(1), DomainError);
}

TEST_CASE("critical exponents at d = 9") {
  const auto c = critical_exponents(9);
  CHECK(std::floor(to_double(c.p1) * 1000.0) / 1000.0 == doctest::Approx(2.555));
  CHECK(*c.p2 == Rational(18, 7));
  CHECK(std::floor(c.p2_value() * 10000.0) / 10000.0 == doctest::Approx(2.5714));
  CHECK(std::floor(c.p3 * 1000.0) / 1000.0 == doctest::Approx(2.620));
}

TEST_CASE("ordering of the critical exponents across dimensions") {
  for (int d = 2; d <= 8; ++d) {
    const auto c = critical_exponents(d);
    CHECK(to_double(c.p1) < c.p3);
    CHECK(c.p3 < c.p2_value());
  }
  for (int d = 10; d <= 64; ++d) {
    const auto c = critical_exponents(d);
    CHECK(c.p2_value() < to_double(c.p1));
  }
}

TEST_CASE("admissible existence range") {
  CHECK(admissible_existence(2.0, 3));
  CHECK_FALSE(admissible_existence(2.58, 9));
  CHECK_FALSE(admissible_existence(1.4, 2));
  CHECK(admissible_existence(2.7, 9));
  CHECK(admissible_existence(2.56, 9));
  CHECK_THROWS_AS(admissible_existence(1.0, 2), DomainError);
  for (int d = 2; d <= 64; ++d) {
    for (double p = 1.01; p < 8.0; p += 0.0173) {
      CHECK(admissible_existence(p, d) == admissible_existence_piecewise(p, d));
    }
  }
}

TEST_CASE("beta exponent") {
  CHECK(beta1(3.0, 3).value == 1.0);
  CHECK(beta1(2.0, 3).value == doctest::Approx(1.5));
  const auto flagged = beta(2.0, 1.0, 2);
  CHECK(flagged.interpolation_case);
  CHECK(flagged.value == 1.0);
  CHECK_FALSE(beta1(3.0, 3).interpolation_case);
  CHECK_THROWS_AS(beta(1.2, 1.0, 3), DomainError);  // 2d/(d+2) = 1.2
  CHECK_THROWS_AS(beta(2.0, 0.0, 3), DomainError);
  // First branch exceeds one.
  for (double p = 1.25; p < 2.4; p += 0.05) CHECK(beta1(p, 3).value > 1.0);
}

TEST_CASE("lambda weight") {
  for (double p : {1.6, 2.0, 3.0, 4.5}) CHECK(lambda(p, 2) == 0.0);
  CHECK(lambda(3.0, 3) == 0.0);
  CHECK(lambda(4.0, 5) == 0.0);
  CHECK(lambda(2.5, 3) == doctest::Approx(0.4));
  CHECK_THROWS_AS(lambda(5.0 / 3.0, 3), DomainError);
  // Decreasing, and continuous where it reaches zero at p = 3.
  double prev = lambda(1.9, 3);
  for (double p = 1.9; p < 4.0; p += 1e-3) {
    const double cur = lambda(p, 3);
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK(lambda(3.0 - 1e-9, 3) < 1e-8);
}

TEST_CASE("delta, theta and the uniqueness threshold") {
  CHECK(delta(2.0) == 0.5);
  CHECK(theta_gn(2.0, 3) == 1.0);
  CHECK(theta_gn(6.0, 3) == 0.0);
  CHECK_THROWS_AS(theta_gn(6.5, 3), DomainError);
  CHECK_THROWS_AS(theta_gn(2.0, 2), DomainError);
  CHECK(uniqueness_threshold(2) == Rational(2));
  CHECK(uniqueness_threshold(3) == Rational(5, 2));
  for (int d = 2; d <= 6; ++d) {
    const double top = d == 2 ? 50.0 : 2.0 * d / (d - 2.0);
    double prev = 2.0;
    for (double q = d == 2 ? 2.01 : 2.0; q <= top; q += 0.01) {
      const double t = theta_gn(q, d);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      CHECK(t <= prev);
      prev = t;
    }
  }
}

TEST_CASE("interpolation ratio is invariant under scaling") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const Basis b(3, 3);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(b.size());
    for (auto& v : x) v = normal(rng);
    const auto f = field_from_coordinates(x, b);
    const double q = 3.0;
    const double t = theta_gn(q, 3);
    auto ratio = [&](const SpectralField& g) {
      return sobolev_norm(g, q, 0.0) / (std::pow(std::sqrt(l2_norm_sq(g)), t) * std::pow(std::sqrt(gradient_l2_norm_sq(g)), 1.0 - t));
    };
    const double r1 = ratio(f);
    CHECK(ratio(f * 7.5) == doctest::Approx(r1).epsilon(1e-12));
    CHECK(ratio(f * 0.01) == doctest::Approx(r1).epsilon(1e-12));
  }
}

TEST_CASE("exponent report") {
  const auto r = exponent_report(3, 2.5);
  CHECK(*r.admissible_existence);
  CHECK(*r.uniqueness_ok);
  CHECK(*r.lambda == doctest::Approx(0.4));
  CHECK(*r.delta == doctest::Approx(2.5 / 4.5));
  const auto bare = exponent_report(4);
  CHECK_FALSE(bare.admissible_existence.has_value());
  CHECK(bare.critical.p1 == Rational(2));
}
