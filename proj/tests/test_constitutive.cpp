#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "splf/constitutive.hpp"
#include "splf/errors.hpp"

using namespace splf;

namespace {

std::vector<double> random_coords(std::size_t size, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> x(size);
  for (auto& v : x) v = normal(rng);
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Frozen {
  int d, n;
  double p;
  std::array<double, 6> drift;
  double dissipation, grad_lp, vp1_p;
};

// Reference values from tests/oracles/galerkin_oracle.py (direct trigonometric
// sums on the 32^d grid) for X_k = 0.3 sin(1.7 k + 0.4).
const Frozen kFrozen[] = {
    {2, 2, 3.0,
     {-86.212725275165013, -150.28167988945083, 340.85763338354451, 340.9469133373957, -607.05953507009076,
      -342.85313983209585},
     2286.0633109763612, 14.801534896740415, 3598.5040788044107},
    {2, 2, 1.5,
     {-1.0710448546501359, -3.2374045589205456, 9.7683881694853678, 12.207971887069013, -12.891955853777834,
      -7.9604465214809803},
     53.737838710165441, 12.728411072616503, 44.173494468363025},
    {3, 1, 2.5,
     {-14.01167922629066, -34.288767647048672, 24.867293970366241, 21.61232863345969, -61.368728035525471,
      -37.898998095920582},
     634.50482894892389, 14.116244187699552, 812.27298807027887},
};

}  // namespace

TEST_CASE("drift matches frozen direct-summation reference values") {
  for (const auto& f : kFrozen) {
    CAPTURE(f.d);
    CAPTURE(f.p);
    const Basis b(f.n, f.d);
    DriftEvaluator ev(b, FluidParams{f.p, 1.0});
    const auto x = oracle::smooth_state(b.size());
    std::vector<double> out(b.size());
    const auto stats = ev.evaluate(x, out);
    for (int k = 0; k < 6; ++k) CHECK(out[static_cast<std::size_t>(k)] == doctest::Approx(f.drift[static_cast<std::size_t>(k)]).epsilon(1e-11));
    CHECK(stats.dissipation == doctest::Approx(f.dissipation).epsilon(1e-12));
    CHECK(stats.grad_lp == doctest::Approx(f.grad_lp).epsilon(1e-12));
    CHECK(ev.sobolev_norm_pow(x, f.p, 1.0) == doctest::Approx(f.vp1_p).epsilon(1e-12));
    CHECK(dot(x, out) == doctest::Approx(-f.dissipation).epsilon(1e-11));
  }
}

TEST_CASE("shared-pass drift agrees with the two-pairing definition coordinate by coordinate") {
  std::mt19937_64 rng(42);
  for (double p : {1.5, 2.0, 3.0}) {
    const Basis b(2, 2);
    DriftEvaluator ev(b, FluidParams{p, 0.7});
    const auto x = random_coords(b.size(), rng, 0.2);
    const auto field = field_from_coordinates(x, b);
    std::vector<double> out(b.size());
    ev.evaluate(x, out);
    for (std::size_t k = 0; k < b.size(); ++k) {
      CHECK(out[k] == doctest::Approx(drift_coord(field, b[k], FluidParams{p, 0.7})).epsilon(1e-11).scale(1.0));
    }
    const auto whole = drift(field, 2, FluidParams{p, 0.7});
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(whole[k] == doctest::Approx(out[k]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("rate of strain and convection match pointwise direct sums") {
  std::mt19937_64 rng(7);
  const Basis b(2, 2);
  const auto xv = random_coords(b.size(), rng);
  const auto xw = random_coords(b.size(), rng);
  const auto v = field_from_coordinates(xv, b);
  const auto w = field_from_coordinates(xw, b);
  const int M = 12;
  const auto e = rate_of_strain(v, M);
  const auto conv = convection(v, w, M);
  double worst = 0.0;
  for (std::size_t q = 0; q < e.points(); q += 5) {
    const auto pt = oracle::grid_point(q, 2, M);
    const auto pv = oracle::evaluate(xv, b, pt);
    const auto pw = oracle::evaluate(xw, b, pt);
    for (int i = 0; i < 2; ++i) {
      double c = 0.0;
      for (int k = 0; k < 2; ++k) {
        const double eik = 0.5 * (pv.g[static_cast<std::size_t>(i * 2 + k)] + pv.g[static_cast<std::size_t>(k * 2 + i)]);
        worst = std::max(worst, std::abs(e.at(i, k, q) - eik));
        c += pv.v[static_cast<std::size_t>(k)] * pw.g[static_cast<std::size_t>(i * 2 + k)];
      }
      worst = std::max(worst, std::abs(conv.at(i, q) - c));
    }
  }
  CHECK(worst < 1e-11);
  CHECK_THROWS_AS(convection(v, w, 9), AliasingError);
}

TEST_CASE("power-law stress on hand-computed tensors") {
  std::array<double, 4> tau{};
  // |e|^2 = 3 -> factor 2 nu (1 + 3)^{1/2} = 4 nu at p = 3.
  const std::array<double, 4> e{1.0, std::sqrt(0.5), std::sqrt(0.5), -1.0};
  power_law_stress(e, tau, FluidParams{3.0, 0.5});
  CHECK(tau[0] == doctest::Approx(2.0));
  CHECK(tau[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(tau[3] == doctest::Approx(-2.0));
  power_law_stress(e, tau, FluidParams{2.0, 0.5});
  CHECK(tau[0] == 1.0);
  CHECK(tau[1] == doctest::Approx(std::sqrt(0.5)));
  // p = 1.5: factor 2 nu (1 + 3)^{-1/4} = 2 nu / sqrt 2
  power_law_stress(e, tau, FluidParams{1.5, 1.0});
  CHECK(tau[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(FluidParams({1.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(FluidParams({2.0, 0.0}).validate(), ConfigError);
}

TEST_CASE("Newtonian stress part is the spectral Laplacian") {
  std::mt19937_64 rng(3);
  const Basis b(3, 2);
  DriftEvaluator ev(b, FluidParams{2.0, 1.3});
  const auto x = random_coords(b.size(), rng);
  std::vector<double> conv(b.size()), visc(b.size());
  ev.evaluate_parts(x, conv, visc);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(visc[k] == doctest::Approx(-1.3 * b.laplacian_symbol(k) * x[k]).epsilon(1e-12));
  CHECK(dot(x, conv) == doctest::Approx(0.0).scale(dot(x, x) * 10.0).epsilon(1e-13));
}

TEST_CASE("drift vanishes at the zero state") {
  const Basis b(2, 3);
  for (double p : {1.5, 2.0, 3.0}) {
    DriftEvaluator ev(b, FluidParams{p, 1.0});
    const std::vector<double> zero(b.size(), 0.0);
    std::vector<double> out(b.size(), 1.0);
    const auto stats = ev.evaluate(zero, out);
    for (double v : out) CHECK(v == 0.0);
    CHECK(stats.dissipation == 0.0);
  }
}

TEST_CASE("algebraic identities hold on random triples") {
  std::mt19937_64 rng(2024);
  const Basis b(4, 2);
  const FluidParams newtonian{2.0, 0.9};
  double worst_anti = 0.0, worst_skew = 0.0, worst_lap = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto xu = random_coords(b.size(), rng, 0.1);
    const auto xv = random_coords(b.size(), rng, 0.1);
    const auto xw = random_coords(b.size(), rng, 0.1);
    const auto u = field_from_coordinates(xu, b);
    const auto v = field_from_coordinates(xv, b);
    const auto w = field_from_coordinates(xw, b);
    worst_anti = std::max(worst_anti, std::abs(pairing_convection(u, v, w) + pairing_convection(w, v, u)));
    worst_skew = std::max(worst_skew, std::abs(pairing_convection(w, v, w)));
    double lap = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) lap += b.laplacian_symbol(k) * xu[k] * xv[k];
    worst_lap = std::max(worst_lap, std::abs(pairing_stress(u, v, newtonian) - newtonian.nu * lap));
  }
  CHECK(worst_anti < 1e-10);
  CHECK(worst_skew < 1e-10);
  CHECK(worst_lap < 1e-10);
}
