#include "splf/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "splf/errors.hpp"

namespace splf {

void standard_normals(const DrawKey& key, std::span<double> out) {
  const philox::Key k{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)};
  for (std::size_t pair = 0; 2 * pair < out.size(); ++pair) {
    const philox::Counter c{static_cast<std::uint32_t>(pair), key.step, key.path,
                            static_cast<std::uint32_t>(key.stream)};
    const auto r = philox::generate(c, k);
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double u1 = 1.0 - to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out[2 * pair] = radius * std::cos(angle);
    if (2 * pair + 1 < out.size()) out[2 * pair + 1] = radius * std::sin(angle);
  }
}

double CovarianceSpectrum::gamma(const BasisIndex& idx) const {
  if (const auto* pw = as_power()) {
    return pw->c * std::pow(1.0 + kFourPiSq * static_cast<double>(idx.z.norm_sq()), -pw->s);
  }
  double total = 0.0;
  for (const auto& e : as_explicit()->entries) {
    if (e.j == idx.j && e.z.canonical() == idx.z) total += e.value;
  }
  return total;
}

std::vector<double> CovarianceSpectrum::on_basis(const Basis& basis) const {
  std::vector<double> out(basis.size(), 0.0);
  if (as_power()) {
    for (std::size_t k = 0; k < basis.size(); ++k) out[k] = gamma(basis[k]);
    return out;
  }
  for (const auto& e : as_explicit()->entries) {
    if (e.z.dim() != basis.dim()) continue;
    const auto hit = basis.modes().find(e.z);
    if (!hit) continue;
    out[basis.index_of(hit->index, e.j)] += e.value;
  }
  return out;
}

const CovarianceSpectrum& validate(const CovarianceSpectrum& spec, int d) {
  if (d < 2) throw ConfigError("noise dimension d must be >= 2");
  if (const auto* pw = spec.as_power()) {
    if (!(pw->c >= 0.0) || !std::isfinite(pw->c)) throw DomainError("power spectrum amplitude c must be >= 0");
    const double threshold = 0.5 * (d + 2);
    if (pw->c > 0.0 && !(pw->s > threshold)) {
      throw DomainError("trace of Laplacian*Gamma diverges: sum over z of |z|^2 (1 + 4 pi^2 |z|^2)^(-s) is infinite for s = " +
                        std::to_string(pw->s) + " <= (d+2)/2 = " + std::to_string(threshold));
    }
    return spec;
  }
  std::set<std::pair<WaveVector, int>> seen;
  for (const auto& e : spec.as_explicit()->entries) {
    if (e.z.dim() != d) throw DomainError("spectrum entry has wave vector of dimension " + std::to_string(e.z.dim()));
    if (e.z.is_zero()) throw DomainError("spectrum entry at z = 0 (mean-zero space has no such mode)");
    if (e.j < 1 || e.j > 2 * d - 2) throw DomainError("spectrum entry index j = " + std::to_string(e.j) + " out of range");
    if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
      throw DomainError("spectrum entry value " + std::to_string(e.value) + " is negative or not finite");
    }
    if (!seen.insert({e.z.canonical(), e.j}).second) throw DomainError("duplicate spectrum entry");
  }
  return spec;
}

double trace_Pn(const CovarianceSpectrum& spec, int n, int d) {
  if (n < 1) return 0.0;
  const auto g = spec.on_basis(make_basis(n, d));
  double sum = 0.0;
  for (double x : g) sum += x;
  return sum;
}

double operator_norm(const CovarianceSpectrum& spec, int n, int d) {
  if (n < 1) return 0.0;
  const auto g = spec.on_basis(make_basis(n, d));
  return g.empty() ? 0.0 : *std::max_element(g.begin(), g.end());
}

std::vector<double> sample_increment(const std::vector<double>& gamma, double dt, const DrawKey& key) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  std::vector<double> out(gamma.size());
  standard_normals(key, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= std::sqrt(gamma[k] * dt);
  return out;
}

std::vector<double> sample_increment(const CovarianceSpectrum& spec, const Basis& basis, double dt,
                                     const DrawKey& key) {
  return sample_increment(spec.on_basis(basis), dt, key);
}

}  // namespace splf
