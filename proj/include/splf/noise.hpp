#pragma once

#include <string>
#include <variant>
#include <vector>

#include "splf/philox.hpp"
#include "splf/spectral_core.hpp"

namespace splf {

/// gamma_{z,j} = c (1 + 4 pi^2 |z|^2)^{-s}.
struct PowerSpectrum {
  double c = 0.0;
  double s = 0.0;
};

struct SpectrumEntry {
  WaveVector z;
  int j = 1;
  double value = 0.0;
};

/// Finitely many nonzero eigenvalues; every other gamma is zero.
struct ExplicitSpectrum {
  std::vector<SpectrumEntry> entries;
};

/// Eigenvalues of the noise covariance, diagonal in the psi_{z,j} basis.
class CovarianceSpectrum {
 public:
  CovarianceSpectrum() : desc_(ExplicitSpectrum{}) {}
  static CovarianceSpectrum zero() { return CovarianceSpectrum(); }
  static CovarianceSpectrum power(double c, double s) { return CovarianceSpectrum(PowerSpectrum{c, s}); }
  static CovarianceSpectrum explicit_map(std::vector<SpectrumEntry> entries) {
    return CovarianceSpectrum(ExplicitSpectrum{std::move(entries)});
  }

  bool is_power() const { return std::holds_alternative<PowerSpectrum>(desc_); }
  const PowerSpectrum* as_power() const { return std::get_if<PowerSpectrum>(&desc_); }
  const ExplicitSpectrum* as_explicit() const { return std::get_if<ExplicitSpectrum>(&desc_); }

  /// gamma for one basis index. Negative wave vectors in an explicit map
  /// refer to the same cos/sin pair as their canonical partner.
  double gamma(const BasisIndex& idx) const;

  /// gamma over the whole basis, in basis order.
  std::vector<double> on_basis(const Basis& basis) const;

 private:
  explicit CovarianceSpectrum(std::variant<PowerSpectrum, ExplicitSpectrum> d) : desc_(std::move(d)) {}
  std::variant<PowerSpectrum, ExplicitSpectrum> desc_;
};

/// Checks nonnegativity and that both Gamma and Laplacian*Gamma are trace
/// class; throws DomainError naming the divergent sum.
const CovarianceSpectrum& validate(const CovarianceSpectrum& spec, int d);

/// tr(Gamma P_n).
double trace_Pn(const CovarianceSpectrum& spec, int n, int d);

/// Largest eigenvalue on the truncated basis.
double operator_norm(const CovarianceSpectrum& spec, int n, int d);

/// Increment coordinates dW^{z,j} ~ N(0, gamma_{z,j} dt), independent.
std::vector<double> sample_increment(const std::vector<double>& gamma, double dt, const DrawKey& key);
std::vector<double> sample_increment(const CovarianceSpectrum& spec, const Basis& basis, double dt,
                                     const DrawKey& key);

}  // namespace splf
