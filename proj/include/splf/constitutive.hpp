#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "splf/fourier_grid.hpp"
#include "splf/spectral_core.hpp"

namespace splf {

/// Power-law exponent p > 1 and kinematic viscosity nu > 0.
struct FluidParams {
  double p = 2.0;
  double nu = 1.0;

  void validate() const;
};

/// Spectral rate of strain: e_hat[(mode * d + i) * d + j] = pi i (z_i v_j + z_j v_i).
std::vector<cplx> rate_of_strain_spectral(const SpectralField& v);

/// e(v) = (d_i v_j + d_j v_i) / 2 sampled on the M^d grid (M = 0 picks
/// quadrature_resolution(n)).
GridTensorField rate_of_strain(const SpectralField& v, int M = 0);

/// tau(v) = 2 nu (1 + |e(v)|^2)^{(p-2)/2} e(v), |e|^2 the squared Frobenius norm.
GridTensorField stress(const SpectralField& v, const FluidParams& params, int M = 0);

/// Pointwise power-law stress applied to one symmetric tensor (row-major d x d).
void power_law_stress(std::span<const double> e, std::span<double> tau, const FluidParams& params);

/// <e(phi), tau(v)> by grid quadrature; the weak form of -<phi, div tau(v)>.
double pairing_stress(const SpectralField& phi, const SpectralField& v, const FluidParams& params);

/// (v . grad) w on a grid of at least 2(2n+1) points per axis.
GridVectorField convection(const SpectralField& v, const SpectralField& w, int M = 0);

/// <w, (v . grad) phi> by alias-free quadrature.
double pairing_convection(const SpectralField& w, const SpectralField& v, const SpectralField& phi);

/// b^{z,j}(X) = <X, (X . grad) psi_{z,j}> - <tau(X), e(psi_{z,j})> by two
/// independent pairings.
double drift_coord(const SpectralField& X, const BasisIndex& idx, const FluidParams& params);

/// P_n b(X) in basis coordinates through one shared grid pass.
std::vector<double> drift(const SpectralField& X, int n, const FluidParams& params);

/// Reusable scratch space for the Galerkin drift on one basis.
///
/// One forward synthesis of X and grad X, the pointwise nonlinearity, then one
/// analysis of the convection and stress fields. Not shareable between
/// concurrent callers.
class DriftEvaluator {
 public:
  DriftEvaluator(const Basis& basis, FluidParams params, int M = 0);

  struct Stats {
    double dissipation = 0.0;  // <e(X), tau(X)>
    double grad_lp = 0.0;      // || |grad X|_F ||_p
  };

  /// Writes P_n b(X) into `out` and returns quadrature diagnostics of X.
  Stats evaluate(std::span<const double> coords, std::span<double> out);

  /// Drift split into its convection part -P_n (X.grad)X and stress part
  /// P_n div tau(X).
  void evaluate_parts(std::span<const double> coords, std::span<double> convective,
                      std::span<double> viscous);

  /// ||X||_{p,alpha}^p by grid quadrature.
  double sobolev_norm_pow(std::span<const double> coords, double p, double alpha);

  const Basis& basis() const { return basis_; }
  const FluidParams& params() const { return params_; }
  int resolution() const { return grid_.resolution(); }

 private:
  Stats run(std::span<const double> coords, std::span<double> convective, std::span<double> viscous);
  void load_coefficients(std::span<const double> coords);
  void project(std::span<const cplx> field_hat, std::span<double> out) const;

  Basis basis_;
  FluidParams params_;
  FourierGrid grid_;
  int d_;
  std::size_t points_;
  std::vector<cplx> v_hat_;     // mode * d + i
  std::vector<cplx> scratch_;   // one scalar spectral component
  std::vector<double> v_;       // d components on the grid
  std::vector<double> grad_;    // grad_[(i*d + k)] = d_k v_i on the grid
  std::vector<double> conv_;
  std::vector<double> tau_;     // (i*d + k) on the grid, upper triangle filled
  std::vector<cplx> conv_hat_;
  std::vector<cplx> tau_hat_;   // (mode * d + i) * d + k
  std::vector<cplx> b_hat_;
};

}  // namespace splf
