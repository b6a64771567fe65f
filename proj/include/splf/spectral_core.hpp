#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace splf {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPiSq = 4.0 * std::numbers::pi * std::numbers::pi;

/// Nonzero integer frequency z on the torus T^d.
class WaveVector {
 public:
  WaveVector() = default;
  explicit WaveVector(std::vector<int> components);

  int dim() const { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const int> components() const { return c_; }

  long long norm_sq() const;
  int max_abs() const;
  bool is_zero() const;
  /// First nonzero component is positive.
  bool is_canonical() const;
  WaveVector negated() const;
  WaveVector canonical() const { return is_canonical() ? *this : negated(); }

  auto operator<=>(const WaveVector&) const = default;

 private:
  std::vector<int> c_;
};

/// Canonical half-space of [-n,n]^d \ {0}, lexicographically ordered.
class ModeSet {
 public:
  ModeSet(int d, int n);

  int dim() const { return d_; }
  int order() const { return n_; }
  std::size_t size() const { return modes_.size(); }
  const WaveVector& operator[](std::size_t k) const { return modes_[k]; }
  std::span<const WaveVector> modes() const { return modes_; }

  /// 4 pi^2 |z|^2 for mode k.
  double laplacian_symbol(std::size_t k) const { return symbol_[k]; }

  struct Lookup {
    std::size_t index;
    bool negated;  // z is the conjugate partner of the stored mode
  };
  /// Locates z or -z; empty when z = 0 or z lies outside [-n,n]^d.
  std::optional<Lookup> find(const WaveVector& z) const;

 private:
  int d_;
  int n_;
  std::vector<WaveVector> modes_;
  std::vector<double> symbol_;
  std::vector<long> lookup_;  // signed (index + 1) over the full cube
};

/// Shared, cached mode set.
std::shared_ptr<const ModeSet> mode_set(int d, int n);

/// (z, j) label of the real divergence-free basis function psi_{z,j}.
struct BasisIndex {
  WaveVector z;
  int j = 1;                   // 1..2d-2; j <= d-1 is a cosine mode
  std::vector<double> e_vec;   // unit vector orthogonal to z
  std::size_t mode = 0;        // position of z in the ModeSet

  bool is_cosine() const { return j <= z.dim() - 1; }
};

/// Orthonormal basis {psi_{z,j}} of the truncated divergence-free space.
class Basis {
 public:
  Basis(int n, int d);

  int dim() const { return modes_->dim(); }
  int order() const { return modes_->order(); }
  std::size_t size() const { return indices_.size(); }
  const BasisIndex& operator[](std::size_t k) const { return indices_[k]; }
  std::span<const BasisIndex> indices() const { return indices_; }

  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set_ptr() const { return modes_; }

  /// Row-major (d-1) x d block of hyperplane vectors for mode k.
  std::span<const double> hyperplane(std::size_t mode) const;

  std::size_t index_of(std::size_t mode, int j) const {
    return mode * static_cast<std::size_t>(per_mode()) + static_cast<std::size_t>(j - 1);
  }
  int per_mode() const { return 2 * dim() - 2; }
  double laplacian_symbol(std::size_t k) const {
    return modes_->laplacian_symbol(indices_[k].mode);
  }

 private:
  std::shared_ptr<const ModeSet> modes_;
  std::vector<double> frames_;
  std::vector<BasisIndex> indices_;
};

/// All (z, j) with z in the canonical half-space of [-n,n]^d \ {0}.
Basis make_basis(int n, int d);

/// Orthonormal frame of the hyperplane z^perp by Gram-Schmidt of the
/// canonical unit vectors, dropping the one most aligned with z.
std::vector<double> hyperplane_frame(const WaveVector& z);

/// Mode-indexed complex d-vectors on the canonical half-space, with no
/// incompressibility constraint. Conjugate symmetry is implicit.
class RawModes {
 public:
  RawModes(int d, int n);
  explicit RawModes(std::shared_ptr<const ModeSet> modes);

  int dim() const { return modes_->dim(); }
  int order() const { return modes_->order(); }
  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& mode_set_ptr() const { return modes_; }

  cplx& at(std::size_t mode, int comp) {
    return coeffs_[mode * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(comp)];
  }
  cplx at(std::size_t mode, int comp) const {
    return coeffs_[mode * static_cast<std::size_t>(dim()) + static_cast<std::size_t>(comp)];
  }
  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

 private:
  std::shared_ptr<const ModeSet> modes_;
  std::vector<cplx> coeffs_;
};

/// Real, mean-zero, divergence-free trigonometric polynomial on T^d.
///
/// Only the canonical representative z of each pair {z, -z} is stored; the
/// partner coefficient is conj(v_z). Values are immutable once built.
class SpectralField {
 public:
  SpectralField(int d, int n);

  /// Adopts raw coefficients that already satisfy z . v_z = 0 up to
  /// `tolerance` (relative to the largest coefficient); throws otherwise.
  static SpectralField from_raw_checked(RawModes raw, double tolerance = 1e-12);

  int dim() const { return raw_.dim(); }
  int order() const { return raw_.order(); }
  const ModeSet& modes() const { return raw_.modes(); }
  const std::shared_ptr<const ModeSet>& mode_set_ptr() const { return raw_.mode_set_ptr(); }

  cplx at(std::size_t mode, int comp) const { return raw_.at(mode, comp); }
  std::span<const cplx> coeffs() const { return raw_.coeffs(); }
  const RawModes& raw() const { return raw_; }

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator*(double s) const;
  friend SpectralField operator*(double s, const SpectralField& f) { return f * s; }

 private:
  explicit SpectralField(RawModes raw) : raw_(std::move(raw)) {}
  friend SpectralField project_div_free(const RawModes& raw);
  friend SpectralField field_from_coordinates(std::span<const double> coords, const Basis& basis);
  friend SpectralField project_Pn(const SpectralField& field, int n);

  RawModes raw_;
};

/// Physical samples of a vector field on the uniform M^d grid of [0,1)^d,
/// stored component-major: values[comp * M^d + point].
struct GridVectorField {
  int d = 0;
  int M = 0;
  std::vector<double> values;

  std::size_t points() const;
  double& at(int comp, std::size_t pt) { return values[static_cast<std::size_t>(comp) * points() + pt]; }
  double at(int comp, std::size_t pt) const { return values[static_cast<std::size_t>(comp) * points() + pt]; }
};

/// Physical samples of a d x d tensor field, values[(i*d + j) * M^d + point].
struct GridTensorField {
  int d = 0;
  int M = 0;
  std::vector<double> values;

  std::size_t points() const;
  double at(int i, int j, std::size_t pt) const {
    return values[static_cast<std::size_t>(i * d + j) * points() + pt];
  }
  double& at(int i, int j, std::size_t pt) {
    return values[static_cast<std::size_t>(i * d + j) * points() + pt];
  }
};

/// Grid size used for every L_p quadrature and nonlinear evaluation at
/// truncation n: max(2(2n+1), 32).
int quadrature_resolution(int n);

// Coordinate maps X^{z,j} = <field, psi_{z,j}>.
std::vector<double> basis_coordinates(const SpectralField& field, const Basis& basis);
SpectralField field_from_coordinates(std::span<const double> coords, const Basis& basis);

/// The basis function psi_{z,j} as a field.
SpectralField basis_function(const Basis& basis, std::size_t k);

/// ||field||_{p,alpha}: L_p norm of (1 - Laplacian)^{alpha/2} field.
double sobolev_norm(const SpectralField& field, double p, double alpha);

GridVectorField to_grid(const SpectralField& field, int M);
GridVectorField to_grid(const RawModes& raw, int M);
RawModes from_grid(const GridVectorField& grid, int n);

/// Leray projection v_z - (z . v_z) z / |z|^2 on every mode.
SpectralField project_div_free(const RawModes& raw);

/// Keeps modes with z in [-n,n]^d; the result has truncation order n.
SpectralField project_Pn(const SpectralField& field, int n);

/// L_2 inner product via Parseval.
double inner_product(const SpectralField& u, const SpectralField& v);

// Derived norms used by the diagnostics.
double l2_norm_sq(const SpectralField& field);
double gradient_l2_norm_sq(const SpectralField& field);   // ||grad v||_2^2
double laplacian_l2_norm_sq(const SpectralField& field);  // ||Lap v||_2^2
double gradient_lp_norm(const SpectralField& field, double p);   // || |grad v|_F ||_p
double laplacian_lp_norm(const SpectralField& field, double p);  // || |Lap v| ||_p

/// max |z . v_z| over stored modes.
double divergence_defect(const SpectralField& field);

/// max |c_{-z} - conj(c_z)| + max |c_z - v_z| where c are the coefficients
/// recovered from the physical samples by a complex DFT.
double conjugate_symmetry_defect(const SpectralField& field);

}  // namespace splf
