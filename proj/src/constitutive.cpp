#include "splf/constitutive.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "splf/errors.hpp"

namespace splf {

void FluidParams::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("power-law exponent p must be > 1, got " + std::to_string(p));
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("viscosity nu must be > 0, got " + std::to_string(nu));
}

void power_law_stress(std::span<const double> e, std::span<double> tau, const FluidParams& params) {
  double e2 = 0.0;
  for (double x : e) e2 += x * x;
  const double factor = params.p == 2.0 ? 2.0 * params.nu
                                        : 2.0 * params.nu * std::pow(1.0 + e2, 0.5 * (params.p - 2.0));
  for (std::size_t i = 0; i < e.size(); ++i) tau[i] = factor * e[i];
}

std::vector<cplx> rate_of_strain_spectral(const SpectralField& v) {
  const int d = v.dim();
  const auto zd = static_cast<std::size_t>(d);
  std::vector<cplx> e(v.modes().size() * zd * zd);
  for (std::size_t m = 0; m < v.modes().size(); ++m) {
    const auto& z = v.modes()[m];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        e[(m * zd + static_cast<std::size_t>(i)) * zd + static_cast<std::size_t>(j)] =
            cplx(0.0, std::numbers::pi) * (static_cast<double>(z[i]) * v.at(m, j) + static_cast<double>(z[j]) * v.at(m, i));
      }
    }
  }
  return e;
}

GridTensorField rate_of_strain(const SpectralField& v, int M) {
  if (M == 0) M = quadrature_resolution(v.order());
  const int d = v.dim();
  const auto zd = static_cast<std::size_t>(d);
  FourierGrid grid(v.mode_set_ptr(), M);
  GridTensorField out{d, M, {}};
  const std::size_t pts = grid.points();
  out.values.resize(zd * zd * pts);
  const auto e_hat = rate_of_strain_spectral(v);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const std::size_t offset = static_cast<std::size_t>(i) * zd + static_cast<std::size_t>(j);
      auto dst = std::span<double>(out.values).subspan(offset * pts, pts);
      grid.synthesize(std::span<const cplx>(e_hat).subspan(offset), zd * zd, dst);
      if (i != j) {
        std::copy(dst.begin(), dst.end(),
                  out.values.begin() + static_cast<std::ptrdiff_t>((static_cast<std::size_t>(j) * zd + static_cast<std::size_t>(i)) * pts));
      }
    }
  }
  return out;
}

GridTensorField stress(const SpectralField& v, const FluidParams& params, int M) {
  params.validate();
  GridTensorField e = rate_of_strain(v, M);
  const auto zd = static_cast<std::size_t>(e.d);
  const std::size_t pts = e.points();
  std::vector<double> local(zd * zd), tau(zd * zd);
  for (std::size_t x = 0; x < pts; ++x) {
    for (std::size_t c = 0; c < zd * zd; ++c) local[c] = e.values[c * pts + x];
    power_law_stress(local, tau, params);
    for (std::size_t c = 0; c < zd * zd; ++c) e.values[c * pts + x] = tau[c];
  }
  return e;
}

double pairing_stress(const SpectralField& phi, const SpectralField& v, const FluidParams& params) {
  if (phi.dim() != v.dim()) throw DimensionError("pairing of fields with different d");
  const int M = quadrature_resolution(std::max(phi.order(), v.order()));
  const auto e_phi = rate_of_strain(phi, M);
  const auto tau = stress(v, params, M);
  double sum = 0.0;
  for (std::size_t i = 0; i < tau.values.size(); ++i) sum += e_phi.values[i] * tau.values[i];
  return sum / static_cast<double>(tau.points());
}

namespace {

// Grid samples of d_k w_i, stored at (i*d + k) * points.
std::vector<double> gradient_on_grid(const SpectralField& w, FourierGrid& grid) {
  const int d = w.dim();
  const std::size_t pts = grid.points();
  std::vector<double> out(static_cast<std::size_t>(d * d) * pts);
  std::vector<cplx> deriv(w.modes().size());
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      for (std::size_t m = 0; m < w.modes().size(); ++m) {
        deriv[m] = cplx(0.0, kTwoPi * w.modes()[m][k]) * w.at(m, i);
      }
      grid.synthesize(deriv, 1, std::span<double>(out).subspan(static_cast<std::size_t>(i * d + k) * pts, pts));
    }
  }
  return out;
}

// (v . grad) w on an M-grid; both fields embedded into the larger mode set.
std::vector<double> convection_values(const SpectralField& v, const SpectralField& w, int M) {
  const int d = v.dim();
  const int n = std::max(v.order(), w.order());
  const auto v_big = project_Pn(v, n);
  const auto w_big = project_Pn(w, n);
  FourierGrid grid(v_big.mode_set_ptr(), M);
  const std::size_t pts = grid.points();
  const auto vg = to_grid(v_big, M);
  const auto grad = gradient_on_grid(w_big, grid);
  std::vector<double> out(static_cast<std::size_t>(d) * pts, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const double* g = grad.data() + static_cast<std::size_t>(i * d + k) * pts;
      const double* vk = vg.values.data() + static_cast<std::size_t>(k) * pts;
      double* o = out.data() + static_cast<std::size_t>(i) * pts;
      for (std::size_t x = 0; x < pts; ++x) o[x] += vk[x] * g[x];
    }
  }
  return out;
}

}  // namespace

GridVectorField convection(const SpectralField& v, const SpectralField& w, int M) {
  if (v.dim() != w.dim()) throw DimensionError("convection of fields with different d");
  const int n = std::max(v.order(), w.order());
  if (M == 0) M = quadrature_resolution(n);
  if (M < 2 * (2 * n + 1)) {
    throw AliasingError("convection needs at least " + std::to_string(2 * (2 * n + 1)) +
                        " points per axis, got " + std::to_string(M));
  }
  return GridVectorField{v.dim(), M, convection_values(v, w, M)};
}

double pairing_convection(const SpectralField& w, const SpectralField& v, const SpectralField& phi) {
  if (w.dim() != v.dim() || v.dim() != phi.dim()) throw DimensionError("pairing of fields with different d");
  const int n = std::max({w.order(), v.order(), phi.order()});
  const int M = quadrature_resolution(n);
  const auto conv = convection_values(v, phi, M);
  const auto wg = to_grid(project_Pn(w, n), M);
  double sum = 0.0;
  for (std::size_t i = 0; i < conv.size(); ++i) sum += wg.values[i] * conv[i];
  return sum / static_cast<double>(wg.points());
}

double drift_coord(const SpectralField& X, const BasisIndex& idx, const FluidParams& params) {
  const int n = std::max(X.order(), idx.z.max_abs());
  RawModes psi(X.dim(), n);
  const auto hit = psi.modes().find(idx.z);
  if (!hit || hit->negated) throw DimensionError("basis index is not a canonical mode of the field");
  const cplx scale = idx.is_cosine() ? cplx(1.0 / std::numbers::sqrt2, 0.0)
                                     : cplx(0.0, -1.0 / std::numbers::sqrt2);
  for (int i = 0; i < X.dim(); ++i) psi.at(hit->index, i) = scale * idx.e_vec[static_cast<std::size_t>(i)];
  const auto psi_field = SpectralField::from_raw_checked(std::move(psi));
  const auto X_big = project_Pn(X, n);
  return pairing_convection(X_big, X_big, psi_field) - pairing_stress(psi_field, X_big, params);
}

std::vector<double> drift(const SpectralField& X, int n, const FluidParams& params) {
  const Basis basis = make_basis(n, X.dim());
  const auto coords = basis_coordinates(X, basis);
  DriftEvaluator eval(basis, params);
  std::vector<double> out(basis.size());
  eval.evaluate(coords, out);
  return out;
}

// ---------------------------------------------------------------------------
// DriftEvaluator

DriftEvaluator::DriftEvaluator(const Basis& basis, FluidParams params, int M)
    : basis_(basis),
      params_(params),
      grid_(basis.mode_set_ptr(), M == 0 ? quadrature_resolution(basis.order()) : M),
      d_(basis.dim()),
      points_(grid_.points()) {
  params_.validate();
  const int n = basis.order();
  if (grid_.resolution() < 2 * (2 * n + 1)) {
    throw AliasingError("drift grid needs at least " + std::to_string(2 * (2 * n + 1)) +
                        " points per axis, got " + std::to_string(grid_.resolution()));
  }
  const auto zd = static_cast<std::size_t>(d_);
  const std::size_t modes = basis.modes().size();
  v_hat_.resize(modes * zd);
  scratch_.resize(modes);
  v_.resize(zd * points_);
  grad_.resize(zd * zd * points_);
  conv_.resize(zd * points_);
  tau_.resize(zd * zd * points_);
  conv_hat_.resize(modes * zd);
  tau_hat_.resize(modes * zd * zd);
  b_hat_.resize(modes * zd);
}

void DriftEvaluator::load_coefficients(std::span<const double> coords) {
  if (coords.size() != basis_.size()) throw DimensionError("coordinate vector does not match the drift basis");
  const auto zd = static_cast<std::size_t>(d_);
  std::fill(v_hat_.begin(), v_hat_.end(), cplx{});
  for (std::size_t m = 0; m < basis_.modes().size(); ++m) {
    const auto frame = basis_.hyperplane(m);
    for (int r = 0; r < d_ - 1; ++r) {
      const cplx w = cplx(coords[basis_.index_of(m, r + 1)], -coords[basis_.index_of(m, d_ + r)]) /
                     std::numbers::sqrt2;
      for (std::size_t i = 0; i < zd; ++i) v_hat_[m * zd + i] += w * frame[static_cast<std::size_t>(r) * zd + i];
    }
  }
}

void DriftEvaluator::project(std::span<const cplx> field_hat, std::span<double> out) const {
  const auto zd = static_cast<std::size_t>(d_);
  for (std::size_t m = 0; m < basis_.modes().size(); ++m) {
    const auto frame = basis_.hyperplane(m);
    for (int r = 0; r < d_ - 1; ++r) {
      cplx s{};
      for (std::size_t i = 0; i < zd; ++i) s += field_hat[m * zd + i] * frame[static_cast<std::size_t>(r) * zd + i];
      out[basis_.index_of(m, r + 1)] = std::numbers::sqrt2 * s.real();
      out[basis_.index_of(m, d_ + r)] = -std::numbers::sqrt2 * s.imag();
    }
  }
}

namespace {

// x^a with the common half-integer exponents done without pow().
inline double real_pow(double x, double a) {
  if (a == 0.0) return 1.0;
  if (a == 0.5) return std::sqrt(x);
  if (a == 1.0) return x;
  if (a == 1.5) return x * std::sqrt(x);
  if (a == 2.0) return x * x;
  return std::pow(x, a);
}

}  // namespace

DriftEvaluator::Stats DriftEvaluator::run(std::span<const double> coords, std::span<double> convective,
                                          std::span<double> viscous) {
  load_coefficients(coords);
  const auto zd = static_cast<std::size_t>(d_);
  const std::size_t modes = basis_.modes().size();
  const auto& ms = basis_.modes();

  for (std::size_t i = 0; i < zd; ++i) {
    grid_.synthesize(std::span<const cplx>(v_hat_).subspan(i), zd, std::span<double>(v_).subspan(i * points_, points_));
    for (std::size_t k = 0; k < zd; ++k) {
      for (std::size_t m = 0; m < modes; ++m) {
        scratch_[m] = cplx(0.0, kTwoPi * ms[m][static_cast<int>(k)]) * v_hat_[m * zd + i];
      }
      grid_.synthesize(scratch_, 1, std::span<double>(grad_).subspan((i * zd + k) * points_, points_));
    }
  }

  const double p = params_.p;
  const double two_nu = 2.0 * params_.nu;
  double dissipation = 0.0;
  double grad_p = 0.0;
  for (std::size_t x = 0; x < points_; ++x) {
    double e2 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < zd; ++i) {
      double c = 0.0;
      for (std::size_t k = 0; k < zd; ++k) {
        const double gik = grad_[(i * zd + k) * points_ + x];
        const double eik = 0.5 * (gik + grad_[(k * zd + i) * points_ + x]);
        e2 += eik * eik;
        g2 += gik * gik;
        c += v_[k * points_ + x] * gik;
      }
      conv_[i * points_ + x] = c;
    }
    const double factor = two_nu * real_pow(1.0 + e2, 0.5 * (p - 2.0));
    for (std::size_t i = 0; i < zd; ++i) {
      for (std::size_t k = i; k < zd; ++k) {
        const double eik = 0.5 * (grad_[(i * zd + k) * points_ + x] + grad_[(k * zd + i) * points_ + x]);
        tau_[(i * zd + k) * points_ + x] = factor * eik;
      }
    }
    dissipation += factor * e2;
    grad_p += real_pow(g2, 0.5 * p);
  }

  for (std::size_t i = 0; i < zd; ++i) {
    grid_.analyze(std::span<const double>(conv_).subspan(i * points_, points_),
                  std::span<cplx>(conv_hat_).subspan(i), zd);
    for (std::size_t k = i; k < zd; ++k) {
      grid_.analyze(std::span<const double>(tau_).subspan((i * zd + k) * points_, points_),
                    std::span<cplx>(tau_hat_).subspan(i * zd + k), zd * zd);
      if (k != i) {
        for (std::size_t m = 0; m < modes; ++m) tau_hat_[(m * zd + k) * zd + i] = tau_hat_[(m * zd + i) * zd + k];
      }
    }
  }

  if (!convective.empty()) {
    for (std::size_t j = 0; j < modes * zd; ++j) b_hat_[j] = -conv_hat_[j];
    project(b_hat_, convective);
  }
  if (!viscous.empty()) {
    for (std::size_t m = 0; m < modes; ++m) {
      for (std::size_t i = 0; i < zd; ++i) {
        cplx div{};
        for (std::size_t k = 0; k < zd; ++k) div += cplx(0.0, kTwoPi * ms[m][static_cast<int>(k)]) * tau_hat_[(m * zd + i) * zd + k];
        b_hat_[m * zd + i] = div;
      }
    }
    project(b_hat_, viscous);
  }

  const double inv = 1.0 / static_cast<double>(points_);
  return Stats{dissipation * inv, std::pow(grad_p * inv, 1.0 / p)};
}

DriftEvaluator::Stats DriftEvaluator::evaluate(std::span<const double> coords, std::span<double> out) {
  if (out.size() != basis_.size()) throw DimensionError("drift output does not match the basis");
  const auto stats = run(coords, {}, {});
  const auto zd = static_cast<std::size_t>(d_);
  const auto& ms = basis_.modes();
  for (std::size_t m = 0; m < ms.size(); ++m) {
    for (std::size_t i = 0; i < zd; ++i) {
      cplx b = -conv_hat_[m * zd + i];
      for (std::size_t k = 0; k < zd; ++k) b += cplx(0.0, kTwoPi * ms[m][static_cast<int>(k)]) * tau_hat_[(m * zd + i) * zd + k];
      b_hat_[m * zd + i] = b;
    }
  }
  project(b_hat_, out);
  return stats;
}

void DriftEvaluator::evaluate_parts(std::span<const double> coords, std::span<double> convective,
                                    std::span<double> viscous) {
  if (convective.size() != basis_.size() || viscous.size() != basis_.size()) {
    throw DimensionError("drift output does not match the basis");
  }
  run(coords, convective, viscous);
}

double DriftEvaluator::sobolev_norm_pow(std::span<const double> coords, double p, double alpha) {
  if (!(p >= 1.0)) throw DomainError("L_p exponent must satisfy p >= 1");
  load_coefficients(coords);
  const auto zd = static_cast<std::size_t>(d_);
  for (std::size_t m = 0; m < basis_.modes().size(); ++m) {
    const double w = std::pow(1.0 + basis_.modes().laplacian_symbol(m), 0.5 * alpha);
    for (std::size_t i = 0; i < zd; ++i) v_hat_[m * zd + i] *= w;
  }
  for (std::size_t i = 0; i < zd; ++i) {
    grid_.synthesize(std::span<const cplx>(v_hat_).subspan(i), zd, std::span<double>(v_).subspan(i * points_, points_));
  }
  double sum = 0.0;
  for (std::size_t x = 0; x < points_; ++x) {
    double s = 0.0;
    for (std::size_t i = 0; i < zd; ++i) s += v_[i * points_ + x] * v_[i * points_ + x];
    sum += p == 2.0 ? s : std::pow(s, 0.5 * p);
  }
  return sum / static_cast<double>(points_);
}

}  // namespace splf
