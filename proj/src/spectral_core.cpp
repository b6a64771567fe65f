#include "splf/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "splf/errors.hpp"
#include "splf/fourier_grid.hpp"

namespace splf {

// ---------------------------------------------------------------------------
// WaveVector

WaveVector::WaveVector(std::vector<int> components) : c_(std::move(components)) {}

long long WaveVector::norm_sq() const {
  long long s = 0;
  for (int v : c_) s += static_cast<long long>(v) * v;
  return s;
}

int WaveVector::max_abs() const {
  int m = 0;
  for (int v : c_) m = std::max(m, std::abs(v));
  return m;
}

bool WaveVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](int v) { return v == 0; });
}

bool WaveVector::is_canonical() const {
  for (int v : c_) {
    if (v != 0) return v > 0;
  }
  return false;
}

WaveVector WaveVector::negated() const {
  std::vector<int> out(c_.size());
  std::transform(c_.begin(), c_.end(), out.begin(), [](int v) { return -v; });
  return WaveVector(std::move(out));
}

// ---------------------------------------------------------------------------
// ModeSet

namespace {

constexpr std::size_t kMaxCube = std::size_t{1} << 26;

std::size_t cube_size(int d, int n) {
  std::size_t size = 1;
  for (int i = 0; i < d; ++i) {
    size *= static_cast<std::size_t>(2 * n + 1);
    if (size > kMaxCube) {
      throw ConfigError("mode cube [-" + std::to_string(n) + "," + std::to_string(n) + "]^" +
                        std::to_string(d) + " is too large");
    }
  }
  return size;
}

}  // namespace

ModeSet::ModeSet(int d, int n) : d_(d), n_(n) {
  if (d < 2) throw ConfigError("dimension d must be >= 2, got " + std::to_string(d));
  if (n < 0) throw ConfigError("truncation n must be >= 0, got " + std::to_string(n));
  const std::size_t cube = cube_size(d, n);
  lookup_.assign(cube, 0);
  const int side = 2 * n + 1;

  // Odometer over the cube with the first axis most significant: lexicographic order.
  std::vector<int> z(static_cast<std::size_t>(d), -n);
  for (std::size_t flat = 0; flat < cube; ++flat) {
    WaveVector w(z);
    if (w.is_canonical()) {
      modes_.push_back(w);
      symbol_.push_back(kFourPiSq * static_cast<double>(w.norm_sq()));
    }
    for (int i = d - 1; i >= 0; --i) {
      auto& zi = z[static_cast<std::size_t>(i)];
      if (++zi <= n) break;
      zi = -n;
    }
  }
  auto flat_index = [&](std::span<const int> v, int sign) {
    std::size_t idx = 0;
    for (int c : v) idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(sign * c + n);
    return idx;
  };
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    lookup_[flat_index(modes_[k].components(), 1)] = static_cast<long>(k) + 1;
    lookup_[flat_index(modes_[k].components(), -1)] = -(static_cast<long>(k) + 1);
  }
}

std::optional<ModeSet::Lookup> ModeSet::find(const WaveVector& z) const {
  if (z.dim() != d_ || z.max_abs() > n_ || z.is_zero()) return std::nullopt;
  std::size_t idx = 0;
  for (int c : z.components()) idx = idx * static_cast<std::size_t>(2 * n_ + 1) + static_cast<std::size_t>(c + n_);
  const long tag = lookup_[idx];
  return Lookup{static_cast<std::size_t>(std::abs(tag) - 1), tag < 0};
}

std::shared_ptr<const ModeSet> mode_set(int d, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{d, n}];
  if (!slot) slot = std::make_shared<const ModeSet>(d, n);
  return slot;
}

// ---------------------------------------------------------------------------
// Basis

std::vector<double> hyperplane_frame(const WaveVector& z) {
  const int d = z.dim();
  if (z.is_zero()) throw DomainError("hyperplane frame of the zero wave vector");
  const auto zd = static_cast<std::size_t>(d);

  int drop = 0;
  for (int i = 1; i < d; ++i) {
    if (std::abs(z[i]) > std::abs(z[drop])) drop = i;
  }

  std::vector<std::vector<double>> q;
  std::vector<double> unit_z(zd);
  const double zn = std::sqrt(static_cast<double>(z.norm_sq()));
  for (int i = 0; i < d; ++i) unit_z[static_cast<std::size_t>(i)] = z[i] / zn;
  q.push_back(unit_z);

  std::vector<double> frame;
  frame.reserve(zd * (zd - 1));
  for (int i = 0; i < d; ++i) {
    if (i == drop) continue;
    std::vector<double> w(zd, 0.0);
    w[static_cast<std::size_t>(i)] = 1.0;
    // Two passes of modified Gram-Schmidt.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qk : q) {
        const double c = std::inner_product(w.begin(), w.end(), qk.begin(), 0.0);
        for (std::size_t a = 0; a < zd; ++a) w[a] -= c * qk[a];
      }
    }
    const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    for (auto& x : w) x /= norm;
    q.push_back(w);
    frame.insert(frame.end(), w.begin(), w.end());
  }
  return frame;
}

Basis::Basis(int n, int d) {
  if (n < 1) throw ConfigError("basis truncation n must be >= 1, got " + std::to_string(n));
  if (d < 2) throw ConfigError("basis dimension d must be >= 2, got " + std::to_string(d));
  modes_ = mode_set(d, n);
  const auto zd = static_cast<std::size_t>(d);
  frames_.reserve(modes_->size() * zd * (zd - 1));
  indices_.reserve(modes_->size() * (2 * zd - 2));
  for (std::size_t k = 0; k < modes_->size(); ++k) {
    const auto frame = hyperplane_frame((*modes_)[k]);
    frames_.insert(frames_.end(), frame.begin(), frame.end());
    for (int j = 1; j <= 2 * d - 2; ++j) {
      const auto r = static_cast<std::size_t>((j - 1) % (d - 1));
      BasisIndex idx;
      idx.z = (*modes_)[k];
      idx.j = j;
      idx.e_vec.assign(frame.begin() + static_cast<std::ptrdiff_t>(r * zd),
                       frame.begin() + static_cast<std::ptrdiff_t>((r + 1) * zd));
      idx.mode = k;
      indices_.push_back(std::move(idx));
    }
  }
}

std::span<const double> Basis::hyperplane(std::size_t mode) const {
  const auto zd = static_cast<std::size_t>(dim());
  return std::span<const double>(frames_).subspan(mode * zd * (zd - 1), zd * (zd - 1));
}

Basis make_basis(int n, int d) { return Basis(n, d); }

// ---------------------------------------------------------------------------
// RawModes / SpectralField

RawModes::RawModes(int d, int n) : RawModes(mode_set(d, n)) {}

RawModes::RawModes(std::shared_ptr<const ModeSet> modes)
    : modes_(std::move(modes)),
      coeffs_(modes_->size() * static_cast<std::size_t>(modes_->dim())) {}

SpectralField::SpectralField(int d, int n) : raw_(d, n) {}

SpectralField SpectralField::from_raw_checked(RawModes raw, double tolerance) {
  const int d = raw.dim();
  for (std::size_t k = 0; k < raw.modes().size(); ++k) {
    const auto& z = raw.modes()[k];
    cplx div{};
    double mag = 0.0;
    for (int i = 0; i < d; ++i) {
      div += static_cast<double>(z[i]) * raw.at(k, i);
      mag += std::norm(raw.at(k, i));
    }
    const double scale = std::max(1.0, std::sqrt(mag * static_cast<double>(z.norm_sq())));
    if (std::abs(div) > tolerance * scale) {
      throw DomainError("coefficients are not divergence-free at mode " + std::to_string(k) +
                        " (|z.v| = " + std::to_string(std::abs(div)) + ")");
    }
  }
  return SpectralField(std::move(raw));
}

namespace {

void require_same_modes(const SpectralField& a, const SpectralField& b) {
  if (a.dim() != b.dim() || a.order() != b.order()) {
    throw DimensionError("fields live on different mode sets");
  }
}

}  // namespace

SpectralField SpectralField::operator+(const SpectralField& other) const {
  require_same_modes(*this, other);
  RawModes out(raw_.mode_set_ptr());
  for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] = coeffs()[i] + other.coeffs()[i];
  return SpectralField(std::move(out));
}

SpectralField SpectralField::operator-(const SpectralField& other) const {
  require_same_modes(*this, other);
  RawModes out(raw_.mode_set_ptr());
  for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] = coeffs()[i] - other.coeffs()[i];
  return SpectralField(std::move(out));
}

SpectralField SpectralField::operator*(double s) const {
  RawModes out(raw_.mode_set_ptr());
  for (std::size_t i = 0; i < out.coeffs().size(); ++i) out.coeffs()[i] = coeffs()[i] * s;
  return SpectralField(std::move(out));
}

std::size_t GridVectorField::points() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(M);
  return n;
}

std::size_t GridTensorField::points() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(M);
  return n;
}

int quadrature_resolution(int n) { return std::max(2 * (2 * n + 1), 32); }

// ---------------------------------------------------------------------------
// Coordinates

std::vector<double> basis_coordinates(const SpectralField& field, const Basis& basis) {
  if (field.dim() != basis.dim()) throw DimensionError("field and basis dimensions differ");
  if (field.order() > basis.order()) {
    throw DimensionError("field order " + std::to_string(field.order()) +
                         " exceeds basis truncation " + std::to_string(basis.order()));
  }
  const int d = basis.dim();
  const auto zd = static_cast<std::size_t>(d);
  std::vector<double> coords(basis.size(), 0.0);
  for (std::size_t k = 0; k < field.modes().size(); ++k) {
    const auto hit = basis.modes().find(field.modes()[k]);
    const std::size_t m = hit->index;
    const auto frame = basis.hyperplane(m);
    for (int r = 0; r < d - 1; ++r) {
      cplx s{};
      for (std::size_t i = 0; i < zd; ++i) s += field.at(k, static_cast<int>(i)) * frame[static_cast<std::size_t>(r) * zd + i];
      coords[basis.index_of(m, r + 1)] = std::numbers::sqrt2 * s.real();
      coords[basis.index_of(m, d + r)] = -std::numbers::sqrt2 * s.imag();
    }
  }
  return coords;
}

SpectralField field_from_coordinates(std::span<const double> coords, const Basis& basis) {
  if (coords.size() != basis.size()) {
    throw DimensionError("coordinate vector has " + std::to_string(coords.size()) +
                         " entries, basis has " + std::to_string(basis.size()));
  }
  const int d = basis.dim();
  const auto zd = static_cast<std::size_t>(d);
  RawModes raw(basis.mode_set_ptr());
  for (std::size_t m = 0; m < basis.modes().size(); ++m) {
    const auto frame = basis.hyperplane(m);
    for (int r = 0; r < d - 1; ++r) {
      const cplx w = cplx(coords[basis.index_of(m, r + 1)], -coords[basis.index_of(m, d + r)]) /
                     std::numbers::sqrt2;
      for (std::size_t i = 0; i < zd; ++i) raw.at(m, static_cast<int>(i)) += w * frame[static_cast<std::size_t>(r) * zd + i];
    }
  }
  return SpectralField(std::move(raw));
}

SpectralField basis_function(const Basis& basis, std::size_t k) {
  std::vector<double> coords(basis.size(), 0.0);
  coords.at(k) = 1.0;
  return field_from_coordinates(coords, basis);
}

// ---------------------------------------------------------------------------
// Grids

GridVectorField to_grid(const RawModes& raw, int M) {
  FourierGrid grid(raw.mode_set_ptr(), M);
  GridVectorField out{raw.dim(), M, {}};
  out.values.resize(static_cast<std::size_t>(raw.dim()) * grid.points());
  const auto stride = static_cast<std::size_t>(raw.dim());
  for (int i = 0; i < raw.dim(); ++i) {
    grid.synthesize(raw.coeffs().subspan(static_cast<std::size_t>(i)), stride,
                    std::span<double>(out.values).subspan(static_cast<std::size_t>(i) * grid.points(), grid.points()));
  }
  return out;
}

GridVectorField to_grid(const SpectralField& field, int M) { return to_grid(field.raw(), M); }

RawModes from_grid(const GridVectorField& grid, int n) {
  if (grid.M < 2 * n + 1) {
    throw AliasingError("grid resolution " + std::to_string(grid.M) +
                        " cannot resolve modes of order " + std::to_string(n));
  }
  RawModes raw(grid.d, n);
  FourierGrid fg(raw.mode_set_ptr(), grid.M);
  const auto stride = static_cast<std::size_t>(grid.d);
  for (int i = 0; i < grid.d; ++i) {
    fg.analyze(std::span<const double>(grid.values).subspan(static_cast<std::size_t>(i) * fg.points(), fg.points()),
               raw.coeffs().subspan(static_cast<std::size_t>(i)), stride);
  }
  return raw;
}

// ---------------------------------------------------------------------------
// Projections and inner products

SpectralField project_div_free(const RawModes& raw) {
  RawModes out(raw.mode_set_ptr());
  const int d = raw.dim();
  for (std::size_t k = 0; k < raw.modes().size(); ++k) {
    const auto& z = raw.modes()[k];
    cplx dot{};
    for (int i = 0; i < d; ++i) dot += static_cast<double>(z[i]) * raw.at(k, i);
    const cplx c = dot / static_cast<double>(z.norm_sq());
    for (int i = 0; i < d; ++i) out.at(k, i) = raw.at(k, i) - c * static_cast<double>(z[i]);
  }
  return SpectralField(std::move(out));
}

SpectralField project_Pn(const SpectralField& field, int n) {
  if (n < 0) throw ConfigError("projection order must be >= 0");
  RawModes out(field.dim(), n);
  for (std::size_t k = 0; k < out.modes().size(); ++k) {
    const auto hit = field.modes().find(out.modes()[k]);
    if (!hit) continue;
    for (int i = 0; i < field.dim(); ++i) out.at(k, i) = field.at(hit->index, i);
  }
  return SpectralField(std::move(out));
}

double inner_product(const SpectralField& u, const SpectralField& v) {
  if (u.dim() != v.dim()) throw DimensionError("inner product of fields with different d");
  const SpectralField& small = u.order() <= v.order() ? u : v;
  const SpectralField& large = u.order() <= v.order() ? v : u;
  double sum = 0.0;
  for (std::size_t k = 0; k < small.modes().size(); ++k) {
    const std::size_t m = large.modes().find(small.modes()[k])->index;
    for (int i = 0; i < u.dim(); ++i) sum += (small.at(k, i) * std::conj(large.at(m, i))).real();
  }
  return 2.0 * sum;
}

namespace {

double weighted_sum_sq(const SpectralField& f, int power) {
  double sum = 0.0;
  for (std::size_t k = 0; k < f.modes().size(); ++k) {
    double mag = 0.0;
    for (int i = 0; i < f.dim(); ++i) mag += std::norm(f.at(k, i));
    sum += std::pow(f.modes().laplacian_symbol(k), power) * mag;
  }
  return 2.0 * sum;
}

// Mean over grid points of |w(x)|^p, where w has `comps` components stored
// component-major.
double lp_mean(std::span<const double> values, std::size_t comps, std::size_t points, double p) {
  double sum = 0.0;
  for (std::size_t x = 0; x < points; ++x) {
    double s = 0.0;
    for (std::size_t c = 0; c < comps; ++c) s += values[c * points + x] * values[c * points + x];
    sum += p == 2.0 ? s : std::pow(s, 0.5 * p);
  }
  return sum / static_cast<double>(points);
}

void require_p(double p) {
  if (!(p >= 1.0)) throw DomainError("L_p exponent must satisfy p >= 1, got " + std::to_string(p));
}

}  // namespace

double l2_norm_sq(const SpectralField& field) { return weighted_sum_sq(field, 0); }
double gradient_l2_norm_sq(const SpectralField& field) { return weighted_sum_sq(field, 1); }
double laplacian_l2_norm_sq(const SpectralField& field) { return weighted_sum_sq(field, 2); }

double sobolev_norm(const SpectralField& field, double p, double alpha) {
  require_p(p);
  RawModes scaled(field.mode_set_ptr());
  for (std::size_t k = 0; k < field.modes().size(); ++k) {
    const double w = std::pow(1.0 + field.modes().laplacian_symbol(k), 0.5 * alpha);
    for (int i = 0; i < field.dim(); ++i) scaled.at(k, i) = w * field.at(k, i);
  }
  const auto grid = to_grid(scaled, quadrature_resolution(field.order()));
  const double mean = lp_mean(grid.values, static_cast<std::size_t>(grid.d), grid.points(), p);
  return std::pow(mean, 1.0 / p);
}

double gradient_lp_norm(const SpectralField& field, double p) {
  require_p(p);
  const int d = field.dim();
  const int M = quadrature_resolution(field.order());
  FourierGrid grid(field.mode_set_ptr(), M);
  const std::size_t pts = grid.points();
  std::vector<double> values(static_cast<std::size_t>(d * d) * pts);
  std::vector<cplx> deriv(field.modes().size());
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      for (std::size_t m = 0; m < field.modes().size(); ++m) {
        deriv[m] = cplx(0.0, kTwoPi * field.modes()[m][k]) * field.at(m, i);
      }
      grid.synthesize(deriv, 1, std::span<double>(values).subspan(static_cast<std::size_t>(i * d + k) * pts, pts));
    }
  }
  return std::pow(lp_mean(values, static_cast<std::size_t>(d * d), pts, p), 1.0 / p);
}

double laplacian_lp_norm(const SpectralField& field, double p) {
  require_p(p);
  RawModes lap(field.mode_set_ptr());
  for (std::size_t k = 0; k < field.modes().size(); ++k) {
    for (int i = 0; i < field.dim(); ++i) lap.at(k, i) = -field.modes().laplacian_symbol(k) * field.at(k, i);
  }
  const auto grid = to_grid(lap, quadrature_resolution(field.order()));
  return std::pow(lp_mean(grid.values, static_cast<std::size_t>(grid.d), grid.points(), p), 1.0 / p);
}

double divergence_defect(const SpectralField& field) {
  double worst = 0.0;
  for (std::size_t k = 0; k < field.modes().size(); ++k) {
    cplx div{};
    for (int i = 0; i < field.dim(); ++i) div += static_cast<double>(field.modes()[k][i]) * field.at(k, i);
    worst = std::max(worst, std::abs(div));
  }
  return worst;
}

double conjugate_symmetry_defect(const SpectralField& field) {
  const int d = field.dim();
  const int M = quadrature_resolution(field.order());
  const auto grid = to_grid(field, M);
  const std::size_t pts = grid.points();
  auto flat = [&](const WaveVector& z, int sign) {
    std::size_t idx = 0;
    for (int c : z.components()) idx = idx * static_cast<std::size_t>(M) + static_cast<std::size_t>(((sign * c) % M + M) % M);
    return idx;
  };
  double sym = 0.0;
  double fid = 0.0;
  for (int i = 0; i < d; ++i) {
    const auto spec = complex_dft(std::span<const double>(grid.values).subspan(static_cast<std::size_t>(i) * pts, pts), d, M);
    for (std::size_t k = 0; k < field.modes().size(); ++k) {
      const cplx plus = spec[flat(field.modes()[k], 1)];
      const cplx minus = spec[flat(field.modes()[k], -1)];
      sym = std::max(sym, std::abs(minus - std::conj(plus)));
      fid = std::max(fid, std::abs(plus - field.at(k, i)));
    }
  }
  return sym + fid;
}

}  // namespace splf
