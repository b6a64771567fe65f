#include "splf/fourier_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "splf/errors.hpp"

namespace splf {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct FourierGrid::Plans {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  Plans(int d, int M, std::size_t points, std::size_t spectral_size) {
    std::vector<int> dims(static_cast<std::size_t>(d), M);
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(points);
    spec = fftw_alloc_complex(spectral_size);
    forward = fftw_plan_dft_r2c(d, dims.data(), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r(d, dims.data(), spec, real, FFTW_ESTIMATE);
  }

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
};

FourierGrid::FourierGrid(std::shared_ptr<const ModeSet> modes, int M)
    : modes_(std::move(modes)), M_(M) {
  const int d = modes_->dim();
  const int n = modes_->order();
  if (M < 2 * n + 1) {
    throw AliasingError("grid resolution " + std::to_string(M) +
                        " cannot represent modes of order " + std::to_string(n));
  }
  points_ = 1;
  for (int i = 0; i < d; ++i) points_ *= static_cast<std::size_t>(M);
  const std::size_t last = static_cast<std::size_t>(M / 2 + 1);
  spectral_size_ = points_ / static_cast<std::size_t>(M) * last;

  // Row-major strides of the r2c output array (M, ..., M, M/2+1).
  std::vector<long> stride(static_cast<std::size_t>(d), 1);
  for (int i = d - 2; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i + 1)] * (i + 1 == d - 1 ? static_cast<long>(last) : M);
  }
  auto slot = [&](std::span<const int> z, int sign) {
    long idx = 0;
    for (int i = 0; i < d; ++i) {
      const int zi = sign * z[static_cast<std::size_t>(i)];
      const long wrapped = i == d - 1 ? zi : ((zi % M) + M) % M;
      idx += wrapped * stride[static_cast<std::size_t>(i)];
    }
    return idx;
  };

  pos_index_.assign(modes_->size(), -1);
  neg_index_.assign(modes_->size(), -1);
  for (std::size_t k = 0; k < modes_->size(); ++k) {
    const auto z = (*modes_)[k].components();
    const int z_last = z[static_cast<std::size_t>(d - 1)];
    if (z_last >= 0) pos_index_[k] = slot(z, 1);
    if (z_last <= 0) neg_index_[k] = slot(z, -1);
  }
  plans_ = std::make_unique<Plans>(d, M, points_, spectral_size_);
}

FourierGrid::~FourierGrid() = default;
FourierGrid::FourierGrid(FourierGrid&&) noexcept = default;
FourierGrid& FourierGrid::operator=(FourierGrid&&) noexcept = default;

void FourierGrid::synthesize(std::span<const cplx> coeffs, std::size_t stride,
                             std::span<double> out) {
  auto* spec = reinterpret_cast<cplx*>(plans_->spec);
  std::fill(spec, spec + spectral_size_, cplx{});
  for (std::size_t k = 0; k < pos_index_.size(); ++k) {
    const cplx c = coeffs[k * stride];
    if (pos_index_[k] >= 0) spec[pos_index_[k]] = c;
    if (neg_index_[k] >= 0) spec[neg_index_[k]] = std::conj(c);
  }
  fftw_execute(plans_->backward);
  std::copy(plans_->real, plans_->real + points_, out.begin());
}

void FourierGrid::analyze(std::span<const double> in, std::span<cplx> coeffs, std::size_t stride) {
  std::copy(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(points_), plans_->real);
  fftw_execute(plans_->forward);
  const auto* spec = reinterpret_cast<const cplx*>(plans_->spec);
  const double scale = 1.0 / static_cast<double>(points_);
  for (std::size_t k = 0; k < pos_index_.size(); ++k) {
    coeffs[k * stride] =
        pos_index_[k] >= 0 ? spec[pos_index_[k]] * scale : std::conj(spec[neg_index_[k]]) * scale;
  }
}

std::vector<cplx> complex_dft(std::span<const double> samples, int d, int M) {
  const std::size_t n = samples.size();
  std::vector<int> dims(static_cast<std::size_t>(d), M);
  fftw_complex* buf = nullptr;
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    buf = fftw_alloc_complex(n);
    plan = fftw_plan_dft(d, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = samples[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(plan);
  std::vector<cplx> out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cplx(buf[i][0], buf[i][1]) * scale;
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  return out;
}

}  // namespace splf
