#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "splf/spectral_core.hpp"

namespace splf {

/// Real <-> half-space spectral transforms on the M^d grid for one mode set.
///
/// Owns its FFTW plans and buffers; not safe to share between concurrent
/// callers, but distinct instances may run in parallel.
class FourierGrid {
 public:
  FourierGrid(std::shared_ptr<const ModeSet> modes, int M);
  ~FourierGrid();
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;
  FourierGrid(FourierGrid&&) noexcept;
  FourierGrid& operator=(FourierGrid&&) noexcept;

  int resolution() const { return M_; }
  std::size_t points() const { return points_; }
  const ModeSet& modes() const { return *modes_; }

  /// out[x] = sum_z c_z exp(2 pi i z.x) over all z = +-(canonical modes).
  /// coeffs[k * stride] is the coefficient of canonical mode k.
  void synthesize(std::span<const cplx> coeffs, std::size_t stride, std::span<double> out);

  /// coeffs[k * stride] = grid-quadrature Fourier coefficient of mode k.
  void analyze(std::span<const double> in, std::span<cplx> coeffs, std::size_t stride);

 private:
  struct Plans;
  std::shared_ptr<const ModeSet> modes_;
  int M_;
  std::size_t points_;
  std::size_t spectral_size_;
  std::vector<long> pos_index_;  // r2c slot holding c_z, or -1
  std::vector<long> neg_index_;  // r2c slot holding conj(c_z) at -z, or -1
  std::unique_ptr<Plans> plans_;
};

/// Full complex DFT of real samples on the M^d grid, normalized by M^d and
/// stored row-major with every axis wrapped to [0, M).
std::vector<cplx> complex_dft(std::span<const double> samples, int d, int M);

}  // namespace splf
