#pragma once

// Direct trigonometric-sum evaluation of basis expansions, independent of the
// FFT path. Slow; only for small test problems.

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "splf/spectral_core.hpp"

namespace oracle {

struct Point {
  std::vector<double> v;  // d
  std::vector<double> g;  // g[i*d + k] = d_k v_i
};

inline Point evaluate(std::span<const double> coords, const splf::Basis& basis, std::span<const double> x) {
  const int d = basis.dim();
  Point out{std::vector<double>(static_cast<std::size_t>(d), 0.0), std::vector<double>(static_cast<std::size_t>(d * d), 0.0)};
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& idx = basis[k];
    double phase = 0.0;
    for (int i = 0; i < d; ++i) phase += idx.z[i] * x[static_cast<std::size_t>(i)];
    phase *= 2.0 * std::numbers::pi;
    const double val = std::numbers::sqrt2 * (idx.is_cosine() ? std::cos(phase) : std::sin(phase));
    const double dval = std::numbers::sqrt2 * (idx.is_cosine() ? -std::sin(phase) : std::cos(phase));
    for (int i = 0; i < d; ++i) {
      const double e = idx.e_vec[static_cast<std::size_t>(i)];
      out.v[static_cast<std::size_t>(i)] += coords[k] * val * e;
      for (int c = 0; c < d; ++c) {
        out.g[static_cast<std::size_t>(i * d + c)] += coords[k] * dval * e * 2.0 * std::numbers::pi * idx.z[c];
      }
    }
  }
  return out;
}

/// Grid point `flat` of the uniform M^d grid, first axis slowest.
inline std::vector<double> grid_point(std::size_t flat, int d, int M) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    x[static_cast<std::size_t>(i)] = static_cast<double>(flat % static_cast<std::size_t>(M)) / M;
    flat /= static_cast<std::size_t>(M);
  }
  return x;
}

/// Mean over the M^d grid of f(point).
template <class F>
double grid_mean(int d, int M, F&& f) {
  std::size_t pts = 1;
  for (int i = 0; i < d; ++i) pts *= static_cast<std::size_t>(M);
  double s = 0.0;
  for (std::size_t q = 0; q < pts; ++q) s += f(grid_point(q, d, M));
  return s / static_cast<double>(pts);
}

inline std::vector<double> smooth_state(std::size_t size, double scale = 0.3) {
  std::vector<double> x(size);
  for (std::size_t k = 0; k < size; ++k) x[k] = scale * std::sin(1.7 * static_cast<double>(k) + 0.4);
  return x;
}

}  // namespace oracle
