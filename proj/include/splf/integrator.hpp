#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splf/constitutive.hpp"
#include "splf/noise.hpp"
#include "splf/spectral_core.hpp"

namespace splf {

enum class Stepper { euler_maruyama, tamed, semi_implicit };

std::string to_string(Stepper s);
Stepper parse_stepper(const std::string& name);

/// Law of the initial state.
struct InitialCondition {
  enum class Kind { zero, single_mode, gaussian };
  Kind kind = Kind::zero;
  // single_mode: amplitude * psi_{z,j}
  WaveVector z;
  int j = 1;
  double amplitude = 0.0;
  // gaussian: independent coordinates with variance sigma^2 (1 + 4 pi^2 |z|^2)^{-r}
  double sigma = 0.0;
  double r = 0.0;

  static InitialCondition zero() { return {}; }
  static InitialCondition single_mode(WaveVector z, int j, double amplitude);
  static InitialCondition gaussian(double sigma, double r);
};

std::string to_string(InitialCondition::Kind k);

/// Per-coordinate variances of the initial law (zero for deterministic kinds).
std::vector<double> initial_variances(const InitialCondition& init, const Basis& basis);

/// E ||X_0||_{2,alpha}^2 for alpha = 0 (m_0) or 1 (m_1), exact.
double initial_moment(const InitialCondition& init, const Basis& basis, int alpha);

std::vector<double> initial_coordinates(const InitialCondition& init, const Basis& basis,
                                        std::uint64_t seed, std::uint32_t path);

struct SimConfig {
  int d = 2;
  double p = 2.0;
  double nu = 1.0;
  int n = 2;
  double dt = 1e-3;
  double T = 0.1;
  int n_paths = 1;
  std::uint64_t seed = 0;
  Stepper stepper = Stepper::tamed;
  InitialCondition init;
  CovarianceSpectrum gamma;
  int record_every = 1;
  double divergence_ceiling = 1e6;

  FluidParams fluid() const { return FluidParams{p, nu}; }
  /// Number of steps after snapping T to the grid.
  int steps() const;
  /// T / steps() <= dt.
  double effective_dt() const;
  void validate() const;
};

/// Diagnostics sampled along one path. Running integrals use the left
/// endpoint rule of the stepper.
struct TrajectoryRecord {
  std::uint32_t path_index = 0;
  std::size_t dim = 0;  // basis size
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> coords;       // times.size() x dim
  std::vector<double> norm_l2_sq;   // ||X||_2^2
  std::vector<double> norm_vp1_p;   // ||X||_{p,1}^p
  std::vector<double> int_diss;     // int_0^t <e(X), tau(X)> ds
  std::vector<double> int_gamma_xx; // int_0^t <Gamma X, X> ds
  std::vector<double> grad_lp;      // || grad X ||_p
  // int_0^t ||grad X||_p^{2p/(2p-d)} ds; NaN when 2p <= d
  std::vector<double> int_grad_pow;
  bool diverged = false;
  std::string failure;

  std::size_t size() const { return times.size(); }
  std::span<const double> state(std::size_t r) const {
    return std::span<const double>(coords).subspan(r * dim, dim);
  }
};

/// One explicit or semi-implicit step X -> X'. Throws StepFailure on a
/// non-finite drift.
std::vector<double> step(std::span<const double> X, double dt, std::span<const double> dW,
                         DriftEvaluator& evaluator, Stepper stepper);

/// Owns the basis, drift workspace and noise spectrum for one configuration.
/// One instance per thread.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config);

  const SimConfig& config() const { return config_; }
  const Basis& basis() const { return basis_; }
  const std::vector<double>& gamma() const { return gamma_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }

  std::vector<double> initial_state(std::uint32_t path) const;
  std::vector<double> increment(std::uint32_t path, std::uint32_t step_index) const;

  /// Applies the configured stepper given the drift b(X) at X.
  void advance(std::span<double> X, std::span<const double> b, std::span<const double> dW) const;

  TrajectoryRecord simulate(std::uint32_t path);
  TrajectoryRecord simulate_from(std::uint32_t path, std::span<const double> init);
  std::pair<TrajectoryRecord, TrajectoryRecord> simulate_paired(std::uint32_t path,
                                                                std::span<const double> init_a,
                                                                std::span<const double> init_b);

 private:
  struct PathState;
  void record(PathState& s, int k, const DriftEvaluator::Stats& stats);
  std::pair<TrajectoryRecord, TrajectoryRecord> run(std::uint32_t path, std::span<const double> init_a,
                                                    std::span<const double> init_b, bool paired);

  SimConfig config_;
  Basis basis_;
  DriftEvaluator evaluator_;
  std::vector<double> gamma_;
  std::vector<double> implicit_rate_;  // nu 4 pi^2 |z|^2 per coordinate
  double dt_;
  int steps_;
  double grad_exponent_;  // 2p/(2p-d)
};

/// Exponent 2p/(2p-d) of the separation envelope; requires 2p > d.
double envelope_exponent(double p, int d);

TrajectoryRecord simulate(const SimConfig& config, std::uint32_t path);
std::pair<TrajectoryRecord, TrajectoryRecord> simulate_paired(const SimConfig& config, std::uint32_t path,
                                                              std::span<const double> init_a,
                                                              std::span<const double> init_b);

/// Worker count: SPLF_THREADS if set, else the OpenMP default.
int worker_count();

/// Paths first .. first+count-1, in path order regardless of scheduling.
std::vector<TrajectoryRecord> simulate_ensemble(const SimConfig& config, std::uint32_t first, std::uint32_t count);

}  // namespace splf
