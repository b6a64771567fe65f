#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splf/integrator.hpp"

namespace splf {

using Ensemble = std::vector<TrajectoryRecord>;
using PairedRecord = std::pair<TrajectoryRecord, TrajectoryRecord>;

/// E[||X_T||^2 + 2 int <e,tau>] against E||X_0||^2 + tr(Gamma P_n) T.
struct EnergyBalanceReport {
  double lhs_mean = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double initial_energy = 0.0;   // E||X_0||^2, exact
  double noise_injection = 0.0;  // tr(Gamma P_n) T
  double z_score = 0.0;
  std::size_t n_paths = 0;
  std::size_t n_diverged = 0;

  // Mean of the per-path residual ||X_T||^2 + 2 int <e,tau> - ||X_0||^2 - tr(Gamma P_n) T;
  // the initial-state sampling error cancels path by path.
  double residual = 0.0;
  double residual_stderr = 0.0;

  // Filled by the dt/2 control run.
  bool has_control = false;
  double residual_half = 0.0;
  double shrink_ratio = 0.0;    // residual / residual_half
  double bias_allowance = 0.0;  // Richardson estimate of the O(dt) bias at dt
  double tolerance = 0.0;       // 3 stderr + bias_allowance
  bool pass = false;
};

/// Shrink ratio window for first-order bias under dt halving.
inline constexpr double kShrinkLow = 1.5;
inline constexpr double kShrinkHigh = 2.5;

EnergyBalanceReport energy_balance(const Ensemble& ensemble, const SimConfig& config);

/// Adds the dt/2 control to `report` and sets the verdict.
void apply_control(EnergyBalanceReport& report, const EnergyBalanceReport& half);

/// Simulates config and its dt/2 twin (same seed, hence common initial data)
/// and compares. `ensemble_out` receives the dt run when given.
EnergyBalanceReport energy_check(const SimConfig& config, Ensemble* ensemble_out = nullptr);

/// Deterministic balance ||X_T||^2 + 2 int <e,tau> - ||X_0||^2 of one path.
double energy_residual(const TrajectoryRecord& rec);

struct DeterministicBalance {
  double residual = 0.0;
  double residual_half = 0.0;
  double shrink_ratio = 0.0;
  bool pass = false;
};

/// Zero-noise per-path balance at dt and dt/2 (path 0).
DeterministicBalance deterministic_balance(const SimConfig& config);

struct AprioriReport {
  std::vector<double> horizons;
  std::vector<double> sup_l2;      // E sup_{t<=h} ||X_t||^2
  std::vector<double> int_vp;      // E int_0^h ||X_t||_{p,1}^p
  std::vector<double> int_vp_pow;  // E (int_0^h ||X_t||_{p,1}^p)^delta
  double delta = 0.0;
  double slope = 0.0;              // affine fit of sup_l2 + int_vp against h
  double intercept = 0.0;
  double growth_exponent = 0.0;    // log-log fit; <= 1 means at most affine
  bool affine = false;
  std::size_t n_paths = 0;
};

/// Growth exponent allowed by the affine check.
inline constexpr double kMaxGrowthExponent = 1.05;

/// Statistics at each horizon, taken by truncating the records (which must
/// reach the largest horizon). Integrals use left-endpoint sums over records.
AprioriReport apriori_check(const Ensemble& ensemble, const SimConfig& config, const std::vector<double>& horizons);

struct QuadraticVariation {
  std::vector<double> times;
  std::vector<double> values;  // <M>_t
  std::vector<double> bound;   // max gamma * int ||X||^2
};

QuadraticVariation quadratic_variation(const TrajectoryRecord& rec, const CovarianceSpectrum& spec, const Basis& basis);

struct DissipationFunctional {
  std::vector<double> times;
  std::vector<double> values;  // J_t
  double integral = 0.0;       // left-endpoint int_0^T J_t dt
  double lambda = 0.0;
};

/// J_t at one state in basis coordinates.
double dissipation_value(std::span<const double> coords, const Basis& basis, double p, double lambda_exp);

DissipationFunctional dissipation_functional(const TrajectoryRecord& rec, const SimConfig& config);

/// ||X_a - X_b||_2^2 at record r.
double separation_sq(const TrajectoryRecord& a, const TrajectoryRecord& b, std::size_t r);

struct GronwallReport {
  std::vector<double> times;          // of the last validation pair
  std::vector<double> separation_sq;  // ||Z_t||_2^2, last validation pair
  std::vector<double> envelope;       // ||Z_0||^2 exp(C int ||grad X||_p^{2p/(2p-d)}), last pair
  double exponent = 0.0;              // 2p/(2p-d)
  double fitted_constant = 0.0;       // C from calibration
  double margin = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_checked = 0;          // recorded times compared
  std::size_t violations = 0;
  std::size_t n_diverged = 0;
  double max_exact_separation = 0.0;  // pairs with Z_0 = 0
  bool in_theorem = false;            // p >= 1 + d/2
};

/// Smallest C >= 0 with ||Z_t||^2 <= ||Z_0||^2 exp(C I_t) at every recorded time.
double fit_gronwall_constant(const std::vector<PairedRecord>& calibration);

/// Counts envelope violations with constant C (1 + margin).
GronwallReport gronwall_check(const std::vector<PairedRecord>& pairs, const SimConfig& config,
                              double fitted_constant, double margin);

struct UniquenessOptions {
  double eps = 1e-3;
  int calibration_pairs = 50;
  double margin = 0.5;
};

/// Paired runs with init_b = init_a + eps psi_{z,1} on the lowest mode.
/// Calibrates on seed + 1, validates on config.n_paths pairs of config.seed.
GronwallReport uniqueness_check(const SimConfig& config, const UniquenessOptions& options);

std::vector<PairedRecord> simulate_perturbed_pairs(const SimConfig& config, std::uint32_t count, double eps);

struct StructuralDefects {
  double divergence = 0.0;
  double conjugate_symmetry = 0.0;
  std::size_t states = 0;
};

/// Max |z . X_z| and conjugate-symmetry defect over every recorded state.
StructuralDefects structural_defects(const Ensemble& ensemble, const Basis& basis);

}  // namespace splf
