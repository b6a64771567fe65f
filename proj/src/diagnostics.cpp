#include "splf/diagnostics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>

#include "splf/errors.hpp"
#include "splf/exponents.hpp"

namespace splf {

namespace {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& x) {
  MeanStderr out;
  if (x.empty()) return out;
  double sum = 0.0;
  for (double v : x) sum += v;
  out.mean = sum / static_cast<double>(x.size());
  if (x.size() < 2) return out;
  double ss = 0.0;
  for (double v : x) ss += (v - out.mean) * (v - out.mean);
  out.stderr_ = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return out;
}

void check_reaches(const TrajectoryRecord& rec, double horizon) {
  if (rec.times.empty() || rec.times.back() < horizon * (1.0 - 1e-12)) {
    throw Error("record of path " + std::to_string(rec.path_index) + " stops before t = " + std::to_string(horizon));
  }
}

}  // namespace

double energy_residual(const TrajectoryRecord& rec) {
  if (rec.times.empty()) throw Error("empty trajectory record");
  return rec.norm_l2_sq.back() + 2.0 * rec.int_diss.back() - rec.norm_l2_sq.front();
}

EnergyBalanceReport energy_balance(const Ensemble& ensemble, const SimConfig& config) {
  EnergyBalanceReport rep;
  const Basis basis(config.n, config.d);
  const double T = config.steps() * config.effective_dt();
  rep.initial_energy = initial_moment(config.init, basis, 0);
  rep.noise_injection = trace_Pn(config.gamma, config.n, config.d) * T;
  rep.rhs = rep.initial_energy + rep.noise_injection;

  std::vector<double> lhs;
  std::vector<double> residual;
  for (const auto& rec : ensemble) {
    if (rec.diverged) {
      ++rep.n_diverged;
      continue;
    }
    check_reaches(rec, T);
    const double l = rec.norm_l2_sq.back() + 2.0 * rec.int_diss.back();
    lhs.push_back(l);
    residual.push_back(l - rec.norm_l2_sq.front() - rep.noise_injection);
  }
  rep.n_paths = lhs.size();
  if (rep.n_paths < 2) {
    throw Error("energy balance refused: " + std::to_string(rep.n_paths) + " non-diverged paths (need >= 2)");
  }
  const auto l = mean_stderr(lhs);
  const auto r = mean_stderr(residual);
  rep.lhs_mean = l.mean;
  rep.lhs_stderr = l.stderr_;
  rep.residual = r.mean;
  rep.residual_stderr = r.stderr_;
  const double diff = rep.lhs_mean - rep.rhs;
  if (rep.lhs_stderr > 0.0) {
    rep.z_score = diff / rep.lhs_stderr;
  } else {
    rep.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return rep;
}

void apply_control(EnergyBalanceReport& report, const EnergyBalanceReport& half) {
  report.has_control = true;
  report.residual_half = half.residual;
  report.shrink_ratio = report.residual / half.residual;
  // bias(dt) ~ 2 (r(dt) - r(dt/2)) for a first-order bias.
  report.bias_allowance = 2.0 * std::abs(report.residual - half.residual);
  report.tolerance = 3.0 * report.lhs_stderr + report.bias_allowance;
  const bool ratio_ok = report.shrink_ratio >= kShrinkLow && report.shrink_ratio <= kShrinkHigh;
  report.pass = std::abs(report.lhs_mean - report.rhs) <= report.tolerance && ratio_ok;
}

EnergyBalanceReport energy_check(const SimConfig& config, Ensemble* ensemble_out) {
  config.validate();
  const auto paths = static_cast<std::uint32_t>(config.n_paths);
  auto full = simulate_ensemble(config, 0, paths);
  auto rep = energy_balance(full, config);

  SimConfig half_cfg = config;
  half_cfg.dt = config.effective_dt() / 2.0;
  half_cfg.record_every = config.record_every * 2;
  const auto half = energy_balance(simulate_ensemble(half_cfg, 0, paths), half_cfg);
  apply_control(rep, half);
  if (ensemble_out) *ensemble_out = std::move(full);
  return rep;
}

DeterministicBalance deterministic_balance(const SimConfig& config) {
  SimConfig cfg = config;
  cfg.gamma = CovarianceSpectrum::zero();
  cfg.validate();
  DeterministicBalance out;
  out.residual = energy_residual(simulate(cfg, 0));
  cfg.dt = config.effective_dt() / 2.0;
  out.residual_half = energy_residual(simulate(cfg, 0));
  out.shrink_ratio = out.residual / out.residual_half;
  out.pass = out.shrink_ratio >= kShrinkLow && out.shrink_ratio <= kShrinkHigh;
  return out;
}

AprioriReport apriori_check(const Ensemble& ensemble, const SimConfig& config, const std::vector<double>& horizons) {
  AprioriReport rep;
  rep.horizons = horizons;
  rep.delta = delta(config.p);
  const std::size_t H = horizons.size();
  rep.sup_l2.assign(H, 0.0);
  rep.int_vp.assign(H, 0.0);
  rep.int_vp_pow.assign(H, 0.0);
  const double hmax = H ? *std::max_element(horizons.begin(), horizons.end()) : 0.0;

  for (const auto& rec : ensemble) {
    if (rec.diverged) continue;
    check_reaches(rec, hmax);
    ++rep.n_paths;
    for (std::size_t h = 0; h < H; ++h) {
      const double limit = horizons[h] * (1.0 + 1e-12);
      double sup = 0.0;
      double integral = 0.0;
      for (std::size_t r = 0; r < rec.size() && rec.times[r] <= limit; ++r) {
        sup = std::max(sup, rec.norm_l2_sq[r]);
        if (r + 1 < rec.size() && rec.times[r + 1] <= limit) {
          integral += (rec.times[r + 1] - rec.times[r]) * rec.norm_vp1_p[r];
        }
      }
      rep.sup_l2[h] += sup;
      rep.int_vp[h] += integral;
      rep.int_vp_pow[h] += std::pow(integral, rep.delta);
    }
  }
  if (rep.n_paths == 0) return rep;
  const double inv = 1.0 / static_cast<double>(rep.n_paths);
  for (std::size_t h = 0; h < H; ++h) {
    rep.sup_l2[h] *= inv;
    rep.int_vp[h] *= inv;
    rep.int_vp_pow[h] *= inv;
  }

  // Least squares for Q(h) = a + b h and log Q = c + k log h.
  if (H >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, lx = 0, ly = 0, lxx = 0, lxy = 0;
    bool positive = true;
    for (std::size_t h = 0; h < H; ++h) {
      const double q = rep.sup_l2[h] + rep.int_vp[h];
      sx += horizons[h];
      sy += q;
      sxx += horizons[h] * horizons[h];
      sxy += horizons[h] * q;
      if (!(q > 0.0)) {
        positive = false;
        continue;
      }
      const double a = std::log(horizons[h]);
      const double b = std::log(q);
      lx += a;
      ly += b;
      lxx += a * a;
      lxy += a * b;
    }
    const double n = static_cast<double>(H);
    const double den = n * sxx - sx * sx;
    rep.slope = (n * sxy - sx * sy) / den;
    rep.intercept = (sy - rep.slope * sx) / n;
    rep.growth_exponent = positive ? (n * lxy - lx * ly) / (n * lxx - lx * lx) : 0.0;
  }
  rep.affine = rep.growth_exponent <= kMaxGrowthExponent;
  return rep;
}

QuadraticVariation quadratic_variation(const TrajectoryRecord& rec, const CovarianceSpectrum& spec, const Basis& basis) {
  if (rec.dim != basis.size()) throw DimensionError("record and basis sizes differ");
  const auto gamma = spec.on_basis(basis);
  const double gmax = gamma.empty() ? 0.0 : *std::max_element(gamma.begin(), gamma.end());
  QuadraticVariation qv;
  qv.times = rec.times;
  qv.values.assign(rec.size(), 0.0);
  qv.bound.assign(rec.size(), 0.0);
  for (std::size_t r = 0; r + 1 < rec.size(); ++r) {
    const auto x = rec.state(r);
    double gxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) gxx += gamma[k] * x[k] * x[k];
    const double h = rec.times[r + 1] - rec.times[r];
    qv.values[r + 1] = qv.values[r] + h * gxx;
    qv.bound[r + 1] = qv.bound[r] + h * gmax * rec.norm_l2_sq[r];
  }
  return qv;
}

double dissipation_value(std::span<const double> coords, const Basis& basis, double p, double lambda_exp) {
  double grad_sq = 0.0;
  double lap_sq = 0.0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const double s = basis.laplacian_symbol(k);
    grad_sq += s * coords[k] * coords[k];
    lap_sq += s * s * coords[k] * coords[k];
  }
  if (p >= 2.0) return lap_sq / std::pow(1.0 + grad_sq, lambda_exp);
  const auto field = field_from_coordinates(coords, basis);
  const double lap_p = laplacian_lp_norm(field, p);
  const double grad_p = gradient_lp_norm(field, p);
  return lap_p * lap_p / (std::pow(1.0 + grad_sq, lambda_exp) * std::pow(1.0 + grad_p, 2.0 - p));
}

DissipationFunctional dissipation_functional(const TrajectoryRecord& rec, const SimConfig& config) {
  const Basis basis(config.n, config.d);
  if (rec.dim != basis.size()) throw DimensionError("record and basis sizes differ");
  DissipationFunctional out;
  out.lambda = lambda(config.p, config.d);
  out.times = rec.times;
  out.values.resize(rec.size());
  for (std::size_t r = 0; r < rec.size(); ++r) out.values[r] = dissipation_value(rec.state(r), basis, config.p, out.lambda);
  for (std::size_t r = 0; r + 1 < rec.size(); ++r) out.integral += (rec.times[r + 1] - rec.times[r]) * out.values[r];
  return out;
}

double separation_sq(const TrajectoryRecord& a, const TrajectoryRecord& b, std::size_t r) {
  const auto x = a.state(r);
  const auto y = b.state(r);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return s;
}

namespace {

void require_paired(const PairedRecord& pr) {
  if (pr.first.size() != pr.second.size() || pr.first.dim != pr.second.dim ||
      pr.first.path_index != pr.second.path_index) {
    throw ConfigError("gronwall check needs trajectories paired on the same path and time grid");
  }
}

}  // namespace

double fit_gronwall_constant(const std::vector<PairedRecord>& calibration) {
  double c = 0.0;
  for (const auto& pr : calibration) {
    require_paired(pr);
    const auto& [a, b] = pr;
    if (a.diverged || b.diverged || a.size() == 0) continue;
    const double z0 = separation_sq(a, b, 0);
    if (!(z0 > 0.0)) continue;
    for (std::size_t r = 1; r < a.size(); ++r) {
      const double I = a.int_grad_pow[r];
      if (!(I > 0.0)) continue;
      c = std::max(c, std::log(separation_sq(a, b, r) / z0) / I);
    }
  }
  return c;
}

GronwallReport gronwall_check(const std::vector<PairedRecord>& pairs, const SimConfig& config, double fitted_constant,
                              double margin) {
  GronwallReport rep;
  rep.exponent = envelope_exponent(config.p, config.d);
  rep.fitted_constant = fitted_constant;
  rep.margin = margin;
  rep.in_theorem = config.p >= to_double(uniqueness_threshold(config.d));
  const double C = fitted_constant * (1.0 + margin);
  for (const auto& pr : pairs) {
    require_paired(pr);
    const auto& [a, b] = pr;
    if (a.diverged || b.diverged) {
      ++rep.n_diverged;
      continue;
    }
    ++rep.n_pairs;
    rep.times = a.times;
    rep.separation_sq.assign(a.size(), 0.0);
    rep.envelope.assign(a.size(), 0.0);
    const double z0 = a.size() ? separation_sq(a, b, 0) : 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
      const double zs = separation_sq(a, b, r);
      const double env = z0 * std::exp(C * a.int_grad_pow[r]);
      rep.separation_sq[r] = zs;
      rep.envelope[r] = env;
      if (z0 == 0.0) {
        rep.max_exact_separation = std::max(rep.max_exact_separation, std::sqrt(zs));
        continue;
      }
      ++rep.n_checked;
      if (!(zs <= env)) ++rep.violations;
    }
  }
  return rep;
}

std::vector<PairedRecord> simulate_perturbed_pairs(const SimConfig& config, std::uint32_t count, double eps) {
  config.validate();
  std::vector<PairedRecord> out(count);
  std::exception_ptr error;
  const int threads = std::min<int>(worker_count(), std::max<std::uint32_t>(count, 1));
#pragma omp parallel num_threads(threads)
  {
    std::unique_ptr<Simulator> sim;
    try {
      sim = std::make_unique<Simulator>(config);
    } catch (...) {
#pragma omp critical(splf_pairs_error)
      if (!error) error = std::current_exception();
    }
#pragma omp for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(count); ++i) {
      if (!sim) continue;
      try {
        const auto path = static_cast<std::uint32_t>(i);
        const auto a = sim->initial_state(path);
        auto b = a;
        b[sim->basis().index_of(0, 1)] += eps;
        out[static_cast<std::size_t>(i)] = sim->simulate_paired(path, a, b);
      } catch (...) {
#pragma omp critical(splf_pairs_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

GronwallReport uniqueness_check(const SimConfig& config, const UniquenessOptions& options) {
  if (options.calibration_pairs < 1) throw ConfigError("uniqueness.calibration_paths: must be >= 1");
  if (!(options.margin >= 0.0)) throw ConfigError("uniqueness.margin: must be >= 0");
  if (!std::isfinite(options.eps)) throw ConfigError("eps: must be finite");
  SimConfig calibration = config;
  calibration.seed = config.seed + 1;
  const double c = fit_gronwall_constant(
      simulate_perturbed_pairs(calibration, static_cast<std::uint32_t>(options.calibration_pairs), options.eps));
  const auto validation = simulate_perturbed_pairs(config, static_cast<std::uint32_t>(config.n_paths), options.eps);
  return gronwall_check(validation, config, c, options.margin);
}

StructuralDefects structural_defects(const Ensemble& ensemble, const Basis& basis) {
  StructuralDefects out;
  for (const auto& rec : ensemble) {
    if (rec.dim != basis.size()) throw DimensionError("record and basis sizes differ");
    for (std::size_t r = 0; r < rec.size(); ++r) {
      const auto field = field_from_coordinates(rec.state(r), basis);
      out.divergence = std::max(out.divergence, divergence_defect(field));
      out.conjugate_symmetry = std::max(out.conjugate_symmetry, conjugate_symmetry_defect(field));
      ++out.states;
    }
  }
  return out;
}

}  // namespace splf
