#include "splf/integrator.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <cstdlib>
#include <exception>
#include <string>

#include "splf/errors.hpp"

namespace splf {

std::string to_string(Stepper s) {
  switch (s) {
    case Stepper::euler_maruyama: return "euler_maruyama";
    case Stepper::tamed: return "tamed";
    case Stepper::semi_implicit: return "semi_implicit";
  }
  return "unknown";
}

Stepper parse_stepper(const std::string& name) {
  if (name == "euler_maruyama" || name == "em") return Stepper::euler_maruyama;
  if (name == "tamed") return Stepper::tamed;
  if (name == "semi_implicit") return Stepper::semi_implicit;
  throw ConfigError("stepper: unknown value '" + name + "' (expected euler_maruyama, tamed or semi_implicit)");
}

std::string to_string(InitialCondition::Kind k) {
  switch (k) {
    case InitialCondition::Kind::zero: return "zero";
    case InitialCondition::Kind::single_mode: return "single_mode";
    case InitialCondition::Kind::gaussian: return "gaussian";
  }
  return "unknown";
}

InitialCondition InitialCondition::single_mode(WaveVector z, int j, double amplitude) {
  InitialCondition ic;
  ic.kind = Kind::single_mode;
  ic.z = std::move(z);
  ic.j = j;
  ic.amplitude = amplitude;
  return ic;
}

InitialCondition InitialCondition::gaussian(double sigma, double r) {
  InitialCondition ic;
  ic.kind = Kind::gaussian;
  ic.sigma = sigma;
  ic.r = r;
  return ic;
}

namespace {

std::size_t single_mode_slot(const InitialCondition& init, const Basis& basis) {
  if (init.z.dim() != basis.dim()) throw ConfigError("init.z: dimension does not match d");
  const auto hit = basis.modes().find(init.z);
  if (!hit) throw ConfigError("init.z: wave vector is zero or outside the truncation");
  if (init.j < 1 || init.j > basis.per_mode()) throw ConfigError("init.j: out of range 1.." + std::to_string(basis.per_mode()));
  return basis.index_of(hit->index, init.j);
}

double sum_sq(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

std::vector<double> initial_variances(const InitialCondition& init, const Basis& basis) {
  std::vector<double> var(basis.size(), 0.0);
  if (init.kind != InitialCondition::Kind::gaussian) return var;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    var[k] = init.sigma * init.sigma * std::pow(1.0 + basis.laplacian_symbol(k), -init.r);
  }
  return var;
}

double initial_moment(const InitialCondition& init, const Basis& basis, int alpha) {
  double m = 0.0;
  switch (init.kind) {
    case InitialCondition::Kind::zero:
      return 0.0;
    case InitialCondition::Kind::single_mode: {
      const auto k = single_mode_slot(init, basis);
      return init.amplitude * init.amplitude * std::pow(1.0 + basis.laplacian_symbol(k), alpha);
    }
    case InitialCondition::Kind::gaussian: {
      const auto var = initial_variances(init, basis);
      for (std::size_t k = 0; k < var.size(); ++k) m += var[k] * std::pow(1.0 + basis.laplacian_symbol(k), alpha);
      return m;
    }
  }
  return m;
}

std::vector<double> initial_coordinates(const InitialCondition& init, const Basis& basis, std::uint64_t seed,
                                        std::uint32_t path) {
  std::vector<double> x(basis.size(), 0.0);
  switch (init.kind) {
    case InitialCondition::Kind::zero:
      break;
    case InitialCondition::Kind::single_mode:
      x[single_mode_slot(init, basis)] = init.amplitude;
      break;
    case InitialCondition::Kind::gaussian: {
      standard_normals(DrawKey{seed, path, 0, Stream::initial}, x);
      const auto var = initial_variances(init, basis);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] *= std::sqrt(var[k]);
      break;
    }
  }
  return x;
}

int SimConfig::steps() const {
  // Tolerate T/dt landing a hair above an integer.
  return std::max(1, static_cast<int>(std::ceil(T / dt * (1.0 - 1e-12))));
}

double SimConfig::effective_dt() const { return T / steps(); }

void SimConfig::validate() const {
  if (d < 2) throw ConfigError("d: must be >= 2, got " + std::to_string(d));
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p: must be > 1, got " + std::to_string(p));
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu: must be > 0, got " + std::to_string(nu));
  if (n < 1) throw ConfigError("n: must be >= 1, got " + std::to_string(n));
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt: must be > 0, got " + std::to_string(dt));
  if (!(T >= dt) || !std::isfinite(T)) throw ConfigError("T: must be >= dt, got " + std::to_string(T));
  if (n_paths < 1) throw ConfigError("n_paths: must be >= 1, got " + std::to_string(n_paths));
  if (record_every < 1) throw ConfigError("record_every: must be >= 1, got " + std::to_string(record_every));
  if (!(divergence_ceiling > 0.0)) throw ConfigError("divergence_ceiling: must be > 0");
  try {
    splf::validate(gamma, d);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("gamma: ") + e.what());
  }
  switch (init.kind) {
    case InitialCondition::Kind::zero:
      break;
    case InitialCondition::Kind::single_mode:
      single_mode_slot(init, make_basis(n, d));
      if (!std::isfinite(init.amplitude)) throw ConfigError("init.amplitude: not finite");
      break;
    case InitialCondition::Kind::gaussian:
      if (!(init.sigma >= 0.0) || !std::isfinite(init.sigma)) throw ConfigError("init.sigma: must be >= 0");
      // Finite m_1 uniformly in n needs sum |z|^{2-2r} < inf.
      if (!(init.r > 1.0 + 0.5 * d)) {
        throw ConfigError("init.r: must exceed 1 + d/2 = " + std::to_string(1.0 + 0.5 * d) + " for a finite first moment");
      }
      break;
  }
}

namespace {

void apply_step(std::span<double> X, std::span<const double> b, std::span<const double> dW, double dt,
                Stepper stepper, const std::vector<double>& rates) {
  switch (stepper) {
    case Stepper::euler_maruyama:
      for (std::size_t k = 0; k < X.size(); ++k) X[k] += dt * b[k] + dW[k];
      break;
    case Stepper::tamed: {
      const double scale = dt / (1.0 + dt * std::sqrt(sum_sq(b)));
      for (std::size_t k = 0; k < X.size(); ++k) X[k] += scale * b[k] + dW[k];
      break;
    }
    case Stepper::semi_implicit:
      // b = -rate X + rest; rest explicit, -rate X implicit.
      for (std::size_t k = 0; k < X.size(); ++k) {
        X[k] = (X[k] + dt * (b[k] + rates[k] * X[k]) + dW[k]) / (1.0 + dt * rates[k]);
      }
      break;
  }
}

std::vector<double> implicit_rates(const Basis& basis, double nu) {
  std::vector<double> r(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) r[k] = nu * basis.laplacian_symbol(k);
  return r;
}

void require_finite(std::span<const double> b, std::span<const double> X) {
  for (double v : b) {
    if (!std::isfinite(v)) {
      const double norm = std::sqrt(sum_sq(X));
      throw StepFailure("non-finite drift at state norm " + std::to_string(norm), norm);
    }
  }
}

}  // namespace

std::vector<double> step(std::span<const double> X, double dt, std::span<const double> dW, DriftEvaluator& evaluator,
                         Stepper stepper) {
  if (!(dt > 0.0)) throw DomainError("time step must be > 0");
  const auto& basis = evaluator.basis();
  if (X.size() != basis.size() || dW.size() != basis.size()) {
    throw DimensionError("state and increment must both have " + std::to_string(basis.size()) + " coordinates");
  }
  std::vector<double> b(X.size());
  evaluator.evaluate(X, b);
  require_finite(b, X);
  std::vector<double> out(X.begin(), X.end());
  const auto rates = stepper == Stepper::semi_implicit ? implicit_rates(basis, evaluator.params().nu) : std::vector<double>{};
  apply_step(out, b, dW, dt, stepper, rates);
  return out;
}

struct Simulator::PathState {
  TrajectoryRecord rec;
  std::vector<double> X;
  std::vector<double> b;
  double int_diss = 0.0;
  double int_gamma = 0.0;
  double int_grad = 0.0;
  bool done = false;
};

Simulator::Simulator(const SimConfig& config)
    : config_((config.validate(), config)),
      basis_(config.n, config.d),
      evaluator_(basis_, config.fluid()),
      gamma_(config.gamma.on_basis(basis_)),
      implicit_rate_(implicit_rates(basis_, config.nu)),
      dt_(config.effective_dt()),
      steps_(config.steps()),
      grad_exponent_(2.0 * config.p > config.d ? envelope_exponent(config.p, config.d)
                                               : std::numeric_limits<double>::quiet_NaN()) {}

double envelope_exponent(double p, int d) {
  if (!(2.0 * p > d)) throw DomainError("envelope exponent 2p/(2p-d) needs 2p > d");
  return 2.0 * p / (2.0 * p - d);
}

std::vector<double> Simulator::initial_state(std::uint32_t path) const {
  return initial_coordinates(config_.init, basis_, config_.seed, path);
}

std::vector<double> Simulator::increment(std::uint32_t path, std::uint32_t step_index) const {
  return sample_increment(gamma_, dt_, DrawKey{config_.seed, path, step_index, Stream::noise});
}

void Simulator::advance(std::span<double> X, std::span<const double> b, std::span<const double> dW) const {
  apply_step(X, b, dW, dt_, config_.stepper, implicit_rate_);
}

void Simulator::record(PathState& s, int k, const DriftEvaluator::Stats& stats) {
  auto& r = s.rec;
  r.times.push_back(k * dt_);
  r.coords.insert(r.coords.end(), s.X.begin(), s.X.end());
  r.norm_l2_sq.push_back(sum_sq(s.X));
  r.norm_vp1_p.push_back(evaluator_.sobolev_norm_pow(s.X, config_.p, 1.0));
  r.int_diss.push_back(s.int_diss);
  r.int_gamma_xx.push_back(s.int_gamma);
  r.grad_lp.push_back(stats.grad_lp);
  r.int_grad_pow.push_back(s.int_grad);
}

namespace {

TrajectoryRecord fresh_record(std::uint32_t path, std::size_t dim, double dt) {
  TrajectoryRecord r;
  r.path_index = path;
  r.dim = dim;
  r.dt = dt;
  return r;
}

}  // namespace

TrajectoryRecord Simulator::simulate(std::uint32_t path) {
  const auto x0 = initial_state(path);
  return simulate_from(path, x0);
}

TrajectoryRecord Simulator::simulate_from(std::uint32_t path, std::span<const double> init) {
  return run(path, init, init, false).first;
}

std::pair<TrajectoryRecord, TrajectoryRecord> Simulator::simulate_paired(std::uint32_t path,
                                                                         std::span<const double> init_a,
                                                                         std::span<const double> init_b) {
  return run(path, init_a, init_b, true);
}

std::pair<TrajectoryRecord, TrajectoryRecord> Simulator::run(std::uint32_t path, std::span<const double> init_a,
                                                             std::span<const double> init_b, bool paired) {
  if (init_a.size() != basis_.size() || init_b.size() != basis_.size()) {
    throw DimensionError("initial state must have " + std::to_string(basis_.size()) + " coordinates");
  }
  PathState s[2];
  for (int m = 0; m < 2; ++m) {
    s[m].rec = fresh_record(path, basis_.size(), dt_);
    s[m].X.assign(m == 0 ? init_a.begin() : init_b.begin(), m == 0 ? init_a.end() : init_b.end());
    s[m].b.resize(basis_.size());
    s[m].done = m == 1 && !paired;  // a single run skips the second member
  }

  for (int k = 0; k <= steps_; ++k) {
    const bool want_record = k % config_.record_every == 0 || k == steps_;
    for (auto& st : s) {
      if (st.done) continue;
      DriftEvaluator::Stats stats;
      try {
        stats = evaluator_.evaluate(st.X, st.b);
        require_finite(st.b, st.X);
      } catch (const StepFailure& e) {
        st.rec.diverged = true;
        st.rec.failure = e.what();
        st.done = true;
        continue;
      }
      if (want_record) record(st, k, stats);
      if (k == steps_) continue;
      st.int_diss += dt_ * stats.dissipation;
      double gxx = 0.0;
      for (std::size_t i = 0; i < st.X.size(); ++i) gxx += gamma_[i] * st.X[i] * st.X[i];
      st.int_gamma += dt_ * gxx;
      st.int_grad += dt_ * std::pow(stats.grad_lp, grad_exponent_);
    }
    if (k == steps_) break;
    if (s[0].done && s[1].done) break;
    const auto dW = increment(path, static_cast<std::uint32_t>(k));
    for (auto& st : s) {
      if (st.done) continue;
      advance(st.X, st.b, dW);
      const double norm_sq = sum_sq(st.X);
      if (!std::isfinite(norm_sq) || norm_sq > config_.divergence_ceiling * config_.divergence_ceiling) {
        st.rec.diverged = true;
        st.rec.failure = "state norm " + std::to_string(std::sqrt(norm_sq)) + " exceeded ceiling at t = " +
                         std::to_string((k + 1) * dt_);
        st.done = true;
      }
    }
    // Paired runs stop together so both records cover the same times.
    if (paired && (s[0].rec.diverged || s[1].rec.diverged)) {
      for (auto& st : s) {
        if (!st.rec.diverged) {
          st.rec.diverged = true;
          st.rec.failure = "partner path diverged";
        }
        st.done = true;
      }
      break;
    }
  }
  return {std::move(s[0].rec), std::move(s[1].rec)};
}

TrajectoryRecord simulate(const SimConfig& config, std::uint32_t path) {
  Simulator sim(config);
  return sim.simulate(path);
}

std::pair<TrajectoryRecord, TrajectoryRecord> simulate_paired(const SimConfig& config, std::uint32_t path,
                                                              std::span<const double> init_a,
                                                              std::span<const double> init_b) {
  Simulator sim(config);
  return sim.simulate_paired(path, init_a, init_b);
}

int worker_count() {
  int threads = omp_get_max_threads();
  if (const char* env = std::getenv("SPLF_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw ConfigError("SPLF_THREADS: expected a positive integer, got '" + std::string(env) + "'");
    threads = static_cast<int>(std::min<long>(cap, threads));
  }
  return std::max(1, threads);
}

std::vector<TrajectoryRecord> simulate_ensemble(const SimConfig& config, std::uint32_t first, std::uint32_t count) {
  config.validate();
  std::vector<TrajectoryRecord> out(count);
  std::exception_ptr error;
  const int threads = std::min<int>(worker_count(), std::max<std::uint32_t>(count, 1));
#pragma omp parallel num_threads(threads)
  {
    std::unique_ptr<Simulator> sim;
    try {
      sim = std::make_unique<Simulator>(config);
    } catch (...) {
#pragma omp critical(splf_ensemble_error)
      if (!error) error = std::current_exception();
    }
#pragma omp for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(count); ++i) {
      if (!sim) continue;
      try {
        out[static_cast<std::size_t>(i)] = sim->simulate(first + static_cast<std::uint32_t>(i));
      } catch (...) {
#pragma omp critical(splf_ensemble_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace splf
