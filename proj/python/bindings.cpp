#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "splf/constitutive.hpp"
#include "splf/diagnostics.hpp"
#include "splf/errors.hpp"
#include "splf/exponents.hpp"
#include "splf/integrator.hpp"
#include "splf/noise.hpp"

namespace py = pybind11;
using namespace splf;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> from_array(const Array& a) {
  if (a.ndim() != 1) throw DimensionError("expected a one-dimensional array");
  return {a.data(), a.data() + a.size()};
}

std::size_t checked_index(const Basis& b, std::size_t k) {
  if (k >= b.size()) throw py::index_error("basis index out of range");
  return k;
}

py::dict record_dict(const TrajectoryRecord& rec) {
  Array coords({static_cast<py::ssize_t>(rec.size()), static_cast<py::ssize_t>(rec.dim)});
  std::copy(rec.coords.begin(), rec.coords.end(), coords.mutable_data());
  py::dict d;
  d["path"] = rec.path_index;
  d["times"] = to_array(rec.times);
  d["coords"] = coords;
  d["norm_l2_sq"] = to_array(rec.norm_l2_sq);
  d["norm_vp1_p"] = to_array(rec.norm_vp1_p);
  d["int_diss"] = to_array(rec.int_diss);
  d["int_gamma_xx"] = to_array(rec.int_gamma_xx);
  d["grad_lp"] = to_array(rec.grad_lp);
  d["int_grad_pow"] = to_array(rec.int_grad_pow);
  d["diverged"] = rec.diverged;
  d["failure"] = rec.failure;
  return d;
}

py::dict exponents_dict(int d) {
  const auto c = critical_exponents(d);
  py::dict out;
  out["p1"] = py::make_tuple(c.p1.numerator(), c.p1.denominator());
  if (c.p2) {
    out["p2"] = py::make_tuple(c.p2->numerator(), c.p2->denominator());
  } else {
    out["p2"] = py::none();
  }
  out["p3"] = c.p3;
  out["p1_value"] = to_double(c.p1);
  out["p2_value"] = c.p2_value();
  return out;
}

}  // namespace

PYBIND11_MODULE(_splf, m) {
  m.doc() = "Spectral Galerkin simulator for the stochastic power-law fluid";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<AliasingError>(m, "AliasingError", base.ptr());

  m.def("critical_exponents", &exponents_dict, py::arg("d"));
  m.def("admissible_existence", &admissible_existence, py::arg("p"), py::arg("d"));
  m.def("lam", &lambda, py::arg("p"), py::arg("d"));
  m.def("delta", &delta, py::arg("p"));

  m.def(
      "philox4x32",
      [](std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) { return philox::generate(counter, key); },
      py::arg("counter"), py::arg("key"));
  m.def(
      "standard_normals",
      [](std::uint64_t seed, std::uint32_t path, std::uint32_t step, std::size_t count) {
        std::vector<double> out(count);
        standard_normals(DrawKey{seed, path, step, Stream::noise}, out);
        return to_array(out);
      },
      py::arg("seed"), py::arg("path"), py::arg("step"), py::arg("count"));
  m.def(
      "trace_Pn", [](double c, double s, int n, int d) { return trace_Pn(CovarianceSpectrum::power(c, s), n, d); },
      py::arg("c"), py::arg("s"), py::arg("n"), py::arg("d"));

  py::class_<Basis>(m, "Basis")
      .def(py::init<int, int>(), py::arg("n"), py::arg("d"))
      .def("__len__", &Basis::size)
      .def_property_readonly("dim", &Basis::dim)
      .def_property_readonly("order", &Basis::order)
      .def("wave_vector",
           [](const Basis& b, std::size_t k) {
             const auto c = b[checked_index(b, k)].z.components();
             return std::vector<int>(c.begin(), c.end());
           })
      .def("component", [](const Basis& b, std::size_t k) { return b[checked_index(b, k)].j; })
      .def("laplacian_symbol", [](const Basis& b, std::size_t k) { return b.laplacian_symbol(checked_index(b, k)); });

  py::class_<DriftEvaluator>(m, "DriftEvaluator")
      .def(py::init([](const Basis& b, double p, double nu) { return DriftEvaluator(b, FluidParams{p, nu}); }),
           py::arg("basis"), py::arg("p"), py::arg("nu"))
      .def("evaluate", [](DriftEvaluator& ev, const Array& x) {
        const auto coords = from_array(x);
        if (coords.size() != ev.basis().size()) throw DimensionError("coordinate vector does not match the basis");
        std::vector<double> out(coords.size());
        const auto stats = ev.evaluate(coords, out);
        return py::make_tuple(to_array(out), stats.dissipation, stats.grad_lp);
      });

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("d", &SimConfig::d)
      .def_readwrite("p", &SimConfig::p)
      .def_readwrite("nu", &SimConfig::nu)
      .def_readwrite("n", &SimConfig::n)
      .def_readwrite("dt", &SimConfig::dt)
      .def_readwrite("T", &SimConfig::T)
      .def_readwrite("n_paths", &SimConfig::n_paths)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("record_every", &SimConfig::record_every)
      .def_readwrite("divergence_ceiling", &SimConfig::divergence_ceiling)
      .def_property(
          "stepper", [](const SimConfig& c) { return to_string(c.stepper); },
          [](SimConfig& c, const std::string& s) { c.stepper = parse_stepper(s); })
      .def("set_power_noise", [](SimConfig& c, double amp, double s) { c.gamma = CovarianceSpectrum::power(amp, s); })
      .def("set_zero_noise", [](SimConfig& c) { c.gamma = CovarianceSpectrum::zero(); })
      .def("set_gaussian_init", [](SimConfig& c, double sigma, double r) { c.init = InitialCondition::gaussian(sigma, r); })
      .def("set_single_mode_init",
           [](SimConfig& c, std::vector<int> z, int j, double amplitude) {
             c.init = InitialCondition::single_mode(WaveVector(std::move(z)), j, amplitude);
           })
      .def("set_zero_init", [](SimConfig& c) { c.init = InitialCondition::zero(); })
      .def("steps", &SimConfig::steps)
      .def("effective_dt", &SimConfig::effective_dt)
      .def("validate", &SimConfig::validate);

  m.def(
      "simulate",
      [](const SimConfig& c, std::uint32_t path) {
        c.validate();
        TrajectoryRecord rec;
        {
          py::gil_scoped_release release;
          rec = simulate(c, path);
        }
        return record_dict(rec);
      },
      py::arg("config"), py::arg("path") = 0);

  m.def(
      "energy_check",
      [](const SimConfig& c) {
        EnergyBalanceReport r;
        {
          py::gil_scoped_release release;
          r = energy_check(c);
        }
        py::dict d;
        d["lhs_mean"] = r.lhs_mean;
        d["lhs_stderr"] = r.lhs_stderr;
        d["rhs"] = r.rhs;
        d["z_score"] = r.z_score;
        d["residual"] = r.residual;
        d["residual_half"] = r.residual_half;
        d["shrink_ratio"] = r.shrink_ratio;
        d["bias_allowance"] = r.bias_allowance;
        d["tolerance"] = r.tolerance;
        d["n_paths"] = r.n_paths;
        d["n_diverged"] = r.n_diverged;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("config"));

  m.def(
      "uniqueness_check",
      [](const SimConfig& c, double eps, int calibration_pairs, double margin) {
        GronwallReport r;
        {
          py::gil_scoped_release release;
          r = uniqueness_check(c, UniquenessOptions{eps, calibration_pairs, margin});
        }
        py::dict d;
        d["exponent"] = r.exponent;
        d["fitted_constant"] = r.fitted_constant;
        d["n_pairs"] = r.n_pairs;
        d["n_checked"] = r.n_checked;
        d["violations"] = r.violations;
        d["max_exact_separation"] = r.max_exact_separation;
        d["in_theorem"] = r.in_theorem;
        return d;
      },
      py::arg("config"), py::arg("eps") = 1e-3, py::arg("calibration_pairs") = 50, py::arg("margin") = 0.5);

  m.def(
      "structural_defects",
      [](const SimConfig& c, std::uint32_t paths) {
        c.validate();
        StructuralDefects s;
        {
          py::gil_scoped_release release;
          s = structural_defects(simulate_ensemble(c, 0, paths), Basis(c.n, c.d));
        }
        return py::make_tuple(s.divergence, s.conjugate_symmetry);
      },
      py::arg("config"), py::arg("paths") = 1);
}
