#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "splf/cli.hpp"
#include "splf/errors.hpp"
#include "splf/exponents.hpp"
#include "splf/snapshot.hpp"

namespace splf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version() { return SPLF_VERSION; }

std::string sha256_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot open " + file.string() + " for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount())) != 1) {
      throw Error("sha256: update failed");
    }
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("sha256: final failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json wave_json(const WaveVector& z) { return json(std::vector<int>(z.components().begin(), z.components().end())); }

json config_json(const RunConfig& rc) {
  const auto& s = rc.sim;
  json j{{"d", s.d},
         {"p", s.p},
         {"nu", s.nu},
         {"n", s.n},
         {"dt", s.dt},
         {"T", s.T},
         {"n_paths", s.n_paths},
         {"seed", s.seed},
         {"stepper", to_string(s.stepper)},
         {"record_every", s.record_every},
         {"divergence_ceiling", s.divergence_ceiling},
         {"snapshots", rc.snapshots}};
  json init{{"kind", to_string(s.init.kind)}};
  if (s.init.kind == InitialCondition::Kind::single_mode) {
    init["z"] = wave_json(s.init.z);
    init["j"] = s.init.j;
    init["amplitude"] = s.init.amplitude;
  } else if (s.init.kind == InitialCondition::Kind::gaussian) {
    init["sigma"] = s.init.sigma;
    init["r"] = s.init.r;
  }
  j["init"] = init;
  if (const auto* pw = s.gamma.as_power()) {
    j["gamma"] = {{"kind", "power"}, {"c", pw->c}, {"s", pw->s}};
  } else {
    json entries = json::array();
    for (const auto& e : s.gamma.as_explicit()->entries) {
      entries.push_back({{"z", wave_json(e.z)}, {"j", e.j}, {"value", e.value}});
    }
    j["gamma"] = entries.empty() ? json{{"kind", "zero"}} : json{{"kind", "explicit"}, {"entries", entries}};
  }
  j["uniqueness"] = {{"calibration_paths", rc.uniqueness.calibration_pairs},
                     {"margin", rc.uniqueness.margin},
                     {"eps", rc.uniqueness.eps}};
  return j;
}

json manifest_base(const std::string& command, const RunConfig& rc, const std::string& started) {
  return json{{"command", command},
              {"version", version()},
              {"config", config_json(rc)},
              {"seed", rc.sim.seed},
              {"steps", rc.sim.steps()},
              {"effective_dt", rc.sim.effective_dt()},
              {"warnings", rc.warnings},
              {"started", started}};
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void print_warnings(const RunConfig& rc, std::ostream& out) {
  for (const auto& w : rc.warnings) out << "warning: " << w << '\n';
  if (rc.sim.effective_dt() != rc.sim.dt) {
    out << "note: dt adjusted to " << fmt(rc.sim.effective_dt()) << " so that T is a whole number of steps\n";
  }
}

json energy_json(const EnergyBalanceReport& r) {
  return json{{"lhs_mean", r.lhs_mean},         {"lhs_stderr", r.lhs_stderr},
              {"rhs", r.rhs},                   {"initial_energy", r.initial_energy},
              {"noise_injection", r.noise_injection}, {"z_score", r.z_score},
              {"n_paths", r.n_paths},           {"n_diverged", r.n_diverged},
              {"residual", r.residual},         {"residual_stderr", r.residual_stderr},
              {"residual_half", r.residual_half}, {"shrink_ratio", r.shrink_ratio},
              {"bias_allowance", r.bias_allowance}, {"tolerance", r.tolerance},
              {"pass", r.pass}};
}

}  // namespace

int run_simulate(const RunConfig& rc, const fs::path& out_dir, std::ostream& out) {
  const auto started = utc_now();
  print_warnings(rc, out);
  fs::create_directories(out_dir);
  const auto& s = rc.sim;
  const auto ensemble = simulate_ensemble(s, 0, static_cast<std::uint32_t>(s.n_paths));
  const Basis basis(s.n, s.d);

  json paths = json::array();
  json outputs = json::array();
  std::size_t diverged = 0;
  auto add_output = [&](const fs::path& file) {
    outputs.push_back({{"file", file.filename().string()},
                       {"bytes", fs::file_size(file)},
                       {"sha256", sha256_file(file)}});
  };
  for (const auto& rec : ensemble) {
    char name[32];
    std::snprintf(name, sizeof name, "path_%05u", rec.path_index);
    const auto csv = out_dir / (std::string(name) + ".csv");
    {
      std::ofstream f(csv);
      if (!f) throw Error("cannot write " + csv.string());
      write_trajectory_csv(f, rec);
    }
    add_output(csv);
    if (rc.snapshots && rec.size() > 0) {
      const auto snap = out_dir / (std::string(name) + ".splf");
      write_snapshot(snap, field_from_coordinates(rec.state(rec.size() - 1), basis));
      add_output(snap);
    }
    diverged += rec.diverged ? 1 : 0;
    json p{{"path", rec.path_index}, {"diverged", rec.diverged}};
    if (rec.diverged) p["failure"] = rec.failure;
    paths.push_back(p);
  }
  auto manifest = manifest_base("simulate", rc, started);
  manifest["paths"] = paths;
  manifest["n_diverged"] = diverged;
  manifest["outputs"] = outputs;
  manifest["finished"] = utc_now();
  write_json(out_dir / "manifest.json", manifest);
  out << "simulate," << ensemble.size() << " paths," << diverged << " diverged," << out_dir.string() << '\n';
  return 0;
}

int run_energy_check(const RunConfig& rc, const std::optional<fs::path>& out_dir, std::ostream& out) {
  const auto started = utc_now();
  print_warnings(rc, out);
  const auto rep = energy_check(rc.sim);
  out << "energy_check," << (rep.pass ? "PASS" : "FAIL") << ",lhs=" << fmt(rep.lhs_mean) << ",rhs=" << fmt(rep.rhs)
      << ",stderr=" << fmt(rep.lhs_stderr) << ",z=" << fmt(rep.z_score) << ",ratio=" << fmt(rep.shrink_ratio)
      << ",allowance=" << fmt(rep.bias_allowance) << '\n';
  out << "  E||X_0||^2          " << fmt(rep.initial_energy) << '\n'
      << "  tr(Gamma P_n) T     " << fmt(rep.noise_injection) << '\n'
      << "  paths / diverged    " << rep.n_paths << " / " << rep.n_diverged << '\n'
      << "  residual dt, dt/2   " << fmt(rep.residual) << ", " << fmt(rep.residual_half) << '\n'
      << "  |lhs - rhs|, tol    " << fmt(std::abs(rep.lhs_mean - rep.rhs)) << ", " << fmt(rep.tolerance) << '\n';
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto manifest = manifest_base("energy-check", rc, started);
    manifest["report"] = energy_json(rep);
    manifest["finished"] = utc_now();
    write_json(*out_dir / "manifest.json", manifest);
  }
  return rep.pass ? 0 : 1;
}

int run_uniqueness_check(const RunConfig& rc, double eps, const std::optional<fs::path>& out_dir, std::ostream& out) {
  const auto started = utc_now();
  print_warnings(rc, out);
  auto opts = rc.uniqueness;
  opts.eps = eps;
  const auto rep = uniqueness_check(rc.sim, opts);
  const bool exact = eps == 0.0;
  const bool pass = rep.n_pairs > 0 && (exact ? rep.max_exact_separation < 1e-12 : rep.violations == 0);
  out << "uniqueness_check," << (pass ? "PASS" : "FAIL") << ",eps=" << fmt(eps) << ",C=" << fmt(rep.fitted_constant)
      << ",exponent=" << fmt(rep.exponent) << ",violations=" << rep.violations << "/" << rep.n_checked
      << ",max_exact_sep=" << fmt(rep.max_exact_separation) << '\n';
  out << "  pairs / diverged    " << rep.n_pairs << " / " << rep.n_diverged << '\n'
      << "  margin              " << fmt(rep.margin) << '\n'
      << "  regime              " << (rep.in_theorem ? "p >= 1 + d/2" : "out-of-theorem (p < 1 + d/2)") << '\n';
  if (out_dir) {
    fs::create_directories(*out_dir);
    auto manifest = manifest_base("uniqueness-check", rc, started);
    manifest["report"] = {{"eps", eps},
                          {"fitted_constant", rep.fitted_constant},
                          {"exponent", rep.exponent},
                          {"margin", rep.margin},
                          {"n_pairs", rep.n_pairs},
                          {"n_checked", rep.n_checked},
                          {"violations", rep.violations},
                          {"n_diverged", rep.n_diverged},
                          {"max_exact_separation", rep.max_exact_separation},
                          {"in_theorem", rep.in_theorem},
                          {"pass", pass}};
    manifest["finished"] = utc_now();
    write_json(*out_dir / "manifest.json", manifest);
  }
  return pass ? 0 : 1;
}

int run_exponents(int d, std::optional<double> p, std::ostream& out) {
  const auto r = exponent_report(d, p);
  auto both = [](const Rational& q) { return to_string(q) + " (" + fmt(to_double(q)) + ")"; };
  out << "d                      " << d << '\n'
      << "p1                     " << both(r.critical.p1) << '\n'
      << "p2                     " << (r.critical.p2 ? both(*r.critical.p2) : std::string("inf")) << '\n'
      << "p3                     " << fmt(r.critical.p3) << '\n'
      << "uniqueness threshold   " << both(r.uniqueness) << '\n';
  if (p) {
    out << "p                      " << fmt(*p) << '\n'
        << "existence admissible   " << (*r.admissible_existence ? "yes" : "no") << '\n'
        << "uniqueness (p>=1+d/2)  " << (*r.uniqueness_ok ? "yes" : "no") << '\n'
        << "delta                  " << fmt(*r.delta) << '\n';
    if (r.lambda) out << "lambda                 " << fmt(*r.lambda) << '\n';
    if (r.beta_p1) out << "beta(p, 1)             " << fmt(*r.beta_p1) << '\n';
  }
  return 0;
}

}  // namespace splf::cli
