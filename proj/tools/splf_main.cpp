#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "splf/cli.hpp"
#include "splf/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stochastic power-law fluid Galerkin simulator"};
  app.set_version_flag("--version", splf::cli::version());
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  double eps = 1e-3;
  int dim = 2;
  std::optional<double> p;

  auto* sim = app.add_subcommand("simulate", "Integrate an ensemble and write per-path CSV plus a manifest");
  sim->add_option("--config", config, "YAML config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out_dir, "Output directory")->required();

  auto* energy = app.add_subcommand("energy-check", "Energy identity check with a dt/2 control run");
  energy->add_option("--config", config, "YAML config file")->required()->check(CLI::ExistingFile);
  energy->add_option("--out", out_dir, "Optional directory for manifest.json");

  auto* uniq = app.add_subcommand("uniqueness-check", "Paired runs against the calibrated Gronwall envelope");
  uniq->add_option("--config", config, "YAML config file")->required()->check(CLI::ExistingFile);
  auto* eps_opt = uniq->add_option("--eps", eps, "Initial perturbation on the lowest mode (0 = identical data)");
  uniq->add_option("--out", out_dir, "Optional directory for manifest.json");

  auto* expo = app.add_subcommand("exponents", "Print critical exponents for dimension d");
  expo->add_option("--d", dim, "Dimension")->required();
  expo->add_option("--p", p, "Power-law exponent");

  CLI11_PARSE(app, argc, argv);

  const auto out_path = out_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(out_dir);
  try {
    if (expo->parsed()) return splf::cli::run_exponents(dim, p, std::cout);
    const auto rc = splf::cli::parse_config(config);
    if (sim->parsed()) return splf::cli::run_simulate(rc, out_dir, std::cout);
    if (energy->parsed()) return splf::cli::run_energy_check(rc, out_path, std::cout);
    if (uniq->parsed()) {
      return splf::cli::run_uniqueness_check(rc, eps_opt->count() ? eps : rc.uniqueness.eps, out_path, std::cout);
    }
  } catch (const splf::Error& e) {
    std::cerr << "splf: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "splf: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
