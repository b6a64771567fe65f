#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "splf/diagnostics.hpp"
#include "splf/integrator.hpp"

namespace splf::cli {

struct RunConfig {
  SimConfig sim;
  UniquenessOptions uniqueness;
  bool snapshots = false;             // write the final state of every path
  std::vector<std::string> warnings;  // e.g. (p, d) outside the existence range
};

/// Parses a YAML config. Throws ConfigError naming the offending field.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& file);

/// Version string embedded in manifests.
std::string version();

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& file);

// Subcommands. Each returns the process exit status; reports go to `out`.
int run_simulate(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out);
int run_energy_check(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir, std::ostream& out);
int run_uniqueness_check(const RunConfig& config, double eps, const std::optional<std::filesystem::path>& out_dir,
                         std::ostream& out);
int run_exponents(int d, std::optional<double> p, std::ostream& out);

}  // namespace splf::cli
