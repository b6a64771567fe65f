#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "splf/cli.hpp"
#include "splf/errors.hpp"
#include "splf/exponents.hpp"

namespace splf::cli {

namespace {

template <class T>
T scalar(const YAML::Node& node, const std::string& name) {
  if (!node.IsScalar()) throw ConfigError(name + ": expected a scalar value");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(name + ": unparsable value '" + node.Scalar() + "'");
  }
}

template <class T>
T required(const YAML::Node& map, const std::string& key, const std::string& prefix = "") {
  const auto node = map[key];
  if (!node) throw ConfigError(prefix + key + ": missing required key");
  return scalar<T>(node, prefix + key);
}

template <class T>
T optional(const YAML::Node& map, const std::string& key, T fallback, const std::string& prefix = "") {
  const auto node = map[key];
  return node ? scalar<T>(node, prefix + key) : fallback;
}

void reject_unknown(const YAML::Node& map, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) throw ConfigError(prefix + key + ": unknown key");
  }
}

WaveVector wave_vector(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsSequence()) throw ConfigError(name + ": expected a list of integers");
  std::vector<int> c;
  for (std::size_t i = 0; i < node.size(); ++i) c.push_back(scalar<int>(node[i], name + "[" + std::to_string(i) + "]"));
  return WaveVector(std::move(c));
}

InitialCondition parse_init(const YAML::Node& node) {
  if (!node) return InitialCondition::zero();
  if (!node.IsMap()) throw ConfigError("init: expected a mapping");
  const auto kind = required<std::string>(node, "kind", "init.");
  if (kind == "zero") {
    reject_unknown(node, {"kind"}, "init.");
    return InitialCondition::zero();
  }
  if (kind == "single_mode") {
    reject_unknown(node, {"kind", "z", "j", "amplitude"}, "init.");
    return InitialCondition::single_mode(wave_vector(node["z"], "init.z"), optional<int>(node, "j", 1, "init."),
                                         required<double>(node, "amplitude", "init."));
  }
  if (kind == "gaussian") {
    reject_unknown(node, {"kind", "sigma", "r"}, "init.");
    return InitialCondition::gaussian(required<double>(node, "sigma", "init."), required<double>(node, "r", "init."));
  }
  throw ConfigError("init.kind: unknown value '" + kind + "' (expected zero, single_mode or gaussian)");
}

CovarianceSpectrum parse_gamma(const YAML::Node& node) {
  if (!node) return CovarianceSpectrum::zero();
  if (!node.IsMap()) throw ConfigError("gamma: expected a mapping");
  const auto kind = required<std::string>(node, "kind", "gamma.");
  if (kind == "zero") {
    reject_unknown(node, {"kind"}, "gamma.");
    return CovarianceSpectrum::zero();
  }
  if (kind == "power") {
    reject_unknown(node, {"kind", "c", "s"}, "gamma.");
    return CovarianceSpectrum::power(required<double>(node, "c", "gamma."), required<double>(node, "s", "gamma."));
  }
  if (kind == "explicit") {
    reject_unknown(node, {"kind", "entries"}, "gamma.");
    const auto list = node["entries"];
    if (!list || !list.IsSequence()) throw ConfigError("gamma.entries: expected a list");
    std::vector<SpectrumEntry> entries;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string prefix = "gamma.entries[" + std::to_string(i) + "].";
      reject_unknown(list[i], {"z", "j", "value"}, prefix);
      entries.push_back({wave_vector(list[i]["z"], prefix + "z"), required<int>(list[i], "j", prefix),
                         required<double>(list[i], "value", prefix)});
    }
    return CovarianceSpectrum::explicit_map(std::move(entries));
  }
  throw ConfigError("gamma.kind: unknown value '" + kind + "' (expected zero, power or explicit)");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config: expected a mapping at top level");
  reject_unknown(root,
                 {"d", "p", "nu", "n", "dt", "T", "n_paths", "paths", "seed", "stepper", "record_every",
                  "divergence_ceiling", "snapshots", "init", "gamma", "uniqueness"},
                 "");
  if (root["n_paths"] && root["paths"]) throw ConfigError("paths: given together with n_paths");

  RunConfig rc;
  auto& s = rc.sim;
  s.d = required<int>(root, "d");
  s.p = required<double>(root, "p");
  s.nu = required<double>(root, "nu");
  s.n = required<int>(root, "n");
  s.dt = required<double>(root, "dt");
  s.T = required<double>(root, "T");
  s.n_paths = root["paths"] ? required<int>(root, "paths") : required<int>(root, "n_paths");
  s.seed = required<std::uint64_t>(root, "seed");
  s.stepper = parse_stepper(optional<std::string>(root, "stepper", "tamed"));
  s.record_every = optional<int>(root, "record_every", 1);
  s.divergence_ceiling = optional<double>(root, "divergence_ceiling", 1e6);
  s.init = parse_init(root["init"]);
  s.gamma = parse_gamma(root["gamma"]);
  rc.snapshots = optional<bool>(root, "snapshots", false);
  if (const auto u = root["uniqueness"]) {
    if (!u.IsMap()) throw ConfigError("uniqueness: expected a mapping");
    reject_unknown(u, {"calibration_paths", "margin", "eps"}, "uniqueness.");
    rc.uniqueness.calibration_pairs = optional<int>(u, "calibration_paths", rc.uniqueness.calibration_pairs, "uniqueness.");
    rc.uniqueness.margin = optional<double>(u, "margin", rc.uniqueness.margin, "uniqueness.");
    rc.uniqueness.eps = optional<double>(u, "eps", rc.uniqueness.eps, "uniqueness.");
  }
  s.validate();
  if (!admissible_existence(s.p, s.d)) {
    std::ostringstream w;
    w << "p = " << s.p << " is outside the existence range for d = " << s.d << "; results are out-of-theorem";
    rc.warnings.push_back(w.str());
  }
  return rc;
}

RunConfig parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace splf::cli
