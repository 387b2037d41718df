#include "shadow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace shadow {

std::string initial_kind_name(InitialKind kind) {
  switch (kind) {
    case InitialKind::kPerturbedSingleLayer:
      return "perturbed-single-layer";
    case InitialKind::kNearTwoLayer:
      return "near-two-layer";
    case InitialKind::kCustomSamples:
      return "custom-samples";
  }
  return "?";
}

InitialKind initial_kind_from_name(const std::string& name) {
  if (name == "perturbed-single-layer")
    return InitialKind::kPerturbedSingleLayer;
  if (name == "near-two-layer") return InitialKind::kNearTwoLayer;
  if (name == "custom-samples") return InitialKind::kCustomSamples;
  throw std::invalid_argument("unknown initial kind: " + name);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open samples file: " + path);
  std::vector<double> out;
  std::string tok;
  while (std::getline(in, tok)) {
    std::stringstream row(tok);
    std::string field;
    while (std::getline(row, field, ',')) {
      field = trim(field);
      if (!field.empty()) out.push_back(std::stod(field));
    }
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);

  ExperimentConfig cfg;
  std::ostringstream errors;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors << "line " << lineno << ": expected `key = value`; ";
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "eps") cfg.params.eps = std::stod(value);
      else if (key == "tau") cfg.params.tau = std::stod(value);
      else if (key == "alpha") cfg.params.alpha = std::stod(value);
      else if (key == "beta") cfg.params.beta = std::stod(value);
      else if (key == "gamma") cfg.params.gamma = std::stod(value);
      else if (key == "n") cfg.n = std::stoi(value);
      else if (key == "nodes") cfg.nodes = std::stoi(value);
      else if (key == "dt") cfg.dt = std::stod(value);
      else if (key == "t_end") cfg.t_end = std::stod(value);
      else if (key == "initial") cfg.initial.kind = initial_kind_from_name(value);
      else if (key == "bump_height") cfg.initial.bump_height = std::stod(value);
      else if (key == "bump_center") cfg.initial.bump_center = std::stod(value);
      else if (key == "bump_width") cfg.initial.bump_width = std::stod(value);
      else if (key == "layer_shift") cfg.initial.layer_shift = std::stod(value);
      else if (key == "xi0") cfg.initial.xi0 = std::stod(value);
      else if (key == "samples_file") cfg.initial.samples = read_samples_file(value);
      else if (key == "record_stride") cfg.record_stride = std::stoi(value);
      else if (key == "snapshot_stride") cfg.snapshot_stride = std::stoi(value);
      else if (key == "track_layers") cfg.track_layers = std::stoi(value);
      else errors << "line " << lineno << ": unknown key `" << key << "`; ";
    } catch (const std::invalid_argument& e) {
      errors << "line " << lineno << " (" << key << "): " << e.what() << "; ";
    }
  }
  if (!errors.str().empty())
    throw std::invalid_argument("config " + path + ": " + errors.str());
  return cfg;
}

void ExperimentConfig::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "eps = " << fmt17(params.eps) << "\n"
      << "tau = " << fmt17(params.tau) << "\n"
      << "alpha = " << fmt17(params.alpha) << "\n"
      << "beta = " << fmt17(params.beta) << "\n"
      << "gamma = " << fmt17(params.gamma) << "\n"
      << "n = " << n << "\n"
      << "nodes = " << nodes << "\n"
      << "dt = " << fmt17(dt) << "\n"
      << "t_end = " << fmt17(t_end) << "\n"
      << "initial = " << initial_kind_name(initial.kind) << "\n"
      << "bump_height = " << fmt17(initial.bump_height) << "\n"
      << "bump_center = " << fmt17(initial.bump_center) << "\n"
      << "bump_width = " << fmt17(initial.bump_width) << "\n"
      << "layer_shift = " << fmt17(initial.layer_shift) << "\n"
      << "xi0 = " << fmt17(initial.xi0) << "\n"
      << "record_stride = " << record_stride << "\n"
      << "snapshot_stride = " << snapshot_stride << "\n"
      << "track_layers = " << track_layers << "\n";
}

void ExperimentConfig::validate() const {
  std::ostringstream bad;
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    bad << e.what() << "; ";
  }
  if (n < 1) bad << "n must be >= 1; ";
  if (params.eps > 0.0 && n >= 1 &&
      !(params.eps < 1.0 / (n * std::numbers::pi)))
    bad << "eps must be below 1/(n pi) for an n-layer profile; ";
  if (nodes < 3) bad << "nodes must be >= 3; ";
  if (!(dt > 0.0) || dt > 0.1) bad << "dt must satisfy 0 < dt <= 0.1; ";
  if (!(t_end > 0.0)) bad << "t_end must be positive; ";
  if (record_stride < 1) bad << "record_stride must be >= 1; ";
  if (snapshot_stride < 0) bad << "snapshot_stride must be >= 0; ";
  if (track_layers < 0) bad << "track_layers must be >= 0; ";
  if (initial.kind != InitialKind::kCustomSamples &&
      !(initial.bump_width > 0.0))
    bad << "bump_width must be positive; ";
  if (initial.kind == InitialKind::kNearTwoLayer && n != 2)
    bad << "near-two-layer initial data requires n = 2; ";
  if (initial.kind == InitialKind::kCustomSamples &&
      static_cast<int>(initial.samples.size()) != nodes)
    bad << "custom samples count must equal nodes; ";
  if (!bad.str().empty())
    throw std::invalid_argument("invalid config: " + bad.str());
}

}  // namespace shadow
