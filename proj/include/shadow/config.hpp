// Experiment configuration: a flat `key = value` text file with `#` comments.

#pragma once

#include <string>

#include "shadow/simulate.hpp"

namespace shadow {

struct ExperimentConfig {
  Params params{0.2, 6.0, 0.5, 0.5, 0.5};
  int n = 1;
  int nodes = 201;
  double dt = 0.01;
  double t_end = 2600.0;
  InitialSpec initial;
  int record_stride = 1;
  int snapshot_stride = 0;
  int track_layers = 1;

  static ExperimentConfig read(const std::string& path);
  void write(const std::string& path) const;

  // Checks every module precondition up front; throws std::invalid_argument
  // with one aggregated report listing all violations.
  void validate() const;
};

std::string initial_kind_name(InitialKind kind);
InitialKind initial_kind_from_name(const std::string& name);

}  // namespace shadow
