// One-command reproduction presets (a1, b1, c1, d1, fig4, fig5, sweep) with
// their pass/fail acceptance bands.

#pragma once

#include <string>
#include <vector>

#include "shadow/config.hpp"

namespace shadow {

struct PresetCheck {
  std::string name;
  bool pass;
  std::string detail;
};

struct PresetResult {
  std::string preset;
  std::vector<PresetCheck> checks;
  bool all_pass() const;
};

const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);

// Configuration a preset runs with (throws for "sweep", which runs none).
ExperimentConfig preset_config(const std::string& name);

// Runs the preset, writes config/trajectory/analysis artifacts under out_dir
// and evaluates the acceptance band.
PresetResult run_preset(const std::string& name, const std::string& out_dir);

}  // namespace shadow
