#pragma once

#include <array>
#include <string>

#include "dockrl/camera.hpp"
#include "dockrl/dqn.hpp"
#include "dockrl/env.hpp"
#include "dockrl/sim.hpp"

namespace dockrl {

// Everything configurable in one place. Defaults reproduce the documented
// training and evaluation setup.
struct AppConfig {
  SimConfig sim;
  CameraModel cam;
  MarkerLayout layout;
  DetectorNoise noise{1.0, 0.0};  // detector jitter used for training and eval
  EpisodeConfig episode;
  std::array<PhaseConfig, 4> phases = default_phases();
  TrainerConfig trainer;
  ActionTable actions = default_action_table();
};

// Loads `key = value` lines ('#' starts a comment; blank lines ignored).
// Unknown keys are an error. Keys not present keep their defaults.
AppConfig load_config(const std::string& path);

// Applies a single key=value override (same keys as the file).
void apply_config_entry(AppConfig& cfg, const std::string& key,
                        const std::string& value);

}  // namespace dockrl
