#include "dockrl/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace dockrl {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw std::runtime_error("config: bad number for '" + key + "': " + value);
  }
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (end == value.c_str() || *end != '\0') {
    throw std::runtime_error("config: bad integer for '" + key + "': " + value);
  }
  return v;
}

constexpr double kDegToRad = M_PI / 180.0;

// "v:omega_deg, v:omega_deg, ..."
ActionTable parse_actions(const std::string& value) {
  ActionTable table;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("config: action entry needs v:omega_deg, got " + item);
    }
    const double v = parse_double("actions", trim(item.substr(0, colon)));
    const double w = parse_double("actions", trim(item.substr(colon + 1)));
    table.push_back({v, w * kDegToRad});
  }
  if (table.empty()) throw std::runtime_error("config: empty action table");
  return table;
}

}  // namespace

void apply_config_entry(AppConfig& cfg, const std::string& key,
                        const std::string& value) {
  auto d = [&] { return parse_double(key, value); };
  auto i = [&] { return static_cast<int>(parse_long(key, value)); };

  // sim
  if (key == "dt") cfg.sim.dt = d();
  else if (key == "v_max") cfg.sim.v_max = d();
  else if (key == "omega_max_deg") cfg.sim.omega_max = d() * kDegToRad;
  else if (key == "y_goal") cfg.sim.y_goal = d();
  // camera
  else if (key == "focal_px") cfg.cam.focal_px = d();
  else if (key == "width_px") cfg.cam.width_px = i();
  else if (key == "height_px") cfg.cam.height_px = i();
  else if (key == "cam_height") cfg.cam.cam_height = d();
  else if (key == "cam_y") cfg.cam.cam_y = d();
  else if (key == "aim_y") cfg.cam.aim_y = d();
  // marker layout
  else if (key == "front_offset") cfg.layout.front_offset = d();
  else if (key == "rear_offset") cfg.layout.rear_offset = d();
  else if (key == "marker_half_size") cfg.layout.marker_half_size = d();
  // detector noise
  else if (key == "sigma_px") cfg.noise.sigma_px = d();
  else if (key == "dropout_prob") cfg.noise.dropout_prob = d();
  // episodes
  else if (key == "x_range") cfg.episode.x_range = d();
  else if (key == "y_range") cfg.episode.y_range = d();
  else if (key == "theta_range_deg") cfg.episode.theta_range = d() * kDegToRad;
  else if (key == "max_steps") cfg.episode.max_steps = i();
  // trainer
  else if (key == "gamma") cfg.trainer.gamma = d();
  else if (key == "tau") cfg.trainer.tau = d();
  else if (key == "batch_size") cfg.trainer.batch_size = i();
  else if (key == "capacity") cfg.trainer.capacity = static_cast<size_t>(parse_long(key, value));
  else if (key == "eps_start") cfg.trainer.eps_start = d();
  else if (key == "eps_end") cfg.trainer.eps_end = d();
  else if (key == "eps_decay_frac") cfg.trainer.eps_decay_frac = d();
  else if (key == "updates_per_step") cfg.trainer.updates_per_step = i();
  else if (key == "alpha") cfg.trainer.alpha = d();
  else if (key == "momentum") cfg.trainer.momentum = d();
  else if (key == "window") cfg.trainer.window = i();
  else if (key == "seed") cfg.trainer.seed = static_cast<uint64_t>(parse_long(key, value));
  // actions
  else if (key == "actions") cfg.actions = parse_actions(value);
  // phases
  else if (key.rfind("phase", 0) == 0 && key.size() > 6 && key[6] == '_') {
    const int idx = key[5] - '1';
    if (idx < 0 || idx > 3) throw std::runtime_error("config: unknown key '" + key + "'");
    const std::string field = key.substr(7);
    PhaseConfig& phase = cfg.phases[idx];
    if (field == "c1") phase.c1 = d();
    else if (field == "c2") phase.c2 = d();
    else if (field == "reward") phase.R = d();
    else if (field == "threshold") phase.advance_threshold = d();
    else if (field == "budget") phase.episode_budget = i();
    else throw std::runtime_error("config: unknown key '" + key + "'");
  } else {
    throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  AppConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: " + path + ":" +
                               std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::runtime_error("config: " + path + ":" +
                               std::to_string(line_no) + ": empty key or value");
    }
    apply_config_entry(cfg, key, value);
  }
  return cfg;
}

}  // namespace dockrl
