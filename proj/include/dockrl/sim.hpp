#pragma once

#include <stdexcept>

namespace dockrl {

// World frame: y runs along the approach axis and increases toward the dock,
// x is the lateral offset from the dock centerline, theta is the heading
// (0 = facing the dock). Positions refer to the rear axle.
struct Pose {
  double x = 0.0;      // m
  double y = 0.0;      // m
  double theta = 0.0;  // rad, kept in (-pi, pi]
};

struct ControlAction {
  double v = 0.0;      // m/s, forward
  double omega = 0.0;  // rad/s, heading rate
};

struct SimConfig {
  double dt = 0.2;                      // s, control period (5 Hz)
  double v_max = 0.4;                   // m/s
  double omega_max = 30.0 * 3.14159265358979323846 / 180.0;  // rad/s
  double y_goal = 1.0;                  // m, stop line
};

// Maps any finite angle into (-pi, pi].
double normalize_angle(double theta);

// Advances the unicycle kinematics
//   dx/dt = v sin(theta),  dy/dt = v cos(theta),  dtheta/dt = omega
// over one interval of length dt with a single RK4 step.
// Throws std::invalid_argument on non-finite input or dt <= 0.
Pose step(const Pose& pose, const ControlAction& action, double dt);

// Stop condition: the rear axle has reached the stop line.
inline bool is_done(const Pose& pose, const SimConfig& cfg) {
  return pose.y >= cfg.y_goal;
}

}  // namespace dockrl
