#include "dockrl/sim.hpp"

#include <cmath>

namespace dockrl {

double normalize_angle(double theta) {
  double a = std::remainder(theta, 2.0 * M_PI);  // [-pi, pi]
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

namespace {

struct Derivative {
  double dx, dy, dtheta;
};

Derivative kinematics(double theta, const ControlAction& u) {
  return {u.v * std::sin(theta), u.v * std::cos(theta), u.omega};
}

}  // namespace

Pose step(const Pose& pose, const ControlAction& action, double dt) {
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y) ||
      !std::isfinite(pose.theta) || !std::isfinite(action.v) ||
      !std::isfinite(action.omega) || !std::isfinite(dt)) {
    throw std::invalid_argument("sim::step: non-finite input");
  }
  if (dt <= 0.0) {
    throw std::invalid_argument("sim::step: dt must be positive");
  }

  const Derivative k1 = kinematics(pose.theta, action);
  const Derivative k2 = kinematics(pose.theta + 0.5 * dt * k1.dtheta, action);
  const Derivative k3 = kinematics(pose.theta + 0.5 * dt * k2.dtheta, action);
  const Derivative k4 = kinematics(pose.theta + dt * k3.dtheta, action);

  Pose next;
  next.x = pose.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  next.y = pose.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  next.theta = normalize_angle(
      pose.theta + dt / 6.0 * (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta));
  return next;
}

}  // namespace dockrl
