#include "dockrl/env.hpp"

#include <cmath>
#include <stdexcept>

namespace dockrl {

std::array<PhaseConfig, 4> default_phases() {
  std::array<PhaseConfig, 4> phases;
  phases[0] = {1, 0.05, 2.0, 0.0, -90.0, 4000};
  phases[1] = {2, 0.05, 5.0, 150.0, 60.0, 4000};
  phases[2] = {3, 0.02, 5.0, 150.0, 60.0, 4000};
  phases[3] = {4, 0.02, 10.0, 150.0, 60.0, 4000};
  return phases;
}

ActionTable default_action_table() {
  ActionTable table;
  const double deg = M_PI / 180.0;
  for (double v : {0.1, 0.25, 0.4}) {
    for (double w : {-15.0 * deg, 0.0, 15.0 * deg}) {
      table.push_back({v, w});
    }
  }
  return table;
}

RewardValue compute_reward(const MarkerObservation& obs, const Pose& pose,
                           const PhaseConfig& phase,
                           const std::pair<double, double>& anchors,
                           double y_goal) {
  const double au1 = std::abs(obs.u1);
  const double au2 = std::abs(obs.u2);
  if (pose.y >= y_goal && au1 < phase.c1 && au2 < phase.c1) {
    return {phase.R, RewardBranch::success};
  }
  if (pose.y >= y_goal && au1 < 2.0 * phase.c1 && au2 < 2.0 * phase.c1) {
    return {0.0, RewardBranch::near_miss};
  }
  const double penalty = 10.0 * std::abs(obs.v1 - anchors.first) +
                         10.0 * std::abs(obs.v2 - anchors.second) +
                         phase.c2 * au1 + phase.c2 * au2;
  return {-penalty, RewardBranch::penalty};
}

DockingEnv::DockingEnv(SimConfig sim, CameraModel cam, MarkerLayout layout,
                       DetectorNoise noise, EpisodeConfig episode,
                       ActionTable actions)
    : sim_(sim),
      cam_(cam),
      layout_(layout),
      noise_(noise),
      episode_(episode),
      actions_(std::move(actions)),
      anchors_(goal_anchor_values(layout_, cam_, sim_)) {
  if (actions_.empty()) {
    throw std::invalid_argument("DockingEnv: empty action table");
  }
  for (const auto& a : actions_) {
    if (a.v < 0.0 || a.v > sim_.v_max || std::abs(a.omega) > sim_.omega_max + 1e-12) {
      throw std::invalid_argument("DockingEnv: action outside SimConfig bounds");
    }
  }
}

MarkerObservation DockingEnv::observe(std::mt19937_64& rng) {
  MarkerObservation obs = project_markers(pose_, layout_, cam_);
  obs = apply_noise(obs, noise_, cam_, rng);
  // A missed marker repeats its last known center so the state does not jump.
  if (!obs.in_view1) {
    obs.u1 = last_obs_.u1;
    obs.v1 = last_obs_.v1;
  }
  if (!obs.in_view2) {
    obs.u2 = last_obs_.u2;
    obs.v2 = last_obs_.v2;
  }
  last_obs_ = obs;
  return obs;
}

ObservationStack DockingEnv::reset(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-episode_.x_range, episode_.x_range);
  std::uniform_real_distribution<double> uy(-episode_.y_range, episode_.y_range);
  std::uniform_real_distribution<double> ut(-episode_.theta_range, episode_.theta_range);
  for (int attempt = 0; attempt < episode_.reset_retries; ++attempt) {
    const Pose candidate{ux(rng), uy(rng), ut(rng)};
    const MarkerObservation probe = project_markers(candidate, layout_, cam_);
    if (probe.in_view1 && probe.in_view2) {
      return reset_to(candidate, rng);
    }
  }
  throw std::runtime_error(
      "DockingEnv::reset: no in-view initial pose found; "
      "check camera/episode configuration");
}

ObservationStack DockingEnv::reset_to(const Pose& pose, std::mt19937_64& rng) {
  const MarkerObservation probe = project_markers(pose, layout_, cam_);
  if (!probe.in_view1 || !probe.in_view2) {
    throw std::runtime_error("DockingEnv::reset_to: initial pose out of view");
  }
  pose_ = pose;
  pose_.theta = normalize_angle(pose_.theta);
  steps_ = 0;
  done_ = false;
  trace_.clear();
  last_obs_ = probe;  // seed for the repeat-last-center policy
  const MarkerObservation first = observe(rng);
  stack_.fill(first);
  trace_.push_back({0, pose_, -1, 0.0, first});
  return stack_;
}

StepResult DockingEnv::step(int action_id, std::mt19937_64& rng) {
  if (done_) {
    throw std::logic_error("DockingEnv::step: episode already finished");
  }
  if (action_id < 0 || static_cast<size_t>(action_id) >= actions_.size()) {
    throw std::out_of_range("DockingEnv::step: bad action id");
  }

  pose_ = dockrl::step(pose_, actions_[action_id], sim_.dt);
  const MarkerObservation obs = observe(rng);
  const RewardValue reward =
      compute_reward(obs, pose_, phase_, anchors_, sim_.y_goal);
  stack_.push(obs);
  ++steps_;

  StepResult result;
  result.reward = reward.value;
  result.branch = reward.branch;
  if (is_done(pose_, sim_)) {
    result.outcome = StepOutcome::reached_goal;
  } else if (!obs.in_view1 && !obs.in_view2) {
    result.outcome = StepOutcome::markers_lost;
  } else if (steps_ >= episode_.max_steps) {
    result.outcome = StepOutcome::timed_out;
  }
  result.done = result.outcome != StepOutcome::running;
  result.state = stack_;
  done_ = result.done;
  trace_.push_back({steps_, pose_, action_id, reward.value, obs});
  return result;
}

}  // namespace dockrl
