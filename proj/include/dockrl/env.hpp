#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <vector>

#include "dockrl/camera.hpp"
#include "dockrl/sim.hpp"

namespace dockrl {

// The agent's state: the three most recent marker observations, oldest
// first, flattened to 12 scalars (u1, v1, u2, v2 per frame).
struct ObservationStack {
  std::array<MarkerObservation, 3> frames;

  std::array<double, 12> flatten() const {
    std::array<double, 12> out{};
    for (int i = 0; i < 3; ++i) {
      out[4 * i + 0] = frames[i].u1;
      out[4 * i + 1] = frames[i].v1;
      out[4 * i + 2] = frames[i].u2;
      out[4 * i + 3] = frames[i].v2;
    }
    return out;
  }

  void push(const MarkerObservation& obs) {
    frames[0] = frames[1];
    frames[1] = frames[2];
    frames[2] = obs;
  }

  void fill(const MarkerObservation& obs) { frames = {obs, obs, obs}; }
};

// One curriculum phase of the reward schedule. c1 is the half-width of the
// success band on |u|, c2 the weight of the lateral penalty terms, R the
// terminal success reward.
struct PhaseConfig {
  int phase_index = 1;  // 1..4
  double c1 = 0.05;
  double c2 = 2.0;
  double R = 0.0;
  double advance_threshold = 0.0;  // trailing-window mean return to beat
  int episode_budget = 4000;       // abort the phase past this many episodes
};

// The canonical four-phase curriculum constants.
std::array<PhaseConfig, 4> default_phases();

// Discrete action set; index in the vector is the action id.
using ActionTable = std::vector<ControlAction>;

// 9 actions: v in {0.1, 0.25, 0.4} m/s x omega in {-15, 0, +15} deg/s,
// ordered v-major then omega ascending.
ActionTable default_action_table();

struct EpisodeConfig {
  double x_range = 0.2;                                   // X ~ U(-r, r)
  double y_range = 0.2;                                   // Y ~ U(-r, r)
  double theta_range = 30.0 * M_PI / 180.0;               // theta ~ U(-r, r)
  int max_steps = 200;
  int reset_retries = 100;
};

// Reward branch taken for one step.
enum class RewardBranch { success, near_miss, penalty };

struct RewardValue {
  double value = 0.0;
  RewardBranch branch = RewardBranch::penalty;
};

// The phase reward:
//   R           if y >= y_goal and |u1|, |u2| < c1
//   0           if y >= y_goal and |u1|, |u2| < 2 c1
//   -(10|v1 - v1_0| + 10|v2 - v2_0| + c2|u1| + c2|u2|)   otherwise
RewardValue compute_reward(const MarkerObservation& obs, const Pose& pose,
                           const PhaseConfig& phase,
                           const std::pair<double, double>& anchors,
                           double y_goal);

// Advance when the trailing-window mean return strictly exceeds the
// threshold.
inline bool phase_advance(double window_mean, double threshold) {
  return window_mean > threshold;
}

enum class StepOutcome { running, reached_goal, markers_lost, timed_out };

struct StepResult {
  ObservationStack state;
  double reward = 0.0;
  bool done = false;
  StepOutcome outcome = StepOutcome::running;
  RewardBranch branch = RewardBranch::penalty;
};

// One CSV-exportable trace row per environment step.
struct TraceRow {
  int step = 0;
  Pose pose;
  int action_id = -1;
  double reward = 0.0;
  MarkerObservation obs;
};

// Episodic docking MDP: unicycle kinematics observed through the simulated
// marker detector, with the curriculum reward. Single-threaded mutable
// state; run several instances with independent rngs for parallelism.
class DockingEnv {
 public:
  DockingEnv(SimConfig sim, CameraModel cam, MarkerLayout layout,
             DetectorNoise noise, EpisodeConfig episode, ActionTable actions);

  // Samples an initial pose from the uniform ranges (resampling if the
  // markers start out of view) and fills the stack with the first
  // observation. Throws std::runtime_error when no in-view pose is found
  // within reset_retries draws.
  ObservationStack reset(std::mt19937_64& rng);

  // Deterministic reset to a caller-chosen pose (used by the evaluation
  // grid). Same in-view requirement.
  ObservationStack reset_to(const Pose& pose, std::mt19937_64& rng);

  // Advances one control period. Throws std::logic_error when called on a
  // finished episode and std::out_of_range on a bad action id.
  StepResult step(int action_id, std::mt19937_64& rng);

  void set_phase(const PhaseConfig& phase) { phase_ = phase; }
  const PhaseConfig& phase() const { return phase_; }

  const Pose& pose() const { return pose_; }
  const ObservationStack& state() const { return stack_; }
  int steps_taken() const { return steps_; }
  bool done() const { return done_; }
  const ActionTable& actions() const { return actions_; }
  const SimConfig& sim_config() const { return sim_; }
  const std::pair<double, double>& anchors() const { return anchors_; }
  const std::vector<TraceRow>& trace() const { return trace_; }

 private:
  MarkerObservation observe(std::mt19937_64& rng);

  SimConfig sim_;
  CameraModel cam_;
  MarkerLayout layout_;
  DetectorNoise noise_;
  EpisodeConfig episode_;
  ActionTable actions_;
  PhaseConfig phase_;
  std::pair<double, double> anchors_;

  Pose pose_;
  ObservationStack stack_;
  MarkerObservation last_obs_;
  int steps_ = 0;
  bool done_ = true;
  std::vector<TraceRow> trace_;
};

}  // namespace dockrl
