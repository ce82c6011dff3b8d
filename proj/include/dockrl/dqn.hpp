#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "dockrl/env.hpp"
#include "dockrl/net.hpp"

namespace dockrl {

struct Transition {
  std::array<double, kObsDim> state{};
  int action_id = 0;
  double reward = 0.0;
  std::array<double, kObsDim> next_state{};
  bool done = false;
};

// Bounded FIFO of transitions with uniform sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void push(const Transition& t);
  std::vector<Transition> sample(size_t batch, std::mt19937_64& rng) const;
  void clear();

  size_t size() const { return data_.size(); }
  size_t capacity() const { return capacity_; }
  // Logical index: 0 = oldest surviving transition.
  const Transition& at(size_t i) const;

 private:
  size_t capacity_;
  size_t head_ = 0;  // insertion point once full
  std::vector<Transition> data_;
};

struct TrainerConfig {
  double gamma = 0.99;
  double tau = 0.005;
  int batch_size = 64;
  size_t capacity = 50000;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_frac = 0.6;  // fraction of the phase budget, reset per phase
  int updates_per_step = 1;
  double alpha = 1e-3;
  double momentum = 0.0;
  int window = 50;  // trailing episodes used by phase_advance
  uint64_t seed = 1;
};

// Epsilon-greedy behavior policy over the action table.
int select_action(const QNetworkParams& primary,
                  const std::array<double, kObsDim>& obs, double eps,
                  const ActionTable& actions, const SimConfig& cfg,
                  std::mt19937_64& rng);

// Per-transition TD target r + gamma * Q_target(s', a*), where a* is chosen
// by the primary network (selection and evaluation are decoupled); done
// transitions bootstrap nothing and return r.
std::vector<double> double_dqn_target(const std::vector<Transition>& batch,
                                      const QNetworkParams& primary,
                                      const QNetworkParams& target,
                                      double gamma, const ActionTable& actions,
                                      const SimConfig& cfg);

struct TrainStepResult {
  bool updated = false;  // false = buffer still underfull, nothing happened
  double loss = 0.0;     // mean squared TD error over the sampled batch
};

// One uniform minibatch + one SGD step on the primary network only.
TrainStepResult train_step(const ReplayBuffer& buffer, QNetworkParams& primary,
                           const QNetworkParams& target,
                           const TrainerConfig& cfg, OptimizerState& opt,
                           const ActionTable& actions, const SimConfig& sim,
                           std::mt19937_64& rng);

// target <- tau * primary + (1 - tau) * target, elementwise.
void soft_update(const QNetworkParams& primary, QNetworkParams& target,
                 double tau);

struct EpisodeLog {
  int episode = 0;  // global, across phases
  int phase = 1;
  double episode_return = 0.0;
  double eps = 0.0;
  double loss_mean = 0.0;
};

struct CurriculumResult {
  QNetworkParams params;
  std::vector<QNetworkParams> phase_checkpoints;  // one per completed phase
  std::vector<EpisodeLog> log;
  bool completed = false;
  std::string abort_reason;
};

// Trains through the four phases in order, advancing when the trailing
// window mean return beats the phase threshold. Weights carry over between
// phases; the replay buffer is cleared at each phase boundary because stored
// rewards were produced by the previous phase's reward function; epsilon is
// re-annealed from eps_start in every phase. A phase that fails to advance
// within its episode budget stops the run with completed = false and the log
// intact. `progress`, when non-null, receives one line per phase transition.
CurriculumResult run_curriculum(const TrainerConfig& cfg,
                                const std::array<PhaseConfig, 4>& phases,
                                DockingEnv& env, std::mt19937_64& rng,
                                std::ostream* progress = nullptr);

// Writes the per-episode log as CSV (episode, phase, return, epsilon,
// loss_mean). Throws std::runtime_error on IO failure.
void write_training_log(const std::vector<EpisodeLog>& log,
                        const std::string& path);

}  // namespace dockrl
