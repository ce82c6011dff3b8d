#include "dockrl/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace dockrl {

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  }
  data_.reserve(std::min<size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(const Transition& t) {
  if (data_.size() < capacity_) {
    data_.push_back(t);
  } else {
    data_[head_] = t;  // overwrite the oldest
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(size_t i) const {
  if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
  return data_[(head_ + i) % data_.size()];
}

std::vector<Transition> ReplayBuffer::sample(size_t batch,
                                             std::mt19937_64& rng) const {
  if (batch > data_.size()) {
    throw std::invalid_argument("ReplayBuffer::sample: batch exceeds size");
  }
  std::uniform_int_distribution<size_t> pick(0, data_.size() - 1);
  std::vector<Transition> out;
  out.reserve(batch);
  for (size_t i = 0; i < batch; ++i) out.push_back(data_[pick(rng)]);
  return out;
}

void ReplayBuffer::clear() {
  data_.clear();
  head_ = 0;
}

int select_action(const QNetworkParams& primary,
                  const std::array<double, kObsDim>& obs, double eps,
                  const ActionTable& actions, const SimConfig& cfg,
                  std::mt19937_64& rng) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("select_action: eps outside [0, 1]");
  }
  if (eps > 0.0) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < eps) {
      std::uniform_int_distribution<size_t> pick(0, actions.size() - 1);
      return static_cast<int>(pick(rng));
    }
  }
  return argmax_action(primary, obs, actions, cfg);
}

std::vector<double> double_dqn_target(const std::vector<Transition>& batch,
                                      const QNetworkParams& primary,
                                      const QNetworkParams& target,
                                      double gamma, const ActionTable& actions,
                                      const SimConfig& cfg) {
  if (batch.empty()) {
    throw std::invalid_argument("double_dqn_target: empty batch");
  }
  std::vector<double> targets;
  targets.reserve(batch.size());
  for (const auto& t : batch) {
    if (t.done) {
      targets.push_back(t.reward);
      continue;
    }
    const int best = argmax_action(primary, t.next_state, actions, cfg);
    const double q_eval =
        q_forward(target, t.next_state, encode_action(actions[best], cfg));
    targets.push_back(t.reward + gamma * q_eval);
  }
  return targets;
}

TrainStepResult train_step(const ReplayBuffer& buffer, QNetworkParams& primary,
                           const QNetworkParams& target,
                           const TrainerConfig& cfg, OptimizerState& opt,
                           const ActionTable& actions, const SimConfig& sim,
                           std::mt19937_64& rng) {
  TrainStepResult result;
  if (buffer.size() < static_cast<size_t>(cfg.batch_size)) {
    return result;  // underfull: skip, report as not updated
  }
  const std::vector<Transition> batch = buffer.sample(cfg.batch_size, rng);
  const std::vector<double> targets =
      double_dqn_target(batch, primary, target, cfg.gamma, actions, sim);

  std::vector<double> grad(QNetworkParams::kCount, 0.0);
  double loss = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (size_t i = 0; i < batch.size(); ++i) {
    const auto act = encode_action(actions[batch[i].action_id], sim);
    const double q = q_forward(primary, batch[i].state, act);
    const double err = q - targets[i];
    loss += err * err * inv_batch;
    // d/dq of mean squared TD error
    const double upstream = 2.0 * err * inv_batch;
    const std::vector<double> g =
        q_backward(primary, batch[i].state, act, upstream);
    for (size_t k = 0; k < grad.size(); ++k) grad[k] += g[k];
  }
  sgd_step(primary, grad, opt);
  result.updated = true;
  result.loss = loss;
  return result;
}

void soft_update(const QNetworkParams& primary, QNetworkParams& target,
                 double tau) {
  if (primary.w.size() != target.w.size()) {
    throw std::invalid_argument("soft_update: shape mismatch");
  }
  for (size_t i = 0; i < target.w.size(); ++i) {
    target.w[i] = tau * primary.w[i] + (1.0 - tau) * target.w[i];
  }
}

CurriculumResult run_curriculum(const TrainerConfig& cfg,
                                const std::array<PhaseConfig, 4>& phases,
                                DockingEnv& env, std::mt19937_64& rng,
                                std::ostream* progress) {
  CurriculumResult result;
  result.params = init_network(rng);
  QNetworkParams target = result.params;
  ReplayBuffer buffer(cfg.capacity);
  OptimizerState opt{cfg.alpha, cfg.momentum, {}};

  int global_episode = 0;
  for (const PhaseConfig& phase : phases) {
    env.set_phase(phase);
    buffer.clear();
    std::deque<double> window;
    bool advanced = false;

    const double decay_span =
        std::max(1.0, cfg.eps_decay_frac * phase.episode_budget);
    for (int ep = 0; ep < phase.episode_budget; ++ep) {
      const double frac = std::min(1.0, ep / decay_span);
      const double eps = cfg.eps_start + frac * (cfg.eps_end - cfg.eps_start);

      ObservationStack state = env.reset(rng);
      double episode_return = 0.0;
      double loss_sum = 0.0;
      int loss_count = 0;
      while (!env.done()) {
        const std::array<double, kObsDim> s = state.flatten();
        const int action = select_action(result.params, s, eps,
                                         env.actions(), env.sim_config(), rng);
        const StepResult sr = env.step(action, rng);
        buffer.push({s, action, sr.reward, sr.state.flatten(), sr.done});
        for (int u = 0; u < cfg.updates_per_step; ++u) {
          const TrainStepResult ts =
              train_step(buffer, result.params, target, cfg, opt,
                         env.actions(), env.sim_config(), rng);
          if (ts.updated) {
            soft_update(result.params, target, cfg.tau);
            loss_sum += ts.loss;
            ++loss_count;
          }
        }
        state = sr.state;
        episode_return += sr.reward;
      }

      result.log.push_back({global_episode++, phase.phase_index, episode_return,
                            eps, loss_count ? loss_sum / loss_count : 0.0});
      window.push_back(episode_return);
      if (static_cast<int>(window.size()) > cfg.window) window.pop_front();
      if (static_cast<int>(window.size()) == cfg.window) {
        const double mean =
            std::accumulate(window.begin(), window.end(), 0.0) / window.size();
        if (phase_advance(mean, phase.advance_threshold)) {
          advanced = true;
          if (progress) {
            *progress << "phase " << phase.phase_index << " advanced after "
                      << (ep + 1) << " episodes (window mean " << mean << ")\n";
          }
          break;
        }
      }
    }

    if (!advanced) {
      result.abort_reason =
          "phase " + std::to_string(phase.phase_index) +
          " failed to reach its advance threshold within its episode budget";
      if (progress) *progress << "aborted: " << result.abort_reason << "\n";
      return result;
    }
    result.phase_checkpoints.push_back(result.params);
  }
  result.completed = true;
  return result;
}

void write_training_log(const std::vector<EpisodeLog>& log,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_training_log: cannot open " + path);
  out << "episode,phase,return,epsilon,loss_mean\n";
  char buf[160];
  for (const auto& row : log) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", row.episode,
                  row.phase, row.episode_return, row.eps, row.loss_mean);
    out << buf;
  }
  if (!out) throw std::runtime_error("write_training_log: write failed for " + path);
}

}  // namespace dockrl
