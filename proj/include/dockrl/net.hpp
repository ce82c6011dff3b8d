#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dockrl/env.hpp"
#include "dockrl/sim.hpp"

namespace dockrl {

// Dual-head Q network. The observation head is 12 -> 16 (ReLU) -> 32, the
// action head is 2 -> 32, the two 32-wide pre-activations are summed, passed
// through a shared ReLU and a final linear 32 -> 1 layer. Summing the heads
// before the nonlinearity is what lets the Q value couple state and action;
// summing after their own ReLUs would make Q additively separable and the
// greedy action state-independent.
inline constexpr int kObsDim = 12;
inline constexpr int kHid1 = 16;
inline constexpr int kHid2 = 32;
inline constexpr int kActDim = 2;

// Flat parameter block. Layout, in order, all matrices row-major:
//   W1 [16 x 12], b1 [16], W2 [32 x 16], b2 [32],
//   Wa [32 x 2],  ba [32], Wo [1 x 32],  bo [1]
struct QNetworkParams {
  static constexpr size_t kW1 = 0;
  static constexpr size_t kB1 = kW1 + kHid1 * kObsDim;
  static constexpr size_t kW2 = kB1 + kHid1;
  static constexpr size_t kB2 = kW2 + kHid2 * kHid1;
  static constexpr size_t kWa = kB2 + kHid2;
  static constexpr size_t kBa = kWa + kHid2 * kActDim;
  static constexpr size_t kWo = kBa + kHid2;
  static constexpr size_t kBo = kWo + kHid2;
  static constexpr size_t kCount = kBo + 1;

  std::vector<double> w = std::vector<double>(kCount, 0.0);
};

// He-style uniform initialization (scale sqrt(6 / fan_in) per layer, zero
// biases), fully determined by the rng state.
QNetworkParams init_network(std::mt19937_64& rng);

// Normalized 2-d action encoding fed to the action head.
inline std::array<double, 2> encode_action(const ControlAction& a,
                                           const SimConfig& cfg) {
  return {a.v / cfg.v_max, a.omega / cfg.omega_max};
}

// Q(s, a). Throws std::invalid_argument on non-finite input.
double q_forward(const QNetworkParams& params,
                 const std::array<double, kObsDim>& obs,
                 const std::array<double, kActDim>& action);

// d(loss)/d(parameter) for every parameter, where upstream = d(loss)/dq.
// Same layout as QNetworkParams::w.
std::vector<double> q_backward(const QNetworkParams& params,
                               const std::array<double, kObsDim>& obs,
                               const std::array<double, kActDim>& action,
                               double upstream);

struct OptimizerState {
  double alpha = 1e-3;
  double momentum = 0.0;                // 0 = plain SGD
  std::vector<double> velocity;         // allocated on first use
};

// In-place params -= alpha * grads (with optional heavy-ball momentum).
// Throws std::invalid_argument on shape mismatch.
void sgd_step(QNetworkParams& params, const std::vector<double>& grads,
              OptimizerState& opt);

// Greedy action: lowest-index maximizer of Q(s, .) over the table.
int argmax_action(const QNetworkParams& params,
                  const std::array<double, kObsDim>& obs,
                  const ActionTable& actions, const SimConfig& cfg);

// Versioned plain-text checkpoint; values are written as C hexfloats so the
// round-trip is bit-exact. Throws std::runtime_error on IO or format errors.
void save_checkpoint(const QNetworkParams& params, const std::string& path);
QNetworkParams load_checkpoint(const std::string& path);

}  // namespace dockrl
