#include "dockrl/net.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dockrl {

namespace {

struct Activations {
  std::array<double, kHid1> h1_pre;
  std::array<double, kHid1> h1;
  std::array<double, kHid2> c_pre;  // obs-head + action-head pre-activations
  std::array<double, kHid2> c;
  double q = 0.0;
};

Activations forward_pass(const QNetworkParams& p,
                         const std::array<double, kObsDim>& obs,
                         const std::array<double, kActDim>& act) {
  const double* w = p.w.data();
  Activations s;
  for (int i = 0; i < kHid1; ++i) {
    double acc = w[QNetworkParams::kB1 + i];
    const double* row = w + QNetworkParams::kW1 + i * kObsDim;
    for (int j = 0; j < kObsDim; ++j) acc += row[j] * obs[j];
    s.h1_pre[i] = acc;
    s.h1[i] = acc > 0.0 ? acc : 0.0;
  }
  for (int k = 0; k < kHid2; ++k) {
    double acc = w[QNetworkParams::kB2 + k] + w[QNetworkParams::kBa + k];
    const double* row = w + QNetworkParams::kW2 + k * kHid1;
    for (int i = 0; i < kHid1; ++i) acc += row[i] * s.h1[i];
    const double* arow = w + QNetworkParams::kWa + k * kActDim;
    for (int m = 0; m < kActDim; ++m) acc += arow[m] * act[m];
    s.c_pre[k] = acc;
    s.c[k] = acc > 0.0 ? acc : 0.0;
  }
  double q = w[QNetworkParams::kBo];
  for (int k = 0; k < kHid2; ++k) q += w[QNetworkParams::kWo + k] * s.c[k];
  s.q = q;
  return s;
}

void check_finite(const std::array<double, kObsDim>& obs,
                  const std::array<double, kActDim>& act) {
  for (double x : obs) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_forward: non-finite observation");
  }
  for (double x : act) {
    if (!std::isfinite(x)) throw std::invalid_argument("q_forward: non-finite action");
  }
}

}  // namespace

QNetworkParams init_network(std::mt19937_64& rng) {
  QNetworkParams p;
  auto fill = [&](size_t offset, size_t count, int fan_in) {
    const double limit = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (size_t i = 0; i < count; ++i) p.w[offset + i] = dist(rng);
  };
  fill(QNetworkParams::kW1, kHid1 * kObsDim, kObsDim);
  fill(QNetworkParams::kW2, kHid2 * kHid1, kHid1);
  fill(QNetworkParams::kWa, kHid2 * kActDim, kActDim);
  fill(QNetworkParams::kWo, kHid2, kHid2);
  // biases stay zero
  return p;
}

double q_forward(const QNetworkParams& params,
                 const std::array<double, kObsDim>& obs,
                 const std::array<double, kActDim>& action) {
  check_finite(obs, action);
  return forward_pass(params, obs, action).q;
}

std::vector<double> q_backward(const QNetworkParams& params,
                               const std::array<double, kObsDim>& obs,
                               const std::array<double, kActDim>& action,
                               double upstream) {
  check_finite(obs, action);
  const Activations s = forward_pass(params, obs, action);
  std::vector<double> g(QNetworkParams::kCount, 0.0);
  const double* w = params.w.data();

  g[QNetworkParams::kBo] = upstream;
  std::array<double, kHid2> dc_pre;
  for (int k = 0; k < kHid2; ++k) {
    g[QNetworkParams::kWo + k] = upstream * s.c[k];
    const double dc = upstream * w[QNetworkParams::kWo + k];
    dc_pre[k] = s.c_pre[k] > 0.0 ? dc : 0.0;
  }

  std::array<double, kHid1> dh1{};
  for (int k = 0; k < kHid2; ++k) {
    const double d = dc_pre[k];
    g[QNetworkParams::kB2 + k] = d;
    g[QNetworkParams::kBa + k] = d;
    double* w2row = g.data() + QNetworkParams::kW2 + k * kHid1;
    const double* w2 = w + QNetworkParams::kW2 + k * kHid1;
    for (int i = 0; i < kHid1; ++i) {
      w2row[i] = d * s.h1[i];
      dh1[i] += d * w2[i];
    }
    double* warow = g.data() + QNetworkParams::kWa + k * kActDim;
    for (int m = 0; m < kActDim; ++m) warow[m] = d * action[m];
  }

  for (int i = 0; i < kHid1; ++i) {
    const double d = s.h1_pre[i] > 0.0 ? dh1[i] : 0.0;
    g[QNetworkParams::kB1 + i] = d;
    double* w1row = g.data() + QNetworkParams::kW1 + i * kObsDim;
    for (int j = 0; j < kObsDim; ++j) w1row[j] = d * obs[j];
  }
  return g;
}

void sgd_step(QNetworkParams& params, const std::vector<double>& grads,
              OptimizerState& opt) {
  if (grads.size() != params.w.size()) {
    throw std::invalid_argument("sgd_step: gradient/parameter shape mismatch");
  }
  if (opt.momentum > 0.0) {
    if (opt.velocity.empty()) opt.velocity.assign(params.w.size(), 0.0);
    if (opt.velocity.size() != params.w.size()) {
      throw std::invalid_argument("sgd_step: velocity shape mismatch");
    }
    for (size_t i = 0; i < params.w.size(); ++i) {
      opt.velocity[i] = opt.momentum * opt.velocity[i] + grads[i];
      params.w[i] -= opt.alpha * opt.velocity[i];
    }
  } else {
    for (size_t i = 0; i < params.w.size(); ++i) {
      params.w[i] -= opt.alpha * grads[i];
    }
  }
}

int argmax_action(const QNetworkParams& params,
                  const std::array<double, kObsDim>& obs,
                  const ActionTable& actions, const SimConfig& cfg) {
  if (actions.empty()) {
    throw std::invalid_argument("argmax_action: empty action table");
  }
  int best = 0;
  double best_q = q_forward(params, obs, encode_action(actions[0], cfg));
  for (size_t i = 1; i < actions.size(); ++i) {
    const double q = q_forward(params, obs, encode_action(actions[i], cfg));
    if (q > best_q) {  // ties keep the lowest index
      best_q = q;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void save_checkpoint(const QNetworkParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << "dockrl-qnet 1\n" << params.w.size() << "\n";
  char buf[64];
  for (double v : params.w) {
    std::snprintf(buf, sizeof(buf), "%a\n", v);
    out << buf;
  }
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

QNetworkParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "dockrl-qnet" || version != 1) {
    throw std::runtime_error("load_checkpoint: bad header in " + path);
  }
  size_t count = 0;
  in >> count;
  if (!in || count != QNetworkParams::kCount) {
    throw std::runtime_error("load_checkpoint: unexpected parameter count in " + path);
  }
  QNetworkParams p;
  std::string token;
  for (size_t i = 0; i < count; ++i) {
    if (!(in >> token)) {
      throw std::runtime_error("load_checkpoint: truncated file " + path);
    }
    char* end = nullptr;
    p.w[i] = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
      throw std::runtime_error("load_checkpoint: bad value in " + path);
    }
  }
  return p;
}

}  // namespace dockrl
