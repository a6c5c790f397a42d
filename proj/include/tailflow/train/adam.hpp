#pragma once

#include <cmath>
#include <stdexcept>

#include "tailflow/types.hpp"

namespace tailflow {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Vec m, v;
  long t = 0;

  explicit AdamState(Eigen::Index n) : m(Vec::Zero(n)), v(Vec::Zero(n)) {}
};

/// One bias-corrected Adam update:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
inline void adam_step(Vec& params, ConstVecRef grads, AdamState& state,
                      const AdamConfig& cfg, double lr) {
  if (grads.size() != params.size() || state.m.size() != params.size())
    throw std::invalid_argument("adam_step: size mismatch");
  state.t += 1;
  state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * grads;
  state.v = cfg.beta2 * state.v.array() +
            (1.0 - cfg.beta2) * grads.array().square();
  const double mc = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
  const double vc = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
  const Vec update =
      (lr / mc) * state.m.array() /
      ((state.v.array() / vc).sqrt() + cfg.eps);
  if (!update.allFinite())
    throw std::runtime_error("adam_step: non-finite update");
  params -= update;
}

}  // namespace tailflow
