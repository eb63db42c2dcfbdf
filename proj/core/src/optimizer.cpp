#include "fedep/optimizer.hpp"

#include <cmath>

#include "fedep/errors.hpp"

namespace fedep {

std::vector<double> OptimizerState::apply(const std::vector<double>& g) {
  if (steps_ == 0 && slot0_.empty()) {
    slot0_.assign(g.size(), 0.0);
    if (kind_ == OptimizerKind::kAdam) slot1_.assign(g.size(), 0.0);
  }
  if (g.size() != slot0_.size()) {
    throw DimensionError("optimizer: gradient dimension changed after the "
                         "first apply");
  }
  ++steps_;
  std::vector<double> step(g.size());
  switch (kind_) {
    case OptimizerKind::kSgdMomentum:
      for (std::size_t i = 0; i < g.size(); ++i) {
        slot0_[i] = hyper_.momentum * slot0_[i] + g[i];
        step[i] = hyper_.lr * slot0_[i];
      }
      break;
    case OptimizerKind::kAdagrad:
      for (std::size_t i = 0; i < g.size(); ++i) {
        slot0_[i] += g[i] * g[i];
        step[i] = hyper_.lr * g[i] / (std::sqrt(slot0_[i]) + hyper_.adagrad_tau);
      }
      break;
    case OptimizerKind::kAdam: {
      const double b1 = hyper_.adam_beta1;
      const double b2 = hyper_.adam_beta2;
      const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
      const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
      for (std::size_t i = 0; i < g.size(); ++i) {
        slot0_[i] = b1 * slot0_[i] + (1.0 - b1) * g[i];
        slot1_[i] = b2 * slot1_[i] + (1.0 - b2) * g[i] * g[i];
        double mhat = slot0_[i] / c1;
        double vhat = slot1_[i] / c2;
        step[i] = hyper_.lr * mhat / (std::sqrt(vhat) + hyper_.adam_eps);
      }
      break;
    }
  }
  return step;
}

void OptimizerState::reset() {
  slot0_.clear();
  slot1_.clear();
  steps_ = 0;
}

void OptimizerState::restore(std::vector<double> slot0,
                             std::vector<double> slot1, std::int64_t steps) {
  slot0_ = std::move(slot0);
  slot1_ = std::move(slot1);
  steps_ = steps;
}

OptimizerState identity_optimizer() {
  OptimizerHyper h;
  h.lr = 1.0;
  h.momentum = 0.0;
  return OptimizerState(OptimizerKind::kSgdMomentum, h);
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgdMomentum: return "sgd-momentum";
    case OptimizerKind::kAdagrad: return "adagrad";
    case OptimizerKind::kAdam: return "adam";
  }
  return "?";
}

OptimizerKind optimizer_kind_from_string(const std::string& s) {
  if (s == "sgd-momentum") return OptimizerKind::kSgdMomentum;
  if (s == "adagrad") return OptimizerKind::kAdagrad;
  if (s == "adam") return OptimizerKind::kAdam;
  throw ConfigError("unknown optimizer kind: " + s);
}

}  // namespace fedep
