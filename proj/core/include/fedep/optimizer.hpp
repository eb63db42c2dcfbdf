#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fedep {

enum class OptimizerKind { kSgdMomentum, kAdagrad, kAdam };

struct OptimizerHyper {
  double lr = 1.0;  // the external damping scale is separate
  double momentum = 0.0;
  double adagrad_tau = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

/// Adaptive first-order transform applied to natural-parameter deltas, which
/// the protocol treats as gradients. Each parameter stream (eta or lam, per
/// server or per stateful client) owns one instance; slot dimensions are
/// fixed by the first apply.
class OptimizerState {
 public:
  OptimizerState() = default;
  OptimizerState(OptimizerKind kind, OptimizerHyper hyper)
      : kind_(kind), hyper_(hyper) {}

  /// sgd-momentum: v <- m v + g, returns lr v
  /// adagrad:      G <- G + g^2, returns lr g / (sqrt(G) + tau)
  /// adam:         bias-corrected moments, returns lr m^ / (sqrt(v^) + eps)
  std::vector<double> apply(const std::vector<double>& g);

  /// Zeroes accumulators and the step counter; hyperparameters survive.
  void reset();

  OptimizerKind kind() const { return kind_; }
  const OptimizerHyper& hyper() const { return hyper_; }
  std::int64_t steps() const { return steps_; }

  // Checkpoint access.
  const std::vector<double>& slot0() const { return slot0_; }
  const std::vector<double>& slot1() const { return slot1_; }
  void restore(std::vector<double> slot0, std::vector<double> slot1,
               std::int64_t steps);

 private:
  OptimizerKind kind_ = OptimizerKind::kSgdMomentum;
  OptimizerHyper hyper_;
  std::vector<double> slot0_;  // momentum buffer / squared-sum / first moment
  std::vector<double> slot1_;  // adam second moment
  std::int64_t steps_ = 0;
};

/// The identity transform: sgd-momentum with m = 0, lr = 1. Composed with
/// damping this reproduces the undamped update algebra exactly.
OptimizerState identity_optimizer();

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& s);

}  // namespace fedep
