#pragma once

#include <string>
#include <vector>

#include "fedep/gaussian.hpp"
#include "fedep/model.hpp"
#include "fedep/rng.hpp"

namespace fedep {

enum class InferenceBackend {
  kExact,           // analytic diagonal projection (Gaussian client only)
  kMcmc,            // SGD sampling + moment matching
  kScaledIdentity,  // SGD mean + per-data-point scaled identity covariance
  kLaplace,         // SGD MAP + diagonal Fisher covariance
  kNgvi             // SGD MAP + natural-gradient covariance iteration
};

/// One client-local inference problem: approximate the tilted density
/// p_k(theta) * cavity(theta) with a proper mean-field Gaussian.
struct TiltedProblem {
  const ModelSpec* spec = nullptr;
  const DatasetShard* shard = nullptr;
  MeanFieldGaussian cavity;         // may be improper
  std::vector<double> init_theta;   // SGD warm start
};

struct InferenceConfig {
  InferenceBackend backend = InferenceBackend::kScaledIdentity;
  int epochs = 10;
  double client_lr = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  double alpha_cov = 5e-2;       // per-data-point covariance scale
  double mcmc_shrinkage = 1e-4;  // rho in [0, 1]
  int laplace_epochs = 5;
  int ngvi_iters = 5;    // T
  int ngvi_samples = 5;  // N
  double ngvi_beta = 0.99;

  void validate() const;
};

/// Result of a client inference call: the approximate tilted Gaussian plus
/// diagnostics the protocol forwards in its update message.
struct InferenceResult {
  MeanFieldGaussian q;
  double final_loss = 0.0;
  int floored_precisions = 0;  // entries clamped to the precision floor
};

/// Precision floor applied after subtractions/inversions so every backend
/// returns a proper Gaussian.
inline constexpr double kPrecisionFloor = 1e-12;

/// Negative log of the unnormalized tilted density:
/// nll(theta) + 0.5 theta' Lam_cav theta - eta_cav' theta.
double tilted_loss(const TiltedProblem& problem,
                   const std::vector<double>& theta);

/// Gradient of tilted_loss.
std::vector<double> tilted_grad(const TiltedProblem& problem,
                                const std::vector<double>& theta);

/// Sample mean / shrunk diagonal variance of a set of parameter vectors:
/// var_i = (1 - rho) s2_i + rho mean_j(s2_j), floored at kPrecisionFloor.
/// Sample variance uses the n-1 divisor. Requires >= 2 samples.
Moments moment_estimate(const std::vector<std::vector<double>>& samples,
                        double rho);

/// SGD sampling: one retained iterate per epoch, moment matching with
/// variance shrinkage. Requires cfg.epochs >= 2.
InferenceResult mcmc_infer(const TiltedProblem& problem,
                           const InferenceConfig& cfg, Rng& rng);

/// SGD sample mean with covariance (alpha_cov / |D_k|) I.
InferenceResult scaled_identity_infer(const TiltedProblem& problem,
                                      const InferenceConfig& cfg, Rng& rng);

/// SGD approximate MAP; precision = |D_k| * diag Fisher + cavity precision.
InferenceResult laplace_infer(const TiltedProblem& problem,
                              const InferenceConfig& cfg, Rng& rng);

/// SGD approximate MAP mean; covariance from the damped fixed-point
/// iteration s_t = beta s_{t-1} + (1-beta) F, Lam_t = |D_k| s_t + Lam_cav,
/// with F the diagonal Fisher averaged over parameter samples.
InferenceResult ngvi_infer(const TiltedProblem& problem,
                           const InferenceConfig& cfg, Rng& rng);

/// Analytic KL(p||q)-optimal diagonal projection of the exact tilted
/// Gaussian; Gaussian-client specs only.
InferenceResult exact_diag_infer(const TiltedProblem& problem);

/// Backend dispatch.
InferenceResult infer_tilted(const TiltedProblem& problem,
                             const InferenceConfig& cfg, Rng& rng);

std::string to_string(InferenceBackend backend);
InferenceBackend inference_backend_from_string(const std::string& s);

}  // namespace fedep
