#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "fedep/rng.hpp"

namespace fedep {

/// One labeled training point. For the analytic Gaussian client the shard
/// holds a single placeholder example; the likelihood ignores it.
struct Example {
  std::vector<double> x;
  int y = 0;
};

struct DatasetShard {
  std::vector<Example> examples;
  int client_id = 0;

  std::size_t size() const { return examples.size(); }
};

enum class ModelKind { kLogistic, kMlp, kGaussianClient };

/// A differentiable likelihood over a flat parameter vector theta.
///
/// Parameter layouts (no bias terms; append a constant feature if needed):
///   logistic, C == 2:  theta = w, length input_dim; P(y=1) = sigmoid(w.x)
///   logistic, C > 2:   theta = [W_0, ..., W_{C-1}] row-major, length C*n
///   mlp:               theta = [W1 rows (h x n), W2 rows (C x h)],
///                      logits = W2 tanh(W1 x)
///   gaussian-client:   theta is the random variable itself; the "likelihood"
///                      is the density N(theta; mu, sigma) of the toy study.
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  int input_dim = 0;
  int num_classes = 0;
  int hidden_dim = 0;

  // gaussian-client only.
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_inv;  // cached at construction

  static ModelSpec logistic(int input_dim, int num_classes);
  static ModelSpec mlp(int input_dim, int hidden_dim, int num_classes);
  /// Validates that sigma is symmetric positive definite.
  static ModelSpec gaussian_client(Eigen::VectorXd mu, Eigen::MatrixXd sigma);

  int param_dim() const;
  bool is_classifier() const { return kind != ModelKind::kGaussianClient; }
};

/// Negative log likelihood summed over the batch. For the Gaussian client:
/// 0.5 (theta-mu)' sigma^-1 (theta-mu), an additive constant dropped, batch
/// ignored.
double nll(const ModelSpec& spec, const std::vector<double>& theta,
           std::span<const Example> batch);

/// Exact gradient of nll.
std::vector<double> grad_nll(const ModelSpec& spec,
                             const std::vector<double>& theta,
                             std::span<const Example> batch);

/// out += scale * grad nll(batch). Allocation-free inner loop for SGD.
void accumulate_grad_nll(const ModelSpec& spec,
                         const std::vector<double>& theta,
                         std::span<const Example> batch, double scale,
                         std::vector<double>& out);

/// Class probability vector (sums to 1). Classifiers only.
std::vector<double> predict_proba(const ModelSpec& spec,
                                  const std::vector<double>& theta,
                                  const std::vector<double>& x);

/// Diagonal Fisher at theta, per-example scale: the average over x in the
/// shard of E_{y ~ p(y|x,theta)} (d/dtheta log p(y|theta,x))^2. The label
/// expectation is enumerated exactly for num_classes <= 16 and otherwise
/// estimated with a single sampled label per example.
std::vector<double> diag_fisher(const ModelSpec& spec,
                                const std::vector<double>& theta,
                                const DatasetShard& shard, Rng& rng);

namespace detail {
/// Monte-Carlo Fisher with a configurable number of label draws per example.
std::vector<double> diag_fisher_sampled(const ModelSpec& spec,
                                        const std::vector<double>& theta,
                                        const DatasetShard& shard, Rng& rng,
                                        int draws_per_example);
/// gradient of log p(y | x, theta) written into out (overwritten).
void score_grad(const ModelSpec& spec, const std::vector<double>& theta,
                const std::vector<double>& x, int y, std::vector<double>& out);
}  // namespace detail

/// CSV dataset: header "f0,...,f{n-1},label,client_id", one example per row.
struct CsvDataset {
  std::vector<DatasetShard> shards;  // grouped by client_id, ascending
  int input_dim = 0;
  int num_labels = 0;  // 1 + max label seen
};

CsvDataset load_csv_dataset(const std::string& path);

}  // namespace fedep
