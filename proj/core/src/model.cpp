#include "fedep/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fedep/errors.hpp"

namespace fedep {

namespace {

constexpr int kEnumerationMaxClasses = 16;

void check_theta(const ModelSpec& spec, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != spec.param_dim()) {
    throw DimensionError("theta length " + std::to_string(theta.size()) +
                         " does not match param_dim " +
                         std::to_string(spec.param_dim()));
  }
}

void check_example(const ModelSpec& spec, const Example& e) {
  if (static_cast<int>(e.x.size()) != spec.input_dim) {
    throw DimensionError("example feature length mismatch");
  }
  if (e.y < 0 || e.y >= spec.num_classes) {
    throw DimensionError("example label out of range");
  }
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// logits -> probabilities, numerically stable.
void softmax_inplace(std::vector<double>& logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - mx);
    z += l;
  }
  for (double& l : logits) l /= z;
}

std::vector<double> forward_logits(const ModelSpec& spec,
                                   const std::vector<double>& theta,
                                   const std::vector<double>& x,
                                   std::vector<double>* hidden_out) {
  const int n = spec.input_dim;
  if (spec.kind == ModelKind::kLogistic) {
    if (spec.num_classes == 2) {
      double z = 0.0;
      for (int j = 0; j < n; ++j) z += theta[j] * x[j];
      return {0.0, z};
    }
    std::vector<double> logits(spec.num_classes, 0.0);
    for (int c = 0; c < spec.num_classes; ++c) {
      const double* w = theta.data() + static_cast<std::size_t>(c) * n;
      double z = 0.0;
      for (int j = 0; j < n; ++j) z += w[j] * x[j];
      logits[c] = z;
    }
    return logits;
  }
  // MLP: logits = W2 tanh(W1 x)
  const int h = spec.hidden_dim;
  std::vector<double> hid(h);
  for (int i = 0; i < h; ++i) {
    const double* w = theta.data() + static_cast<std::size_t>(i) * n;
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += w[j] * x[j];
    hid[i] = std::tanh(z);
  }
  const double* w2 = theta.data() + static_cast<std::size_t>(h) * n;
  std::vector<double> logits(spec.num_classes, 0.0);
  for (int c = 0; c < spec.num_classes; ++c) {
    double z = 0.0;
    for (int i = 0; i < h; ++i) z += w2[static_cast<std::size_t>(c) * h + i] * hid[i];
    logits[c] = z;
  }
  if (hidden_out) *hidden_out = std::move(hid);
  return logits;
}

/// Adds scale * d(-log p(y|x))/dtheta for one example.
void accumulate_example_grad(const ModelSpec& spec,
                             const std::vector<double>& theta,
                             const Example& e, double scale,
                             std::vector<double>& out) {
  const int n = spec.input_dim;
  if (spec.kind == ModelKind::kLogistic && spec.num_classes == 2) {
    double z = 0.0;
    for (int j = 0; j < n; ++j) z += theta[j] * e.x[j];
    double p = sigmoid(z);
    double coeff = scale * (p - (e.y == 1 ? 1.0 : 0.0));
    for (int j = 0; j < n; ++j) out[j] += coeff * e.x[j];
    return;
  }
  if (spec.kind == ModelKind::kLogistic) {
    std::vector<double> p = forward_logits(spec, theta, e.x, nullptr);
    softmax_inplace(p);
    for (int c = 0; c < spec.num_classes; ++c) {
      double coeff = scale * (p[c] - (c == e.y ? 1.0 : 0.0));
      double* g = out.data() + static_cast<std::size_t>(c) * n;
      for (int j = 0; j < n; ++j) g[j] += coeff * e.x[j];
    }
    return;
  }
  // MLP backprop.
  const int h = spec.hidden_dim;
  const int C = spec.num_classes;
  std::vector<double> hid;
  std::vector<double> p = forward_logits(spec, theta, e.x, &hid);
  softmax_inplace(p);
  const double* w2 = theta.data() + static_cast<std::size_t>(h) * n;
  double* g2 = out.data() + static_cast<std::size_t>(h) * n;
  std::vector<double> dhid(h, 0.0);
  for (int c = 0; c < C; ++c) {
    double dl = scale * (p[c] - (c == e.y ? 1.0 : 0.0));
    for (int i = 0; i < h; ++i) {
      g2[static_cast<std::size_t>(c) * h + i] += dl * hid[i];
      dhid[i] += dl * w2[static_cast<std::size_t>(c) * h + i];
    }
  }
  for (int i = 0; i < h; ++i) {
    double dpre = dhid[i] * (1.0 - hid[i] * hid[i]);
    double* g1 = out.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) g1[j] += dpre * e.x[j];
  }
}

}  // namespace

ModelSpec ModelSpec::logistic(int input_dim, int num_classes) {
  if (input_dim < 1 || num_classes < 2) {
    throw DimensionError("logistic: need input_dim >= 1, num_classes >= 2");
  }
  ModelSpec s;
  s.kind = ModelKind::kLogistic;
  s.input_dim = input_dim;
  s.num_classes = num_classes;
  return s;
}

ModelSpec ModelSpec::mlp(int input_dim, int hidden_dim, int num_classes) {
  if (input_dim < 1 || hidden_dim < 1 || num_classes < 2) {
    throw DimensionError("mlp: need positive dims and num_classes >= 2");
  }
  ModelSpec s;
  s.kind = ModelKind::kMlp;
  s.input_dim = input_dim;
  s.num_classes = num_classes;
  s.hidden_dim = hidden_dim;
  return s;
}

ModelSpec ModelSpec::gaussian_client(Eigen::VectorXd mu,
                                     Eigen::MatrixXd sigma) {
  if (mu.size() < 1 || sigma.rows() != mu.size() ||
      sigma.cols() != mu.size()) {
    throw DimensionError("gaussian_client: sigma must be d x d");
  }
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw DimensionError("gaussian_client: sigma must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DimensionError("gaussian_client: sigma must be positive definite");
  }
  ModelSpec s;
  s.kind = ModelKind::kGaussianClient;
  s.input_dim = 0;
  s.num_classes = 0;
  s.mu = std::move(mu);
  s.sigma = std::move(sigma);
  s.sigma_inv = llt.solve(
      Eigen::MatrixXd::Identity(s.mu.size(), s.mu.size()));
  return s;
}

int ModelSpec::param_dim() const {
  switch (kind) {
    case ModelKind::kLogistic:
      return num_classes == 2 ? input_dim : num_classes * input_dim;
    case ModelKind::kMlp:
      return hidden_dim * input_dim + num_classes * hidden_dim;
    case ModelKind::kGaussianClient:
      return static_cast<int>(mu.size());
  }
  return 0;
}

double nll(const ModelSpec& spec, const std::vector<double>& theta,
           std::span<const Example> batch) {
  check_theta(spec, theta);
  if (spec.kind == ModelKind::kGaussianClient) {
    Eigen::Map<const Eigen::VectorXd> t(theta.data(),
                                        static_cast<long>(theta.size()));
    Eigen::VectorXd r = t - spec.mu;
    return 0.5 * r.dot(spec.sigma_inv * r);
  }
  double acc = 0.0;
  for (const Example& e : batch) {
    check_example(spec, e);
    if (spec.kind == ModelKind::kLogistic && spec.num_classes == 2) {
      double z = 0.0;
      for (int j = 0; j < spec.input_dim; ++j) z += theta[j] * e.x[j];
      // -log p(y): softplus form, stable for large |z|.
      double s = e.y == 1 ? -z : z;
      acc += s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    } else {
      std::vector<double> logits = forward_logits(spec, theta, e.x, nullptr);
      double mx = *std::max_element(logits.begin(), logits.end());
      double z = 0.0;
      for (double l : logits) z += std::exp(l - mx);
      acc += mx + std::log(z) - logits[e.y];
    }
  }
  return acc;
}

void accumulate_grad_nll(const ModelSpec& spec,
                         const std::vector<double>& theta,
                         std::span<const Example> batch, double scale,
                         std::vector<double>& out) {
  check_theta(spec, theta);
  if (static_cast<int>(out.size()) != spec.param_dim()) {
    throw DimensionError("accumulate_grad_nll: bad output length");
  }
  if (spec.kind == ModelKind::kGaussianClient) {
    Eigen::Map<const Eigen::VectorXd> t(theta.data(),
                                        static_cast<long>(theta.size()));
    Eigen::VectorXd g = spec.sigma_inv * (t - spec.mu);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * g[i];
    return;
  }
  for (const Example& e : batch) {
    check_example(spec, e);
    accumulate_example_grad(spec, theta, e, scale, out);
  }
}

std::vector<double> grad_nll(const ModelSpec& spec,
                             const std::vector<double>& theta,
                             std::span<const Example> batch) {
  std::vector<double> g(spec.param_dim(), 0.0);
  accumulate_grad_nll(spec, theta, batch, 1.0, g);
  return g;
}

std::vector<double> predict_proba(const ModelSpec& spec,
                                  const std::vector<double>& theta,
                                  const std::vector<double>& x) {
  if (!spec.is_classifier()) {
    throw UnsupportedOperationError("predict_proba: classifier specs only");
  }
  check_theta(spec, theta);
  if (static_cast<int>(x.size()) != spec.input_dim) {
    throw DimensionError("predict_proba: feature length mismatch");
  }
  std::vector<double> logits = forward_logits(spec, theta, x, nullptr);
  softmax_inplace(logits);
  return logits;
}

namespace detail {

void score_grad(const ModelSpec& spec, const std::vector<double>& theta,
                const std::vector<double>& x, int y,
                std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  Example e{x, y};
  // d log p / d theta = -(d nll / d theta) for a single example.
  accumulate_example_grad(spec, theta, e, -1.0, out);
}

namespace {

std::vector<double> fisher_impl(const ModelSpec& spec,
                                const std::vector<double>& theta,
                                const DatasetShard& shard, Rng* rng,
                                int draws_per_example) {
  if (!spec.is_classifier()) {
    throw UnsupportedOperationError("diag_fisher: classifier specs only");
  }
  if (shard.examples.empty()) {
    throw DimensionError("diag_fisher: empty shard");
  }
  check_theta(spec, theta);
  const int d = spec.param_dim();
  std::vector<double> fisher(d, 0.0);
  std::vector<double> g(d, 0.0);
  for (const Example& e : shard.examples) {
    check_example(spec, e);
    std::vector<double> p = predict_proba(spec, theta, e.x);
    if (draws_per_example == 0) {
      // Exact expectation over the model's own label distribution.
      for (int y = 0; y < spec.num_classes; ++y) {
        score_grad(spec, theta, e.x, y, g);
        for (int i = 0; i < d; ++i) fisher[i] += p[y] * g[i] * g[i];
      }
    } else {
      for (int draw = 0; draw < draws_per_example; ++draw) {
        double u = rng->uniform();
        int y = 0;
        double cum = 0.0;
        for (int c = 0; c < spec.num_classes; ++c) {
          cum += p[c];
          if (u < cum || c == spec.num_classes - 1) {
            y = c;
            break;
          }
        }
        score_grad(spec, theta, e.x, y, g);
        for (int i = 0; i < d; ++i) {
          fisher[i] += g[i] * g[i] / draws_per_example;
        }
      }
    }
  }
  double inv_n = 1.0 / static_cast<double>(shard.examples.size());
  for (double& f : fisher) f *= inv_n;
  return fisher;
}

}  // namespace

std::vector<double> diag_fisher_sampled(const ModelSpec& spec,
                                        const std::vector<double>& theta,
                                        const DatasetShard& shard, Rng& rng,
                                        int draws_per_example) {
  if (draws_per_example < 1) {
    throw DimensionError("diag_fisher_sampled: draws_per_example >= 1");
  }
  return fisher_impl(spec, theta, shard, &rng, draws_per_example);
}

}  // namespace detail

std::vector<double> diag_fisher(const ModelSpec& spec,
                                const std::vector<double>& theta,
                                const DatasetShard& shard, Rng& rng) {
  if (spec.is_classifier() && spec.num_classes <= kEnumerationMaxClasses) {
    return detail::fisher_impl(spec, theta, shard, nullptr, 0);
  }
  return detail::fisher_impl(spec, theta, shard, &rng, 1);
}

CsvDataset load_csv_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty dataset file: " + path);

  // Parse and validate the header.
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
  }
  if (cols.size() < 3 || cols[cols.size() - 2] != "label" ||
      cols.back() != "client_id") {
    throw Error("dataset header must be f0..f{n-1},label,client_id");
  }
  const int n = static_cast<int>(cols.size()) - 2;
  for (int j = 0; j < n; ++j) {
    if (cols[j] != "f" + std::to_string(j)) {
      throw Error("unexpected feature column name: " + cols[j]);
    }
  }

  std::map<int, DatasetShard> by_client;
  int num_labels = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    Example e;
    e.x.reserve(n);
    for (int j = 0; j < n; ++j) {
      if (!std::getline(ss, tok, ',')) {
        throw Error("line " + std::to_string(line_no) + ": too few columns");
      }
      e.x.push_back(std::stod(tok));
    }
    if (!std::getline(ss, tok, ',')) {
      throw Error("line " + std::to_string(line_no) + ": missing label");
    }
    e.y = std::stoi(tok);
    if (e.y < 0) {
      throw Error("line " + std::to_string(line_no) + ": negative label");
    }
    num_labels = std::max(num_labels, e.y + 1);
    if (!std::getline(ss, tok, ',')) {
      throw Error("line " + std::to_string(line_no) + ": missing client_id");
    }
    int cid = std::stoi(tok);
    auto it = by_client.find(cid);
    if (it == by_client.end()) {
      DatasetShard s;
      s.client_id = cid;
      it = by_client.emplace(cid, std::move(s)).first;
    }
    it->second.examples.push_back(std::move(e));
  }

  CsvDataset ds;
  ds.input_dim = n;
  ds.num_labels = num_labels;
  for (auto& [cid, shard] : by_client) ds.shards.push_back(std::move(shard));
  if (ds.shards.empty()) throw Error("dataset has no examples: " + path);
  return ds;
}

}  // namespace fedep
