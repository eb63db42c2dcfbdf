#include "fedep/gaussian.hpp"

#include <cmath>

#include "fedep/errors.hpp"

namespace fedep {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw DimensionError(std::string(what) + " contains a non-finite entry");
    }
  }
}

void check_same_dim(const MeanFieldGaussian& a, const MeanFieldGaussian& b,
                    const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(op) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

}  // namespace

MeanFieldGaussian::MeanFieldGaussian(std::vector<double> eta_in,
                                     std::vector<double> lam_in)
    : eta(std::move(eta_in)), lam(std::move(lam_in)) {
  if (eta.empty() || eta.size() != lam.size()) {
    throw DimensionError("MeanFieldGaussian: eta/lam must be non-empty and "
                         "of equal length");
  }
  check_finite(eta, "eta");
  check_finite(lam, "lam");
}

MeanFieldGaussian MeanFieldGaussian::improper_uniform(std::size_t d) {
  if (d == 0) throw DimensionError("improper_uniform: dimension must be >= 1");
  return MeanFieldGaussian(std::vector<double>(d, 0.0),
                           std::vector<double>(d, 0.0));
}

GaussianDelta::GaussianDelta(std::vector<double> d_eta_in,
                             std::vector<double> d_lam_in)
    : d_eta(std::move(d_eta_in)), d_lam(std::move(d_lam_in)) {
  if (d_eta.size() != d_lam.size()) {
    throw DimensionError("GaussianDelta: d_eta/d_lam length mismatch");
  }
  check_finite(d_eta, "d_eta");
  check_finite(d_lam, "d_lam");
}

bool is_proper(const MeanFieldGaussian& g) {
  for (double l : g.lam) {
    if (!(l > 0.0)) return false;
  }
  return true;
}

MeanFieldGaussian product(const MeanFieldGaussian& a,
                          const MeanFieldGaussian& b) {
  check_same_dim(a, b, "product");
  std::vector<double> eta(a.dim()), lam(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    eta[i] = a.eta[i] + b.eta[i];
    lam[i] = a.lam[i] + b.lam[i];
  }
  return MeanFieldGaussian(std::move(eta), std::move(lam));
}

MeanFieldGaussian quotient(const MeanFieldGaussian& a,
                           const MeanFieldGaussian& b) {
  check_same_dim(a, b, "quotient");
  std::vector<double> eta(a.dim()), lam(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    eta[i] = a.eta[i] - b.eta[i];
    lam[i] = a.lam[i] - b.lam[i];
  }
  return MeanFieldGaussian(std::move(eta), std::move(lam));
}

MeanFieldGaussian power(const MeanFieldGaussian& a, double c) {
  std::vector<double> eta(a.dim()), lam(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    eta[i] = c * a.eta[i];
    lam[i] = c * a.lam[i];
  }
  return MeanFieldGaussian(std::move(eta), std::move(lam));
}

GaussianDelta delta_between(const MeanFieldGaussian& a,
                            const MeanFieldGaussian& b) {
  check_same_dim(a, b, "delta_between");
  std::vector<double> de(a.dim()), dl(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    de[i] = a.eta[i] - b.eta[i];
    dl[i] = a.lam[i] - b.lam[i];
  }
  return GaussianDelta(std::move(de), std::move(dl));
}

MeanFieldGaussian apply_delta(const MeanFieldGaussian& g,
                              const GaussianDelta& d, double scale) {
  if (g.dim() != d.dim()) {
    throw DimensionError("apply_delta: dimension mismatch");
  }
  std::vector<double> eta(g.dim()), lam(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    eta[i] = g.eta[i] + scale * d.d_eta[i];
    lam[i] = g.lam[i] + scale * d.d_lam[i];
  }
  return MeanFieldGaussian(std::move(eta), std::move(lam));
}

Moments to_moments(const MeanFieldGaussian& g) {
  if (!is_proper(g)) {
    throw NotProperError("to_moments: Gaussian has nonpositive precision");
  }
  Moments m;
  m.mu.resize(g.dim());
  m.var.resize(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    m.mu[i] = g.eta[i] / g.lam[i];
    m.var[i] = 1.0 / g.lam[i];
  }
  return m;
}

MeanFieldGaussian from_moments(const Moments& m) {
  if (m.mu.empty() || m.mu.size() != m.var.size()) {
    throw DimensionError("from_moments: mu/var must be non-empty and of "
                         "equal length");
  }
  std::vector<double> eta(m.mu.size()), lam(m.mu.size());
  for (std::size_t i = 0; i < m.mu.size(); ++i) {
    if (!(m.var[i] > 0.0)) {
      throw NotProperError("from_moments: variance must be positive");
    }
    lam[i] = 1.0 / m.var[i];
    eta[i] = m.mu[i] * lam[i];
  }
  return MeanFieldGaussian(std::move(eta), std::move(lam));
}

std::vector<double> mode(const MeanFieldGaussian& g) {
  if (!is_proper(g)) {
    throw NotProperError("mode: Gaussian has nonpositive precision");
  }
  std::vector<double> mu(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) mu[i] = g.eta[i] / g.lam[i];
  return mu;
}

std::vector<double> sample(const MeanFieldGaussian& g, Rng& rng) {
  if (!is_proper(g)) {
    throw NotProperError("sample: Gaussian has nonpositive precision");
  }
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    x[i] = g.eta[i] / g.lam[i] + rng.normal() / std::sqrt(g.lam[i]);
  }
  return x;
}

double log_density(const MeanFieldGaussian& g, const std::vector<double>& x) {
  if (!is_proper(g)) {
    throw NotProperError("log_density: Gaussian has nonpositive precision");
  }
  if (x.size() != g.dim()) {
    throw DimensionError("log_density: point dimension mismatch");
  }
  constexpr double kLog2Pi = 1.8378770664093454836;
  double acc = 0.0;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    double mu = g.eta[i] / g.lam[i];
    double r = x[i] - mu;
    acc += -0.5 * kLog2Pi + 0.5 * std::log(g.lam[i]) - 0.5 * g.lam[i] * r * r;
  }
  return acc;
}

}  // namespace fedep
