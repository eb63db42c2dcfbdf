#pragma once

#include <cstddef>
#include <vector>

#include "fedep/rng.hpp"

namespace fedep {

/// Diagonal (mean-field) Gaussian stored in natural parameters:
/// eta = precision-weighted mean, lam = diagonal precision. Products and
/// quotients of densities are additions and subtractions of these vectors,
/// so this is the message currency of the whole system. Entries of lam may
/// be zero or negative: cavities and update messages are legitimately
/// improper. Only moment and sampling operations require properness.
struct MeanFieldGaussian {
  std::vector<double> eta;
  std::vector<double> lam;

  MeanFieldGaussian() = default;
  /// Validates equal lengths, d >= 1, and finiteness of every entry.
  MeanFieldGaussian(std::vector<double> eta_in, std::vector<double> lam_in);

  std::size_t dim() const { return eta.size(); }

  /// eta = lam = 0: the multiplicative identity, e.g. an uninitialized site
  /// factor or a flat prior.
  static MeanFieldGaussian improper_uniform(std::size_t d);
};

/// Moment parameterization view; only constructible from a proper Gaussian.
struct Moments {
  std::vector<double> mu;
  std::vector<double> var;
};

/// Signed natural-parameter difference; the client-to-server update message.
struct GaussianDelta {
  std::vector<double> d_eta;
  std::vector<double> d_lam;

  GaussianDelta() = default;
  GaussianDelta(std::vector<double> d_eta_in, std::vector<double> d_lam_in);

  std::size_t dim() const { return d_eta.size(); }
};

/// True iff every precision entry is strictly positive.
bool is_proper(const MeanFieldGaussian& g);

/// Density product: (eta_a + eta_b, lam_a + lam_b).
MeanFieldGaussian product(const MeanFieldGaussian& a,
                          const MeanFieldGaussian& b);

/// Density quotient: (eta_a - eta_b, lam_a - lam_b). May be improper.
MeanFieldGaussian quotient(const MeanFieldGaussian& a,
                           const MeanFieldGaussian& b);

/// Density power: (c * eta, c * lam). power(a, 0) is the improper uniform.
MeanFieldGaussian power(const MeanFieldGaussian& a, double c);

/// The quotient a / b expressed as an update message.
GaussianDelta delta_between(const MeanFieldGaussian& a,
                            const MeanFieldGaussian& b);

/// Applies a (scaled) delta: (eta + scale * d_eta, lam + scale * d_lam).
MeanFieldGaussian apply_delta(const MeanFieldGaussian& g,
                              const GaussianDelta& d, double scale = 1.0);

/// mu = eta / lam, var = 1 / lam. Throws NotProperError on improper input.
Moments to_moments(const MeanFieldGaussian& g);

/// Inverse of to_moments; requires var > 0 elementwise.
MeanFieldGaussian from_moments(const Moments& m);

/// Posterior mode mu = eta / lam. Throws NotProperError on improper input.
std::vector<double> mode(const MeanFieldGaussian& g);

/// One draw mu + sigma .* z. Deterministic given the rng state.
std::vector<double> sample(const MeanFieldGaussian& g, Rng& rng);

/// Normalized log density at x; proper input only.
double log_density(const MeanFieldGaussian& g, const std::vector<double>& x);

}  // namespace fedep
