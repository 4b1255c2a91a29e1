#pragma once

#include <ardnet/model.hpp>

#include <limits>

namespace ardnet {

constexpr double kLambdaFloor = 1e-12;

/// Natural-log density value; -infinity marks zero-probability configurations.
struct LogDensity {
  double value = 0.0;
  bool is_zero_probability() const { return value == -std::numeric_limits<double>::infinity(); }
};

/// Radius sqrt(zeta^2 + eta^2 + 2 zeta eta cos(theta)) of the combined vMF term.
inline double combined_concentration(double zeta, double eta, double cos_theta) {
  return std::sqrt(std::max(0.0, zeta * zeta + eta * eta + 2.0 * zeta * eta * cos_theta));
}

/// Expected ARD response lambda = d b C(zeta) C(eta) / (C(0) C(r)), floored at 1e-12.
double expected_ard(double degree, double share, double zeta, double eta, double theta, int dim);

/// log lambda_ik for every respondent and group (before the floor).
Matrix log_lambda_matrix(const ModelParams& params, bool latent_model = true);

/// Poisson log-likelihood including the log(y!) constant.
LogDensity ard_log_likelihood(const IntMatrix& y, const ModelParams& params, bool latent_model = true);

/// sum over respondents holding trait k of [log C(eta_k) + eta_k upsilon_k' z_i].
double membership_log_density(const ArdDataset& data, const ModelParams& params);

/// Likelihood plus every prior and hyperprior term.
LogDensity log_posterior(const ModelParams& params, const ArdDataset& data, const PriorConfig& priors);

/// Prior part of log_posterior (no likelihood, no membership term).
double log_prior(const ModelParams& params, const PriorConfig& priors);

/// C(0) / C(zeta); equals E[exp(zeta z'z')] for independent uniform positions.
double latent_degree_factor(double zeta, int dim);

/// d_i = n exp(nu_i) mean_j(exp(nu_j)) C(0)/C(zeta).
Vector degree_from_nu(const Vector& nu, double zeta, int n, int dim);

/// Inverse of degree_from_nu: h_i = d_i / d_1 reduces the system to one monotone
/// equation in nu_1, which has a closed-form root.
Vector nu_from_degree(const Vector& degrees, double zeta, int n, int dim);

}  // namespace ardnet
