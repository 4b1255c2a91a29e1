#include <ardnet/likelihood.hpp>
#include <ardnet/sphere.hpp>

#include <cmath>
#include <numbers>

namespace ardnet {

double expected_ard(double degree, double share, double zeta, double eta, double theta, int dim) {
  using sphere::log_vmf_norm_const;
  const double r = combined_concentration(zeta, eta, std::cos(theta));
  const double log_ratio = log_vmf_norm_const(zeta, dim) + log_vmf_norm_const(eta, dim) -
                           log_vmf_norm_const(0.0, dim) - log_vmf_norm_const(r, dim);
  return std::max(degree * share * std::exp(log_ratio), kLambdaFloor);
}

Matrix log_lambda_matrix(const ModelParams& params, bool latent_model) {
  const auto m = params.log_d.size();
  const auto K = params.beta.size();
  Matrix out(m, K);
  if (!latent_model) {
    for (Eigen::Index k = 0; k < K; ++k) out.col(k) = params.log_d.array() + params.beta(k);
    return out;
  }
  const int dim = params.dim();
  const double log_c0 = sphere::log_vmf_norm_const(0.0, dim);
  const double log_czeta = sphere::log_vmf_norm_const(params.zeta, dim);
  const Matrix cosines = params.z * params.centers.transpose();
  for (Eigen::Index k = 0; k < K; ++k) {
    const double eta = params.eta(k);
    const double base = params.beta(k) + log_czeta + sphere::log_vmf_norm_const(eta, dim) - log_c0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double r = combined_concentration(params.zeta, eta, cosines(i, k));
      out(i, k) = params.log_d(i) + base - sphere::log_vmf_norm_const(r, dim);
    }
  }
  return out;
}

LogDensity ard_log_likelihood(const IntMatrix& y, const ModelParams& params, bool latent_model) {
  const Matrix log_lambda = log_lambda_matrix(params, latent_model);
  if (log_lambda.rows() != y.rows() || log_lambda.cols() != y.cols()) {
    throw ValidationError("ard_log_likelihood: count matrix shape does not match parameters");
  }
  const double log_floor = std::log(kLambdaFloor);
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index k = 0; k < y.cols(); ++k) {
      const double ll = std::max(log_lambda(i, k), log_floor);
      const double count = y(i, k);
      row += count * ll - std::exp(ll) - std::lgamma(count + 1.0);
    }
    total += row;
  }
  return {total};
}

double membership_log_density(const ArdDataset& data, const ModelParams& params) {
  if (!data.has_census()) return 0.0;
  const int dim = params.dim();
  double total = 0.0;
  for (int k = 0; k < data.K(); ++k) {
    const double log_c = sphere::log_vmf_norm_const(params.eta(k), dim);
    for (int r = 0; r < data.m(); ++r) {
      if (data.census_traits(data.ard_index[static_cast<std::size_t>(r)], k)) {
        total += log_c + params.eta(k) * params.z.row(r).dot(params.centers.row(k));
      }
    }
  }
  return total;
}

namespace {
double normal_log_density(double x, double mean, double var) {
  const double r = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * r * r / var;
}
}  // namespace

double log_prior(const ModelParams& params, const PriorConfig& priors) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (!(params.sigma2_d > 0) || !(params.sigma2_beta > 0)) return kNegInf;
  double total = 0.0;
  if (priors.latent_model) {
    const double lz = priors.zeta.log_density(params.zeta);
    if (!std::isfinite(lz)) return kNegInf;
    total += lz;
    for (Eigen::Index k = 0; k < params.eta.size(); ++k) {
      if (params.eta(k) < 0) return kNegInf;
      const double le = priors.eta.log_density(params.eta(k));
      if (!std::isfinite(le)) return kNegInf;
      total += le;
    }
  }
  for (Eigen::Index i = 0; i < params.log_d.size(); ++i) {
    total += normal_log_density(params.log_d(i), params.mu_d, params.sigma2_d);
  }
  for (Eigen::Index k = 0; k < params.beta.size(); ++k) {
    total += normal_log_density(params.beta(k), params.mu_beta, params.sigma2_beta);
  }
  total += priors.mu_d.log_density(params.mu_d) + priors.sigma2_d.log_density(params.sigma2_d);
  total += priors.mu_beta.log_density(params.mu_beta) + priors.sigma2_beta.log_density(params.sigma2_beta);
  return total;
}

LogDensity log_posterior(const ModelParams& params, const ArdDataset& data, const PriorConfig& priors) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (priors.latent_model && !(params.zeta > 0)) return {kNegInf};
  if ((params.eta.array() < 0).any()) return {kNegInf};
  const double prior = log_prior(params, priors);
  if (!std::isfinite(prior)) return {kNegInf};
  double total = prior + ard_log_likelihood(data.y, params, priors.latent_model).value;
  if (priors.latent_model) total += membership_log_density(data, params);
  return {total};
}

double latent_degree_factor(double zeta, int dim) {
  return std::exp(sphere::log_vmf_norm_const(0.0, dim) - sphere::log_vmf_norm_const(zeta, dim));
}

Vector degree_from_nu(const Vector& nu, double zeta, int n, int dim) {
  if (nu.size() == 0) return nu;
  const double mean_exp = nu.array().exp().mean();
  return (static_cast<double>(n) * mean_exp * latent_degree_factor(zeta, dim)) * nu.array().exp().matrix();
}

Vector nu_from_degree(const Vector& degrees, double zeta, int n, int dim) {
  if (degrees.size() == 0) return degrees;
  if ((degrees.array() <= 0).any() || !degrees.allFinite()) {
    throw ValidationError("nu_from_degree: degrees must be finite and > 0");
  }
  const double factor = static_cast<double>(n) * latent_degree_factor(zeta, dim);
  const Vector ratio = degrees / degrees(0);  // h_i
  // d_1 = exp(nu_1) * exp(nu_1) mean(h) * factor
  const double nu1 = 0.5 * std::log(degrees(0) / (factor * ratio.mean()));
  Vector nu = (nu1 + ratio.array().log()).matrix();

  const Vector back = degree_from_nu(nu, zeta, n, dim);
  const double residual = ((back - degrees).array().abs() / degrees.array()).maxCoeff();
  if (!(residual < 1e-10)) throw NumericalError("nu_from_degree: residual did not reach 1e-10");
  return nu;
}

}  // namespace ardnet
