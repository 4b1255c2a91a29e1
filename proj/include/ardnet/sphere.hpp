#pragma once

// Hypersphere geometry and the von Mises-Fisher distribution.
//
// Dimension convention: `dim` is the number of ambient coordinates D, so the
// latent dimension p = 2 corresponds to unit vectors in R^3.

#include <ardnet/types.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <span>

namespace ardnet::sphere {

namespace detail {

// log of sum_k (x/2)^{2k} / (k! (nu+1)_k), the series of I_nu(x) with the
// leading (x/2)^nu / Gamma(nu+1) factored out. All terms are positive.
template <typename Scalar>
Scalar log_bessel_series_tail(Scalar nu, Scalar x) {
  const Scalar q = x * x / Scalar(4);
  Scalar term = 1, sum = 1;
  for (int k = 0; k < 5000; ++k) {
    term *= q / (Scalar(k + 1) * (Scalar(k + 1) + nu));
    sum += term;
    if (term < sum * std::numeric_limits<Scalar>::epsilon()) break;
  }
  return std::log(sum);
}

// log(e^{-x} I_nu(x) sqrt(2 pi x)) from the large-argument Hankel expansion.
// Terminates exactly for half-integer nu.
template <typename Scalar>
Scalar log_bessel_asymptotic_scaled(Scalar nu, Scalar x) {
  const Scalar mu = 4 * nu * nu;
  Scalar term = 1, sum = 1, prev = std::numeric_limits<Scalar>::max();
  for (int k = 1; k < 200; ++k) {
    const Scalar odd = Scalar(2 * k - 1);
    term *= -(mu - odd * odd) / (Scalar(k) * 8 * x);
    if (term == Scalar(0)) break;
    if (std::abs(term) > prev) break;  // divergent tail
    sum += term;
    prev = std::abs(term);
    if (prev < std::abs(sum) * std::numeric_limits<Scalar>::epsilon()) break;
  }
  return std::log(sum);
}

constexpr double kAsymptoticSwitch = 60.0;

}  // namespace detail

/// log I_nu(x) for nu >= 0, x >= 0, evaluated without overflow.
template <typename Scalar>
Scalar log_bessel_i(Scalar nu, Scalar x) {
  if (!(x >= 0) || !std::isfinite(x)) throw ValidationError("log_bessel_i: argument must be finite and >= 0");
  if (x == 0) return nu == 0 ? Scalar(0) : -std::numeric_limits<Scalar>::infinity();
  if (x < Scalar(detail::kAsymptoticSwitch) + nu * nu) {
    return nu * std::log(x / 2) - std::lgamma(nu + 1) + detail::log_bessel_series_tail(nu, x);
  }
  return x - Scalar(0.5) * std::log(2 * std::numbers::pi_v<Scalar> * x) +
         detail::log_bessel_asymptotic_scaled(nu, x);
}

/// log of the vMF normalizing constant C_D(kappa) = kappa^{D/2-1} / ((2 pi)^{D/2} I_{D/2-1}(kappa)).
/// Continuous at kappa = 0, where it equals -log(surface area of S^{D-1}).
template <typename Scalar>
Scalar log_vmf_norm_const(Scalar kappa, int dim) {
  if (!std::isfinite(kappa) || kappa < 0) throw ValidationError("vmf_norm_const: kappa must be finite and >= 0");
  if (dim < 2) throw ValidationError("vmf_norm_const: dimension must be >= 2");
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar half = Scalar(dim) / 2;
  const Scalar nu = half - 1;
  if (dim == 3) {
    // kappa / (4 pi sinh kappa)
    if (kappa < Scalar(1e-3)) {
      const Scalar k2 = kappa * kappa;
      return -std::log(4 * pi) - k2 / 6 + k2 * k2 / 180;
    }
    return std::log(kappa) - std::log(4 * pi) - (kappa + std::log1p(-std::exp(-2 * kappa)) - std::log(Scalar(2)));
  }
  if (kappa < Scalar(detail::kAsymptoticSwitch) + nu * nu) {
    return nu * std::log(Scalar(2)) + std::lgamma(half) - half * std::log(2 * pi) -
           detail::log_bessel_series_tail(nu, kappa);
  }
  return nu * std::log(kappa) - half * std::log(2 * pi) - log_bessel_i(nu, kappa);
}

template <typename Scalar>
Scalar vmf_norm_const(Scalar kappa, int dim) {
  return std::exp(log_vmf_norm_const(kappa, dim));
}

/// Mean resultant length A_D(kappa) = I_{D/2}(kappa) / I_{D/2-1}(kappa).
template <typename Scalar>
Scalar mean_resultant_length(Scalar kappa, int dim) {
  if (kappa == 0) return 0;
  const Scalar nu = Scalar(dim) / 2 - 1;
  return std::exp(log_bessel_i(nu + 1, kappa) - log_bessel_i(nu, kappa));
}

template <typename DerivedA, typename DerivedB>
void require_same_dim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw ValidationError("sphere: dimension mismatch");
}

template <typename Derived>
void require_unit(const Eigen::MatrixBase<Derived>& x, double tol = 1e-9) {
  if (std::abs(x.norm() - 1.0) > tol) throw ValidationError("sphere: vector is not unit-norm");
}

/// log C(kappa) + kappa * mu'x.
template <typename DerivedX, typename DerivedMu>
typename DerivedX::Scalar vmf_log_density(const Eigen::MatrixBase<DerivedX>& x,
                                          const Eigen::MatrixBase<DerivedMu>& mu,
                                          typename DerivedX::Scalar kappa) {
  require_same_dim(x, mu);
  return log_vmf_norm_const(kappa, static_cast<int>(x.size())) + kappa * x.dot(mu);
}

/// Angle in [0, pi] between unit vectors, as 2 atan2(|x - y|, |x + y|); unlike
/// acos of the dot product this stays accurate for nearly parallel vectors.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar angle_between(const Eigen::MatrixBase<DerivedX>& x,
                                        const Eigen::MatrixBase<DerivedY>& y) {
  require_same_dim(x, y);
  return 2 * std::atan2((x - y).norm(), (x + y).norm());
}

/// Uniform draw on the unit sphere in R^dim.
Vector sample_uniform(int dim, Rng& rng);

/// vMF(mu, kappa) draw. Uses the exact inverse CDF of the cosine for D = 3 and
/// Wood's (1994) rejection sampler otherwise; kappa = 0 is uniform.
Vector sample_vmf(const Eigen::Ref<const Vector>& mu, double kappa, Rng& rng);

/// Random-walk proposal on the sphere: vMF centred at the current point with
/// concentration 1 / scale^2. The density depends only on x'y, so it is symmetric.
Vector propose_vmf_step(const Eigen::Ref<const Vector>& current, double scale, Rng& rng);
double vmf_step_log_density(const Eigen::Ref<const Vector>& from, const Eigen::Ref<const Vector>& to,
                            double scale);

struct Rotation {
  Matrix matrix;
};

struct ProcrustesResult {
  Rotation rotation;
  PointSet points;
};

/// Checks identification conditions on anchor targets: at least three anchors,
/// no two identical or antipodal, and not all on one great circle.
void validate_anchor_targets(const PointSet& targets);

/// Orthogonal rotation R (det +1) minimizing sum_a |R p_a - t_a|^2 over the
/// anchor rows, applied to every row of `points`.
ProcrustesResult procrustes_align(const PointSet& points, std::span<const int> anchor_indices,
                                  const PointSet& anchor_targets);

}  // namespace ardnet::sphere
