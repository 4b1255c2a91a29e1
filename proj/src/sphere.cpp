#include <ardnet/sphere.hpp>

#include <Eigen/SVD>

namespace ardnet::sphere {

Vector sample_uniform(int dim, Rng& rng) {
  Vector x(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) x(i) = standard_normal(rng);
    const double norm = x.norm();
    if (norm > 1e-12) return x / norm;
  }
}

namespace {

// Cosine W = mu'x of a vMF(mu, kappa) draw.
double sample_vmf_cosine(double kappa, int dim, Rng& rng) {
  if (dim == 3) {
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    // inverse CDF of the density proportional to exp(kappa w) on [-1, 1]
    const double w = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
    return std::clamp(w, -1.0, 1.0);
  }
  const double m1 = dim - 1.0;
  const double b = m1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + m1 * m1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + m1 * std::log(1.0 - x0 * x0);
  std::gamma_distribution<double> gamma(m1 / 2.0, 1.0);
  for (;;) {
    const double g1 = gamma(rng);
    const double g2 = gamma(rng);
    const double z = g1 / (g1 + g2);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = uniform01(rng);
    if (kappa * w + m1 * std::log(1.0 - x0 * w) - c >= std::log(u)) return w;
  }
}

}  // namespace

Vector sample_vmf(const Eigen::Ref<const Vector>& mu, double kappa, Rng& rng) {
  if (!std::isfinite(kappa) || kappa < 0) throw ValidationError("sample_vmf: kappa must be finite and >= 0");
  const int dim = static_cast<int>(mu.size());
  if (dim < 2) throw ValidationError("sample_vmf: dimension must be >= 2");
  if (kappa == 0) return sample_uniform(dim, rng);

  const double w = sample_vmf_cosine(kappa, dim, rng);
  // Tangent direction uniform on S^{D-2}, placed in the first D-1 coordinates.
  Vector x(dim);
  x.head(dim - 1) = sample_uniform(dim - 1, rng) * std::sqrt(std::max(0.0, 1.0 - w * w));
  x(dim - 1) = w;

  // Householder reflection taking e_D to mu.
  Vector u = -mu;
  u(dim - 1) += 1.0;
  const double uu = u.squaredNorm();
  if (uu > 1e-24) x -= (2.0 * u.dot(x) / uu) * u;
  return x / x.norm();
}

Vector propose_vmf_step(const Eigen::Ref<const Vector>& current, double scale, Rng& rng) {
  return sample_vmf(current, 1.0 / (scale * scale), rng);
}

double vmf_step_log_density(const Eigen::Ref<const Vector>& from, const Eigen::Ref<const Vector>& to,
                            double scale) {
  return vmf_log_density(to, from, 1.0 / (scale * scale));
}

void validate_anchor_targets(const PointSet& targets) {
  const auto count = targets.rows();
  if (count < 3) {
    throw ValidationError("anchors: at least three fixed group centers are required");
  }
  for (Eigen::Index a = 0; a < count; ++a) {
    require_unit(targets.row(a).transpose());
    for (Eigen::Index b = a + 1; b < count; ++b) {
      const double dot = targets.row(a).dot(targets.row(b));
      if (dot < -1.0 + 1e-9) throw ValidationError("anchors: fixed centers are antipodal");
      if (dot > 1.0 - 1e-9) throw ValidationError("anchors: fixed centers coincide");
    }
  }
  const Matrix target_matrix = targets;
  Eigen::JacobiSVD<Matrix> svd(target_matrix);
  const auto& sv = svd.singularValues();
  if (sv.size() < 3 || sv(2) < 1e-8 * sv(0)) {
    throw ValidationError("anchors: fixed centers lie on one great circle");
  }
}

ProcrustesResult procrustes_align(const PointSet& points, std::span<const int> anchor_indices,
                                  const PointSet& anchor_targets) {
  const auto dim = points.cols();
  if (anchor_targets.cols() != dim) throw ValidationError("procrustes_align: dimension mismatch");
  if (static_cast<Eigen::Index>(anchor_indices.size()) != anchor_targets.rows()) {
    throw ValidationError("procrustes_align: anchor index/target count mismatch");
  }
  validate_anchor_targets(anchor_targets);

  Matrix cross = Matrix::Zero(dim, dim);
  for (std::size_t a = 0; a < anchor_indices.size(); ++a) {
    const int idx = anchor_indices[a];
    if (idx < 0 || idx >= points.rows()) throw ValidationError("procrustes_align: anchor index out of range");
    cross += points.row(idx).transpose() * anchor_targets.row(static_cast<Eigen::Index>(a));
  }
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Vector signs = Vector::Ones(dim);
  if ((v * u.transpose()).determinant() < 0) signs(dim - 1) = -1.0;
  Matrix rotation = v * signs.asDiagonal() * u.transpose();

  PointSet rotated = points * rotation.transpose();
  return {Rotation{std::move(rotation)}, std::move(rotated)};
}

}  // namespace ardnet::sphere
