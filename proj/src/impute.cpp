#include <ardnet/impute.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace ardnet {

ImputedNodes impute_non_ard(const Vector& ard_nu, const PointSet& ard_z, const Matrix& distance, int k) {
  const auto m = ard_nu.size();
  if (ard_z.rows() != m) throw ValidationError("impute_non_ard: nu and z sizes differ");
  if (distance.rows() > 0 && distance.cols() != m) {
    throw ValidationError("impute_non_ard: distance matrix must have one column per ARD node");
  }
  if (k < 1 || k > m) throw ValidationError("impute_non_ard: k must lie in [1, m]");
  if ((distance.array() < 0).any() || !distance.allFinite()) {
    throw ValidationError("impute_non_ard: distances must be finite and >= 0");
  }
  constexpr double kEps = 1e-9;
  ImputedNodes out;
  out.nu.resize(distance.rows());
  out.z.resize(distance.rows(), ard_z.cols());
  std::vector<int> order(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < distance.rows(); ++j) {
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      const double da = distance(j, a), db = distance(j, b);
      return da < db || (da == db && a < b);
    });
    double wsum = 0.0;
    double nu = 0.0;
    Vector z = Vector::Zero(ard_z.cols());
    for (int r = 0; r < k; ++r) {
      const int i = order[static_cast<std::size_t>(r)];
      const double w = 1.0 / (distance(j, i) + kEps);
      wsum += w;
      nu += w * ard_nu(i);
      z += w * ard_z.row(i).transpose();
    }
    out.nu(j) = nu / wsum;
    const double norm = z.norm();
    if (norm > 1e-12 * wsum) {
      out.z.row(j) = (z / norm).transpose();
    } else {
      out.z.row(j) = ard_z.row(order.front());
    }
  }
  return out;
}

}  // namespace ardnet
