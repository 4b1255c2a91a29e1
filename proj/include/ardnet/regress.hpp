#pragma once

// Second-stage regressions of outcomes on posterior-mean network statistics.

#include <ardnet/types.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ardnet {

struct OlsOptions {
  bool add_intercept = true;
  /// Block bootstrap replications; 0 disables the bootstrap.
  int bootstrap = 0;
  /// Cluster id per row; without clusters every row is its own block.
  std::optional<std::vector<int>> clusters;
  std::uint64_t seed = 1;
};

struct OlsResult {
  Vector coefficients;  // intercept first when added
  Vector bootstrap_sd;  // empty unless bootstrap > 0
  int bootstrap_draws = 0;
  double residual_ss = 0.0;
};

/// Least squares via column-pivoted QR; throws ValidationError on rank deficiency
/// or when there are no more rows than coefficients.
OlsResult ols_regress(const Vector& y, const Matrix& X, const OlsOptions& options = {});

}  // namespace ardnet
