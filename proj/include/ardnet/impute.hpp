#pragma once

// Weighted k-nearest-neighbour extension of (nu, z) from the ARD sample to
// census-only nodes.

#include <ardnet/types.hpp>

namespace ardnet {

struct ImputedNodes {
  Vector nu;   // n - m
  PointSet z;  // (n - m) x D, unit rows
};

/// For each non-ARD node j (row of `distance`): take the k ARD nodes with the
/// smallest distance (ties to the lower index), weights 1/(d + 1e-9) normalized,
/// nu_j = sum w nu, z_j = normalize(sum w z). A zero resultant falls back to the
/// nearest neighbour's position.
ImputedNodes impute_non_ard(const Vector& ard_nu, const PointSet& ard_z, const Matrix& distance, int k);

}  // namespace ardnet
