#pragma once

#include <ardnet/simlab.hpp>

namespace fixtures {

/// Small simulated village; psi < 1 leaves census-only nodes for imputation.
inline ardnet::SimTruth small_village(int n = 60, int K = 5, double psi = 1.0, std::uint64_t seed = 7) {
  ardnet::ExperimentConfig config;
  config.n = n;
  config.K = K;
  config.psi = psi;
  config.nu_mean = -0.9;  // denser than the default so small graphs carry signal
  ardnet::Rng rng = ardnet::make_stream(seed);
  return ardnet::simulate_dgp(config, rng);
}

}  // namespace fixtures
