#pragma once

// Metropolis-within-Gibbs sampler for the ARD latent surface model.
//
// One sweep updates, in order: latent positions (vMF random walk), free group
// centers (conjugate vMF proposal corrected by the ARD likelihood, then a vMF
// random walk), log degrees, log shares, concentrations, zeta (Gaussian random
// walks), and the four hyperparameters (conjugate draws). The anchored centers
// are never moved; a Procrustes step after each sweep re-pins them exactly.
// Jump scales adapt every `adapt_window` sweeps during burn-in and are frozen
// afterwards.

#include <ardnet/model.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ardnet {

struct SamplerOptions {
  bool update_z = true;
  bool update_centers = true;
  bool update_d = true;      // ignored unless degree mode samples degrees
  bool update_beta = true;   // ignored unless prevalence mode samples shares
  bool update_eta = true;
  bool update_zeta = true;
  bool update_hyper = true;
  double target_acceptance = 0.3;
  double initial_scale = 0.1;
  /// Called once per adaptation window with a one-line summary.
  std::function<void(const std::string&)> progress;
  /// Called after every sweep (burn-in included) with the sweep index and state.
  std::function<void(int, const ModelParams&)> on_sweep;
};

struct PosteriorDraws {
  std::vector<ModelParams> draws;  // retained, thinned
  std::vector<int> sweeps;         // sweep index of each retained draw (0 = initial state)
  std::map<std::string, std::vector<double>> acceptance_log;  // block -> rate per window
  std::map<std::string, Vector> jump_scales;                  // block -> final per-element scales
  std::map<std::string, double> retained_acceptance;          // block -> rate over retained sweeps
  std::vector<double> log_posterior_trace;                    // one value per window
  std::uint64_t seed = 0;
  PriorConfig config;
};

/// Multiplicative Robbins-Monro style adjustment: scale * exp(accept - target),
/// clamped to [1e-4, 1e4].
double adapt_jump_scale(double window_acceptance, double current_scale, double target = 0.3);

/// Draw upsilon ~ vMF(normalize(eta * sum_i w_i x_i + prior_kappa * prior_mu), |.|);
/// a zero resultant gives a uniform draw.
Vector update_center_gibbs(const PointSet& members, const Vector& weights, double eta, Rng& rng,
                           const Vector& prior_mu = Vector(), double prior_kappa = 0.0);

/// Full chain from `initialize_params`. The dataset must already be validated.
PosteriorDraws run_chain(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                         std::uint64_t seed, const SamplerOptions& options = {});

/// Chain from a caller-supplied starting point (used for reduced models in tests).
PosteriorDraws run_chain_from(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                              ModelParams initial, Rng& rng, const SamplerOptions& options = {});

struct ParameterDiagnostics {
  std::string name;
  double rhat = 0.0;
  double ess = 0.0;
  double mean = 0.0;
  double sd = 0.0;
  bool degenerate = false;
};

struct ChainDiagnostics {
  std::vector<ParameterDiagnostics> parameters;
  std::vector<std::string> warnings;
  double max_rhat() const;
};

/// Split-Rhat for a set of chains of one scalar (BDA3 definition).
double split_rhat(const std::vector<std::vector<double>>& chains);

/// Effective sample size over all chains (BDA3, Geyer initial positive sequence).
/// Returns 0 for constant input.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

/// Split-Rhat and ESS for zeta, every eta_k, mu_d, sigma2_d and up to ten
/// evenly spaced log degrees. Needs >= 10 retained draws per chain.
ChainDiagnostics summarize_chain(const std::vector<PosteriorDraws>& chains);

}  // namespace ardnet
