#pragma once

// Synthetic evaluation: data-generating process, constructed ARD, scaled MSE,
// confusion matrices, experiment grids and the beta-model baseline.

#include <ardnet/graphs.hpp>
#include <ardnet/model.hpp>
#include <ardnet/sampler.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ardnet {

/// Two-component Normal mixture for gregariousness: N(mu_high, sigma^2) with
/// probability lambda, N(mu_low, sigma^2) otherwise.
struct MixtureConfig {
  double lambda = 0.1;
  double mu_high = -0.92;
  double mu_low = -1.96;
  double sigma = 0.3;
};

enum class CenterLayout { uniform, clustered };

struct ExperimentConfig {
  int n = 250;
  int K = 12;
  int p = 2;
  double zeta = 0.3;
  double nu_mean = -1.27;
  double nu_sd = 0.5;
  std::optional<MixtureConfig> mixture;
  double psi = 1.0;  // ARD sampling share
  CenterLayout center_layout = CenterLayout::uniform;
  /// Positions from vMF(+e1, kappa) / vMF(-e1, kappa) halves instead of uniform.
  bool two_communities = false;
  double community_kappa = 5.0;
  double eta_low = 2.0, eta_high = 8.0;  // eta_k ~ Uniform(eta_low, eta_high)
  int n_anchors = 3;
  double covariate_sd = 0.5;
  int n_reps = 1;
  std::uint64_t seed = 1;
  // Estimation settings used by run_experiment_grid.
  PriorConfig priors;
  int chains = 1;
  int graphs = 100;

  int dim() const { return p + 1; }
  void validate() const;
};

struct SimTruth {
  GraphSample graph;            // g*
  Matrix P;                     // link probabilities g* was drawn from
  ModelParams params;           // n nodes: z, nu, log_d = log expected degree; centers, eta, zeta, beta = log b
  IntMatrix traits;             // n x K memberships
  ArdDataset data;              // constructed ARD plus census and covariate distance
  AnchorSpec anchors;           // the first n_anchors groups at their true centers
  Vector covariate_x1;          // n
  IndexVector covariate_x2;     // n, sign octant code
  std::vector<std::string> warnings;
};

/// One synthetic village. The ARD sample is the first ceil(psi n) nodes; node
/// labels are exchangeable, so this is a uniformly chosen sample.
SimTruth simulate_dgp(const ExperimentConfig& config, Rng& rng);

/// y_ik = |neighbours(i) intersect G_k| for each i in ard_index.
IntMatrix construct_ard(const GraphSample& g, const IntMatrix& traits, const std::vector<int>& ard_index);

/// mean((est - truth)^2) / mean(truth)^2; NaN when mean(truth) = 0.
double scaled_mse(const Vector& estimates, const Vector& truths);

struct Confusion {
  // counts(0,0) true top & estimated top, (0,1) true top only,
  // (1,0) estimated top only, (1,1) neither.
  Eigen::Matrix2d counts = Eigen::Matrix2d::Zero();
  double tpr = 0.0;
};

/// Top decile (ceil(n/10) nodes) of each vector, ties to the lower node id.
Confusion top_decile_confusion(const Vector& estimated, const Vector& truth);

/// Sampler run with zeta fixed at 0 and positions out of the likelihood.
PosteriorDraws beta_model_baseline(const ArdDataset& data, const PriorConfig& priors, std::uint64_t seed,
                                   const SamplerOptions& options = {});

// ---- experiment grid ----------------------------------------------------------

/// Named axes; recognised names: n, K, p, zeta, mu, sd, psi, lambda, eta_low, eta_high.
struct ExperimentGrid {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::size_t cell_count() const;
  /// Parameter values of cell `index` (last axis varies fastest).
  std::vector<std::pair<std::string, double>> cell(std::size_t index) const;
};

ExperimentConfig apply_cell(const ExperimentConfig& base, const std::vector<std::pair<std::string, double>>& cell);

struct ResultRow {
  std::size_t cell = 0;
  std::vector<std::pair<std::string, double>> params;
  int rep = 0;
  std::string level;      // node:ARD, node:all, graph
  std::string statistic;
  double truth = 0.0;     // node levels: mean over nodes
  double estimate = 0.0;  // node levels: mean over nodes
  double pct_error = 0.0; // node levels: mean over nodes with nonzero truth
  double pct_error_sd = 0.0;
  double scaled_mse = 0.0;
  double correlation = 0.0;  // node levels: Pearson r between estimate and truth
  std::string status = "ok";
};

struct RepOutcome {
  SimTruth truth;
  std::vector<PosteriorDraws> chains;
  std::vector<GraphSample> graphs;
  StatReport true_stats;
  std::vector<StatReport> estimated_stats;
};

/// simulate_dgp -> run_chain (config.chains chains) -> posterior graphs -> statistics.
RepOutcome run_replication(const ExperimentConfig& config, std::size_t cell, int rep,
                           const StatOptions& stats = {}, const SamplerOptions& sampler = {});

/// Rows comparing a replication's estimates with the truth.
std::vector<ResultRow> compare_replication(const RepOutcome& outcome, std::size_t cell, int rep,
                                           const std::vector<std::pair<std::string, double>>& params);

/// Every cell and rep; reps run in parallel; failures become status rows.
std::vector<ResultRow> run_experiment_grid(const ExperimentConfig& base, const ExperimentGrid& grid,
                                           const StatOptions& stats = {});

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path);

// ---- scaled-MSE taxonomy with known parameters ---------------------------------

struct TaxonomyResult {
  std::map<std::string, double> node_mse;   // degree, eigenvector_centrality
  std::map<std::string, double> graph_mse;  // graph statistics
  // Single link: squared error of one graph draw against g*, pooled over pairs
  // and reps, against the closed form p(1 - 2 g*) + g*.
  double link_mse = 0.0;
  double link_closed_form = 0.0;
  double link_difference_se = 0.0;
  double link_scaled_mse = 0.0;
  double link_scaled_closed_form = 0.0;
};

/// For each rep: draw (theta0, g*) from the DGP, estimate each statistic by its
/// mean over `graphs` draws at theta0, and accumulate scaled MSEs.
TaxonomyResult mse_taxonomy(const ExperimentConfig& config, int reps, int graphs);

// ---- many-networks regression ---------------------------------------------------

struct RegressionTrialResult {
  double beta_hat = 0.0;
  double bootstrap_sd = 0.0;
  bool covered = false;  // |beta_hat - beta| <= 2 bootstrap sd
};

/// R networks with nu means spread over [mu_low, mu_high]; outcome
/// y_r = alpha + beta * S*_r + eps_r with S* the realized average degree;
/// regress y on the posterior-mean statistic (mean over `graphs` draws at theta0).
RegressionTrialResult many_networks_regression(const ExperimentConfig& base, int networks, int graphs, double alpha,
                                               double beta, double noise_sd, int bootstrap, Rng& rng);

}  // namespace ardnet
