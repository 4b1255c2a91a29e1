#pragma once

#include <ardnet/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ardnet {

/// One village: ARD counts for the m respondents plus census information for
/// all n nodes. Respondent r is node `ard_index[r]`; covariate distance rows
/// follow the non-ARD nodes in increasing id order.
struct ArdDataset {
  int n = 0;
  IntMatrix y;               // m x K counts
  IntMatrix census_traits;   // n x K indicators, or 0 x K when no census
  Vector group_sizes;        // K, N_k
  Matrix covariate_distance; // (n - m) x m
  std::vector<int> ard_index;
  std::optional<Vector> reported_degrees;
  std::optional<double> total_prop;
  std::vector<std::string> trait_names;

  int m() const { return static_cast<int>(y.rows()); }
  int K() const { return static_cast<int>(y.cols()); }
  bool has_census() const { return census_traits.rows() > 0; }
  double sampling_share() const { return n > 0 ? static_cast<double>(m()) / n : 0.0; }
  std::vector<int> non_ard_index() const;

  bool operator==(const ArdDataset&) const;
};

enum class DegreeMode { observed, estimated, pinned };
enum class PrevalenceMode { census, estimated };

struct ScalarPrior {
  enum class Kind { gamma, uniform };
  Kind kind = Kind::gamma;
  double a = 1.0;  // shape, or lower bound
  double b = 1.0;  // rate, or upper bound

  static ScalarPrior gamma(double shape, double rate) { return {Kind::gamma, shape, rate}; }
  static ScalarPrior uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }

  double log_density(double x) const;
  double mean() const;
  void validate(const char* name) const;
};

/// Hyperprior on a location hyperparameter (mu_d, mu_beta): flat or Normal(mean, var).
struct LocationHyperprior {
  bool flat = true;
  double mean = 0.0;
  double var = 1.0;
  double log_density(double x) const;
};

/// Hyperprior on a variance hyperparameter: flat or scaled-Inv-chi^2(dof, scale).
struct ScaleHyperprior {
  bool flat = true;
  double dof = 1.0;
  double scale = 1.0;
  double log_density(double s2) const;
};

struct PriorConfig {
  ScalarPrior zeta = ScalarPrior::gamma(0.5, 0.5);
  ScalarPrior eta = ScalarPrior::gamma(5.0, 0.1);
  LocationHyperprior mu_d;
  ScaleHyperprior sigma2_d;
  LocationHyperprior mu_beta;
  ScaleHyperprior sigma2_beta;

  int p = 2;             // latent dimension; positions live in R^{p+1}
  int T = 3000;          // sweeps; the first T/2 are burn-in
  int thin = 5;
  int n_graph_draws = 100;
  int adapt_window = 50;
  int knn_k = 5;

  DegreeMode degree_mode = DegreeMode::estimated;
  double pinned_mean_degree = 0.0;
  PrevalenceMode prevalence_mode = PrevalenceMode::census;
  bool latent_model = true;  // false: beta-model baseline (zeta = 0, no positions)
  double min_sampling_share = 0.0;

  int dim() const { return p + 1; }
  void validate() const;
};

/// A full parameter point for the ARD sample.
struct ModelParams {
  PointSet z;        // m x D latent positions
  Vector log_d;      // m, log degrees
  Vector nu;         // m, gregariousness (filled for retained draws)
  Vector beta;       // K, log tie shares
  PointSet centers;  // K x D
  Vector eta;        // K
  double zeta = 0.0;
  double mu_d = 0.0, sigma2_d = 1.0;
  double mu_beta = 0.0, sigma2_beta = 1.0;
  std::vector<int> fixed_centers;

  int dim() const { return static_cast<int>(z.cols()); }
  Vector degrees() const { return log_d.array().exp(); }
};

/// Anchored group centers pinning the orientation of the latent space.
struct AnchorSpec {
  std::vector<int> groups;
  PointSet targets;  // one row per anchored group
};

/// Groups 0..2 placed on the first three coordinate axes.
AnchorSpec default_anchors(int dim);

struct ValidatedDataset {
  ArdDataset data;
  bool excluded = false;  // sampling share below the configured floor
  std::vector<std::string> warnings;
};

/// Checks shapes, signs and census consistency; throws ValidationError listing
/// every violation. Idempotent.
ValidatedDataset validate_dataset(const ArdDataset& raw, double min_sampling_share = 0.0,
                                  int required_anchors = 3);

struct PrevalenceResult {
  Vector b;
  std::vector<int> empty_groups;
  std::vector<std::string> warnings;
};

/// b_k = N_k / n from census counts.
PrevalenceResult fix_group_prevalence(const Vector& group_sizes, int n);

/// Removes the given groups (columns) from a dataset.
ArdDataset drop_groups(const ArdDataset& data, const std::vector<int>& groups);

/// Deterministic starting point given the rng state; see README for the rules.
ModelParams initialize_params(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                              Rng& rng);

/// Warn (not fail) when all concentrations coincide.
bool concentrations_distinct(const Vector& eta);

}  // namespace ardnet
