#pragma once

// Link probabilities, graph draws and network statistics.

#include <ardnet/model.hpp>
#include <ardnet/sampler.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ardnet {

/// Undirected simple graph. Edges are stored once as (u, v) with u < v, sorted.
struct GraphSample {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  // Provenance for posterior draws.
  int draw_index = -1;
  std::uint64_t seed = 0;
  bool reused_draw = false;

  /// Normalizes orientation and order; throws on self-loops, duplicates or out-of-range ids.
  static GraphSample from_edges(int n, std::vector<std::pair<int, int>> edges);

  std::vector<std::vector<int>> adjacency() const;
  Matrix adjacency_matrix() const;
  bool has_edge(int u, int v) const;
  bool operator==(const GraphSample& other) const { return n == other.n && edges == other.edges; }
};

struct LinkProbabilities {
  Matrix P;                  // symmetric, zero diagonal, entries in [0, 1]
  int clamped = 0;           // unordered pairs clamped at 1
  double pre_clamp_total = 0.0;  // sum over i != j before clamping
};

/// P_ij = exp(nu_i + nu_j + zeta z_i'z_j) * sum(E[d]) / sum_{i != j} exp(...),
/// evaluated in log space, then clamped to [0, 1].
LinkProbabilities link_probability_matrix(const Vector& nu, const PointSet& z, double zeta,
                                          const Vector& expected_degrees);

/// Independent Bernoulli draw for every unordered pair.
GraphSample sample_graph(const Matrix& P, Rng& rng);

struct PosteriorGraphOptions {
  int knn_k = 5;
  std::uint64_t seed = 0;
};

/// Full-population (nu, z) for one retained draw: ARD nodes from the draw, the
/// rest imputed by kNN on the covariate distance.
struct FullPopulation {
  Vector nu;
  PointSet z;
  Vector expected_degrees;
};
FullPopulation assemble_population(const ModelParams& draw, const ArdDataset& data, int knn_k);

/// S graphs from evenly spaced retained draws. When S exceeds the number of
/// draws, draws are reused (with fresh Bernoulli randomness) and flagged.
std::vector<GraphSample> draw_posterior_graphs(const PosteriorDraws& draws, const ArdDataset& data, int count,
                                               const PosteriorGraphOptions& options = {});

// ---- statistics -------------------------------------------------------------

struct NodeStats {
  Vector degree;
  Vector eigenvector_centrality;
  Vector betweenness;
  Vector closeness;
  Vector clustering;
  Vector support;
  Vector distance_from_seed;  // NaN when unreachable
};

struct GraphStats {
  double density = 0.0;
  double max_eigenvalue = 0.0;
  double avg_path_length = 0.0;
  double proximity = 0.0;
  double diameter = 0.0;
  double clustering = 0.0;
  double n_components = 0.0;
  double giant_fraction = 0.0;
  double eigenvector_cut = 0.0;
};

enum class CutRule { median, sign };

struct StatOptions {
  std::optional<int> seed_node = 0;
  CutRule cut_rule = CutRule::median;
  bool betweenness = true;
  bool eigenvector_cut = true;
};

struct StatReport {
  NodeStats node;
  GraphStats graph;
};

NodeStats compute_node_stats(const GraphSample& g, std::optional<int> seed_node = 0, bool betweenness = true);

/// Empty graphs (no edges) give an all-NaN report.
GraphStats compute_graph_stats(const GraphSample& g, CutRule rule = CutRule::median, bool eigenvector_cut = true);

StatReport compute_stats(const GraphSample& g, const StatOptions& options = {});

/// Reports for many graphs, computed in parallel, returned in input order.
std::vector<StatReport> compute_stats_all(const std::vector<GraphSample>& graphs, const StatOptions& options = {});

/// Leading eigenvector of the giant component (unit infinity norm, zeros
/// elsewhere) and its eigenvalue.
std::pair<Vector, double> giant_eigenvector(const GraphSample& g);

/// Row sums of sum_{t=1..T} (q A)^t via repeated matrix-vector products.
Vector diffusion_centrality(const GraphSample& g, double q, int T);

/// BFS distances from `source`; -1 when unreachable.
IndexVector bfs_distances(const std::vector<std::vector<int>>& adj, int source);

/// Component label per node, labels ordered by smallest member id.
IndexVector connected_components(const std::vector<std::vector<int>>& adj);

/// Edge share across the split of the giant component's Fiedler vector.
double eigenvector_cut(const GraphSample& g, CutRule rule = CutRule::median);

struct StatSummary {
  Vector mean;  // one entry per node, or a single entry for graph statistics
  Vector sd;
};

/// Names accepted by `posterior_expected_stat`. Graph-level clustering is
/// selected as "global_clustering".
const std::vector<std::string>& node_stat_names();
const std::vector<std::string>& graph_stat_names();

Vector node_stat(const NodeStats& s, const std::string& name);
double graph_stat(const GraphStats& s, const std::string& name);

/// Mean and sd over graphs of a node statistic, graph statistic or `edge(i,j)`.
/// NaN values (unreachable distances) are skipped.
StatSummary posterior_expected_stat(const std::vector<GraphSample>& graphs, const std::string& selector,
                                    const StatOptions& options = {});

/// Same, from precomputed reports (edge selectors are not available here).
StatSummary summarize_stat(const std::vector<StatReport>& reports, const std::string& selector);

}  // namespace ardnet
