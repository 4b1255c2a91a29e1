#pragma once

// Compares every library statistic with the brute-force oracles on one graph.

#include "oracles.hpp"

#include <ardnet/graphs.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace checks {

struct OracleComparison {
  std::vector<std::string> mismatches;
  bool cut_checked = false;
};

inline ardnet::GraphSample sample_from_dense(const ardnet::Matrix& A) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = i + 1; j < A.cols(); ++j) {
      if (A(i, j) != 0) edges.emplace_back(i, j);
    }
  }
  return ardnet::GraphSample::from_edges(static_cast<int>(A.rows()), edges);
}

inline bool close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

inline bool close(const ardnet::Vector& a, const ardnet::Vector& b, double tol) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!close(a(i), b(i), tol)) return false;
  }
  return true;
}

/// `tol` is relative (absolute below 1). Exact statistics (counts, ratios of
/// small integers) are compared at 1e-12; eigen-quantities at 1e-8.
inline OracleComparison compare_with_oracles(const ardnet::Matrix& A) {
  using ardnet::Vector;
  OracleComparison out;
  const auto g = sample_from_dense(A);
  const auto n = static_cast<int>(A.rows());
  ardnet::StatOptions options;
  options.seed_node = 0;
  const auto report = ardnet::compute_stats(g, options);
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << what << " differs on graph with " << n << " nodes, edges:";
    for (const auto& [u, v] : g.edges) msg << ' ' << u << '-' << v;
    out.mismatches.push_back(msg.str());
  };

  if (!close(report.node.degree, oracle::degree(A), 1e-12)) fail("degree");
  if (!close(report.node.betweenness, oracle::betweenness(A), 1e-12)) fail("betweenness");
  if (!close(report.node.closeness, oracle::closeness(A), 1e-12)) fail("closeness");
  if (!close(report.node.clustering, oracle::local_clustering(A), 1e-12)) fail("clustering");
  if (!close(report.node.support, oracle::support(A), 1e-12)) fail("support");
  if (!close(report.node.eigenvector_centrality, oracle::eigenvector_centrality(A), 1e-8)) {
    fail("eigenvector centrality");
  }
  const auto d = oracle::floyd_warshall(A);
  Vector seed_dist(n);
  for (int j = 0; j < n; ++j) {
    seed_dist(j) = d[0][j] < oracle::kUnreachable ? d[0][j] : std::numeric_limits<double>::quiet_NaN();
  }
  if (!close(report.node.distance_from_seed, seed_dist, 1e-12)) fail("distance from seed");
  for (double q : {0.1, 0.35}) {
    for (int T : {1, 3, 6}) {
      if (!close(ardnet::diffusion_centrality(g, q, T), oracle::diffusion(A, q, T), 1e-12)) fail("diffusion");
    }
  }

  const auto& gs = report.graph;
  if (g.edges.empty()) {
    if (!std::isnan(gs.density) || !std::isnan(gs.max_eigenvalue) || !std::isnan(gs.eigenvector_cut)) {
      fail("empty-graph statistics");
    }
    return out;
  }
  const auto paths = oracle::path_aggregates(A);
  const auto [labels, giant] = oracle::components(A);
  const double comps = static_cast<double>(*std::max_element(labels.begin(), labels.end()) + 1);
  if (!close(gs.density, A.sum() / (static_cast<double>(n) * (n - 1)), 1e-12)) fail("density");
  if (!close(gs.max_eigenvalue, oracle::max_eigenvalue(A), 1e-8)) fail("max eigenvalue");
  if (!close(gs.avg_path_length, paths.avg_path_length, 1e-12)) fail("average path length");
  if (!close(gs.proximity, paths.proximity, 1e-12)) fail("proximity");
  if (!close(gs.diameter, paths.diameter, 1e-12)) fail("diameter");
  if (!close(gs.clustering, oracle::global_clustering(A), 1e-12)) fail("global clustering");
  if (!close(gs.n_components, comps, 1e-12)) fail("component count");
  if (!close(gs.giant_fraction, static_cast<double>(giant.size()) / n, 1e-12)) fail("giant fraction");
  if (const auto cut = oracle::median_cut(A)) {
    out.cut_checked = true;
    if (!close(gs.eigenvector_cut, *cut, 1e-12)) fail("eigenvector cut");
  }
  return out;
}

}  // namespace checks
