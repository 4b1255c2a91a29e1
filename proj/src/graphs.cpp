#include <ardnet/graphs.hpp>
#include <ardnet/impute.hpp>
#include <ardnet/likelihood.hpp>
#include <ardnet/parallel.hpp>

#include <algorithm>
#include <cmath>

namespace ardnet {

GraphSample GraphSample::from_edges(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 0) throw ValidationError("GraphSample: negative node count");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw ValidationError("GraphSample: node id out of range");
    if (u == v) throw ValidationError("GraphSample: self-loop");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw ValidationError("GraphSample: duplicate edge");
  }
  GraphSample g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

std::vector<std::vector<int>> GraphSample::adjacency() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

Matrix GraphSample::adjacency_matrix() const {
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [u, v] : edges) a(u, v) = a(v, u) = 1.0;
  return a;
}

bool GraphSample::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

LinkProbabilities link_probability_matrix(const Vector& nu, const PointSet& z, double zeta,
                                          const Vector& expected_degrees) {
  const auto n = nu.size();
  if (z.rows() != n || expected_degrees.size() != n) {
    throw ValidationError("link_probability_matrix: nu, z and expected degrees must have the same length");
  }
  LinkProbabilities out;
  out.P = Matrix::Zero(n, n);
  if (n < 2) return out;

  Matrix logw = (z * z.transpose()) * zeta;
  logw.colwise() += nu;
  logw.rowwise() += nu.transpose();
  // Mirror the upper triangle so P is exactly symmetric.
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) logw(i, j) = logw(j, i);
  }
  logw.diagonal().setConstant(-std::numeric_limits<double>::infinity());
  const double top = logw.maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("link_probability_matrix: non-finite log weights");
  Matrix w = (logw.array() - top).exp().matrix();
  const double total_w = w.sum();
  const double target = expected_degrees.sum();
  out.P = w * (target / total_w);
  out.P.diagonal().setZero();  // vectorized exp maps -inf to a denormal, not 0
  out.pre_clamp_total = out.P.sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (out.P(i, j) > 1.0) {
        out.P(i, j) = out.P(j, i) = 1.0;
        ++out.clamped;
      }
    }
  }
  if (!out.P.allFinite()) throw NumericalError("link_probability_matrix: non-finite probabilities");
  return out;
}

GraphSample sample_graph(const Matrix& P, Rng& rng) {
  const auto n = static_cast<int>(P.rows());
  if (P.cols() != n) throw ValidationError("sample_graph: P must be square");
  GraphSample g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = P(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("sample_graph: probabilities must lie in [0, 1]");
      if (uniform01(rng) < p) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

FullPopulation assemble_population(const ModelParams& draw, const ArdDataset& data, int knn_k) {
  const int dim = draw.dim();
  const int n = data.n;
  const int m = data.m();
  const double zeta = draw.zeta;
  const Vector ard_nu = draw.nu.size() == m ? draw.nu : nu_from_degree(draw.degrees(), zeta, n, dim);

  FullPopulation pop;
  pop.nu.resize(n);
  pop.z.resize(n, dim);
  for (int r = 0; r < m; ++r) {
    const int node = data.ard_index[static_cast<std::size_t>(r)];
    pop.nu(node) = ard_nu(r);
    pop.z.row(node) = draw.z.row(r);
  }
  const auto others = data.non_ard_index();
  if (!others.empty()) {
    const auto imputed = impute_non_ard(ard_nu, draw.z, data.covariate_distance, std::min(knn_k, m));
    for (std::size_t j = 0; j < others.size(); ++j) {
      pop.nu(others[j]) = imputed.nu(static_cast<Eigen::Index>(j));
      pop.z.row(others[j]) = imputed.z.row(static_cast<Eigen::Index>(j));
    }
  }
  pop.expected_degrees = degree_from_nu(pop.nu, zeta, n, dim);
  return pop;
}

std::vector<GraphSample> draw_posterior_graphs(const PosteriorDraws& draws, const ArdDataset& data, int count,
                                               const PosteriorGraphOptions& options) {
  if (count < 0) throw ValidationError("draw_posterior_graphs: negative graph count");
  if (count == 0) return {};
  const auto retained = static_cast<long long>(draws.draws.size());
  if (retained == 0) throw ValidationError("draw_posterior_graphs: the chain has no retained draws");

  std::vector<GraphSample> graphs(static_cast<std::size_t>(count));
  parallel_for(graphs.size(), [&](std::size_t s) {
    const auto ls = static_cast<long long>(s);
    const bool reuse = count > retained;
    const auto index = static_cast<int>(reuse ? ls % retained : ls * retained / count);
    const auto& draw = draws.draws[static_cast<std::size_t>(index)];
    const auto pop = assemble_population(draw, data, options.knn_k);
    const auto probs = link_probability_matrix(pop.nu, pop.z, draw.zeta, pop.expected_degrees);
    Rng rng = make_stream(options.seed, 0x67, s);
    GraphSample g = sample_graph(probs.P, rng);
    g.draw_index = index;
    g.seed = options.seed;
    g.reused_draw = reuse && ls >= retained;
    graphs[s] = std::move(g);
  });
  return graphs;
}

}  // namespace ardnet
