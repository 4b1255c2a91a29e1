#include <ardnet/graphs.hpp>
#include <ardnet/parallel.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <cmath>
#include <limits>
#include <map>
#include <regex>

namespace ardnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
using Adjacency = std::vector<std::vector<int>>;

// Nodes of the largest component; ties go to the component holding the lowest id.
std::vector<int> giant_nodes(const IndexVector& labels) {
  if (labels.size() == 0) return {};
  const int count = labels.maxCoeff() + 1;
  std::vector<int> sizes(static_cast<std::size_t>(count), 0);
  for (Eigen::Index i = 0; i < labels.size(); ++i) ++sizes[static_cast<std::size_t>(labels(i))];
  const int giant = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<int> nodes;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) == giant) nodes.push_back(static_cast<int>(i));
  }
  return nodes;
}

// Power iteration on A + I restricted to `nodes` (one connected component).
// Returns the eigenvector with unit infinity norm and the eigenvalue of A.
std::pair<Vector, double> component_power_iteration(const Adjacency& adj, const std::vector<int>& nodes, int n) {
  Vector v = Vector::Zero(n);
  if (nodes.size() == 1) {
    v(nodes.front()) = 1.0;
    return {v, 0.0};
  }
  for (int i : nodes) v(i) = 1.0;
  Vector av = Vector::Zero(n);
  double lambda = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    for (int i : nodes) {
      double s = 0.0;
      for (int j : adj[static_cast<std::size_t>(i)]) s += v(j);
      av(i) = s;
    }
    lambda = v.dot(av) / v.squaredNorm();
    const double residual = (av - lambda * v).cwiseAbs().maxCoeff();
    if (residual < 1e-12 * std::max(1.0, lambda)) break;
    v = av + v;
    v /= v.cwiseAbs().maxCoeff();
  }
  v /= v.cwiseAbs().maxCoeff();
  return {v, lambda};
}

// Local triangle counts (edges among neighbours) and support per node.
void triangle_stats(const Adjacency& adj, Vector& clustering, Vector& support, double& triangles_x3,
                    double& wedges) {
  const auto n = adj.size();
  clustering = Vector::Zero(static_cast<Eigen::Index>(n));
  support = Vector::Zero(static_cast<Eigen::Index>(n));
  triangles_x3 = 0.0;
  wedges = 0.0;
  std::vector<char> mark(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nbrs = adj[i];
    for (int j : nbrs) mark[static_cast<std::size_t>(j)] = 1;
    double closed = 0.0;  // each neighbour-neighbour edge counted twice
    int supported = 0;
    for (int j : nbrs) {
      int common = 0;
      for (int k : adj[static_cast<std::size_t>(j)]) common += mark[static_cast<std::size_t>(k)];
      closed += common;
      if (common > 0) ++supported;
    }
    for (int j : nbrs) mark[static_cast<std::size_t>(j)] = 0;
    const double deg = static_cast<double>(nbrs.size());
    const double pairs = deg * (deg - 1.0) / 2.0;
    const auto ii = static_cast<Eigen::Index>(i);
    clustering(ii) = pairs > 0 ? (closed / 2.0) / pairs : 0.0;
    support(ii) = deg > 0 ? supported / deg : 0.0;
    triangles_x3 += closed / 2.0;
    wedges += pairs;
  }
}

// All-source BFS with Brandes accumulation. Collects closeness, betweenness and
// path-length aggregates in one pass.
struct PathSummary {
  Vector closeness;
  Vector betweenness;
  double finite_pairs = 0.0;
  double length_sum = 0.0;
  double inverse_sum = 0.0;
  int max_distance = 0;  // over all finite pairs (equals the giant diameter when asked per component)
};

PathSummary all_pairs(const Adjacency& adj, bool with_betweenness) {
  const auto n = static_cast<int>(adj.size());
  PathSummary out;
  out.closeness = Vector::Zero(n);
  out.betweenness = Vector::Zero(n);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    order.clear();
    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const int u = order[head];
      for (int w : adj[static_cast<std::size_t>(u)]) {
        auto& dw = dist[static_cast<std::size_t>(w)];
        if (dw < 0) {
          dw = dist[static_cast<std::size_t>(u)] + 1;
          order.push_back(w);
        }
        if (dw == dist[static_cast<std::size_t>(u)] + 1) sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(u)];
      }
    }
    double inv = 0.0;
    for (std::size_t idx = 1; idx < order.size(); ++idx) {
      const int d = dist[static_cast<std::size_t>(order[idx])];
      inv += 1.0 / d;
      out.length_sum += d;
      out.max_distance = std::max(out.max_distance, d);
    }
    out.finite_pairs += static_cast<double>(order.size() - 1);
    out.inverse_sum += inv;
    out.closeness(s) = n > 1 ? inv / (n - 1) : 0.0;
    if (!with_betweenness) continue;
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      const auto sw = static_cast<std::size_t>(w);
      for (int v : adj[sw]) {
        const auto sv = static_cast<std::size_t>(v);
        if (dist[sv] == dist[sw] - 1) delta[sv] += sigma[sv] / sigma[sw] * (1.0 + delta[sw]);
      }
      if (w != s) out.betweenness(w) += delta[sw];
    }
  }
  out.betweenness /= 2.0;
  return out;
}

Vector seed_distances(const Adjacency& adj, std::optional<int> seed_node) {
  const auto n = static_cast<Eigen::Index>(adj.size());
  Vector out = Vector::Constant(n, kNaN);
  if (!seed_node) return out;
  if (*seed_node < 0 || *seed_node >= n) throw ValidationError("compute_node_stats: seed node out of range");
  const IndexVector d = bfs_distances(adj, *seed_node);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i) >= 0) out(i) = d(i);
  }
  return out;
}

Vector degrees_of(const Adjacency& adj) {
  Vector d(static_cast<Eigen::Index>(adj.size()));
  for (std::size_t i = 0; i < adj.size(); ++i) d(static_cast<Eigen::Index>(i)) = static_cast<double>(adj[i].size());
  return d;
}

double max_adjacency_eigenvalue(const Adjacency& adj, const IndexVector& labels) {
  const int n = static_cast<int>(adj.size());
  const int count = labels.size() ? labels.maxCoeff() + 1 : 0;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(count));
  for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(labels(i))].push_back(i);
  double best = 0.0;
  for (const auto& comp : members) {
    if (comp.size() < 2) continue;
    best = std::max(best, component_power_iteration(adj, comp, n).second);
  }
  return best;
}

double cut_from_adjacency(const Adjacency& adj, const IndexVector& labels, CutRule rule) {
  const auto nodes = giant_nodes(labels);
  const auto c = static_cast<Eigen::Index>(nodes.size());
  if (c < 2) return kNaN;
  std::vector<int> local(adj.size(), -1);
  for (Eigen::Index a = 0; a < c; ++a) local[static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)])] = static_cast<int>(a);
  Matrix lap = Matrix::Zero(c, c);
  for (Eigen::Index a = 0; a < c; ++a) {
    const auto& nbrs = adj[static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)])];
    lap(a, a) = static_cast<double>(nbrs.size());
    for (int j : nbrs) lap(a, local[static_cast<std::size_t>(j)]) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(lap);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenvector_cut: Laplacian eigensolver failed");
  Vector f = solver.eigenvectors().col(1);
  Eigen::Index pivot = 0;
  f.cwiseAbs().maxCoeff(&pivot);
  if (f(pivot) < 0) f = -f;

  std::vector<char> high(static_cast<std::size_t>(c), 0);
  if (rule == CutRule::median) {
    // Rank split at the lower-middle order statistic: nodes ranked above it form
    // the high side. Ties in f are ordered by node id, so the split stays
    // balanced even when the Fiedler value is repeated.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(c));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return f(a) < f(b); });
    for (auto r = static_cast<std::size_t>((c - 1) / 2) + 1; r < order.size(); ++r) high[static_cast<std::size_t>(order[r])] = 1;
  } else {
    for (Eigen::Index a = 0; a < c; ++a) high[static_cast<std::size_t>(a)] = f(a) > 0;
  }
  double total = 0.0, cross = 0.0;
  for (Eigen::Index a = 0; a < c; ++a) {
    for (int j : adj[static_cast<std::size_t>(nodes[static_cast<std::size_t>(a)])]) {
      const int b = local[static_cast<std::size_t>(j)];
      if (b <= a) continue;
      total += 1.0;
      if (high[static_cast<std::size_t>(a)] != high[static_cast<std::size_t>(b)]) cross += 1.0;
    }
  }
  return cross / total;
}

GraphStats missing_graph_stats() {
  return {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN};
}

GraphStats graph_stats_from(const GraphSample& g, const Adjacency& adj, const IndexVector& labels,
                            const PathSummary& paths, double triangles_x3, double wedges, CutRule rule,
                            bool with_cut) {
  if (g.edges.empty()) return missing_graph_stats();
  const double n = g.n;
  GraphStats s;
  s.density = 2.0 * static_cast<double>(g.edges.size()) / (n * (n - 1.0));
  s.max_eigenvalue = max_adjacency_eigenvalue(adj, labels);
  s.avg_path_length = paths.finite_pairs > 0 ? paths.length_sum / paths.finite_pairs : kNaN;
  s.proximity = paths.inverse_sum / (n * (n - 1.0));
  s.clustering = wedges > 0 ? triangles_x3 / wedges : 0.0;
  s.n_components = labels.maxCoeff() + 1;
  const auto giant = giant_nodes(labels);
  s.giant_fraction = static_cast<double>(giant.size()) / n;
  // Diameter of the giant component: BFS from each giant node.
  int diameter = 0;
  for (int u : giant) diameter = std::max(diameter, bfs_distances(adj, u).maxCoeff());
  s.diameter = diameter;
  s.eigenvector_cut = with_cut ? cut_from_adjacency(adj, labels, rule) : kNaN;
  return s;
}

}  // namespace

IndexVector bfs_distances(const Adjacency& adj, int source) {
  IndexVector dist = IndexVector::Constant(static_cast<Eigen::Index>(adj.size()), -1);
  std::vector<int> queue{source};
  dist(source) = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int w : adj[static_cast<std::size_t>(u)]) {
      if (dist(w) < 0) {
        dist(w) = dist(u) + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

IndexVector connected_components(const Adjacency& adj) {
  const auto n = static_cast<Eigen::Index>(adj.size());
  IndexVector labels = IndexVector::Constant(n, -1);
  int next = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (labels(s) >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    labels(s) = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (labels(w) < 0) {
          labels(w) = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return labels;
}

std::pair<Vector, double> giant_eigenvector(const GraphSample& g) {
  const auto adj = g.adjacency();
  if (g.n == 0) return {Vector(), 0.0};
  return component_power_iteration(adj, giant_nodes(connected_components(adj)), g.n);
}

double eigenvector_cut(const GraphSample& g, CutRule rule) {
  if (g.edges.empty()) return kNaN;
  const auto adj = g.adjacency();
  return cut_from_adjacency(adj, connected_components(adj), rule);
}

Vector diffusion_centrality(const GraphSample& g, double q, int T) {
  if (!(q > 0) || T < 1) throw ValidationError("diffusion_centrality: need q > 0 and T >= 1");
  const auto adj = g.adjacency();
  Vector v = Vector::Ones(g.n);
  Vector total = Vector::Zero(g.n);
  Vector next(g.n);
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < g.n; ++i) {
      double s = 0.0;
      for (int j : adj[static_cast<std::size_t>(i)]) s += v(j);
      next(i) = q * s;
    }
    v.swap(next);
    total += v;
  }
  return total;
}

NodeStats compute_node_stats(const GraphSample& g, std::optional<int> seed_node, bool betweenness) {
  StatOptions options;
  options.seed_node = seed_node;
  options.betweenness = betweenness;
  options.eigenvector_cut = false;
  return compute_stats(g, options).node;
}

GraphStats compute_graph_stats(const GraphSample& g, CutRule rule, bool with_cut) {
  const auto adj = g.adjacency();
  const auto labels = connected_components(adj);
  const auto paths = all_pairs(adj, false);
  Vector clustering, support;
  double triangles_x3 = 0.0, wedges = 0.0;
  triangle_stats(adj, clustering, support, triangles_x3, wedges);
  return graph_stats_from(g, adj, labels, paths, triangles_x3, wedges, rule, with_cut);
}

StatReport compute_stats(const GraphSample& g, const StatOptions& options) {
  const auto adj = g.adjacency();
  const auto labels = connected_components(adj);
  const auto paths = all_pairs(adj, options.betweenness);
  StatReport r;
  r.node.degree = degrees_of(adj);
  if (g.n > 0) {
    r.node.eigenvector_centrality = component_power_iteration(adj, giant_nodes(labels), g.n).first;
  }
  r.node.betweenness = options.betweenness ? paths.betweenness : Vector::Constant(g.n, kNaN);
  r.node.closeness = paths.closeness;
  double triangles_x3 = 0.0, wedges = 0.0;
  triangle_stats(adj, r.node.clustering, r.node.support, triangles_x3, wedges);
  r.node.distance_from_seed = seed_distances(adj, g.n > 0 ? options.seed_node : std::nullopt);
  r.graph = graph_stats_from(g, adj, labels, paths, triangles_x3, wedges, options.cut_rule, options.eigenvector_cut);
  return r;
}

std::vector<StatReport> compute_stats_all(const std::vector<GraphSample>& graphs, const StatOptions& options) {
  std::vector<StatReport> out(graphs.size());
  parallel_for(graphs.size(), [&](std::size_t s) { out[s] = compute_stats(graphs[s], options); });
  return out;
}

const std::vector<std::string>& node_stat_names() {
  static const std::vector<std::string> names{"degree",     "eigenvector_centrality", "betweenness",
                                              "closeness",  "clustering",             "support",
                                              "distance_from_seed"};
  return names;
}

const std::vector<std::string>& graph_stat_names() {
  static const std::vector<std::string> names{"density",           "max_eigenvalue", "avg_path_length",
                                              "proximity",         "diameter",       "global_clustering",
                                              "n_components",      "giant_fraction", "eigenvector_cut"};
  return names;
}

Vector node_stat(const NodeStats& s, const std::string& name) {
  if (name == "degree") return s.degree;
  if (name == "eigenvector_centrality") return s.eigenvector_centrality;
  if (name == "betweenness") return s.betweenness;
  if (name == "closeness") return s.closeness;
  if (name == "clustering") return s.clustering;
  if (name == "support") return s.support;
  if (name == "distance_from_seed") return s.distance_from_seed;
  throw ValidationError("unknown node statistic: " + name);
}

double graph_stat(const GraphStats& s, const std::string& name) {
  if (name == "density") return s.density;
  if (name == "max_eigenvalue") return s.max_eigenvalue;
  if (name == "avg_path_length") return s.avg_path_length;
  if (name == "proximity") return s.proximity;
  if (name == "diameter") return s.diameter;
  if (name == "global_clustering") return s.clustering;
  if (name == "n_components") return s.n_components;
  if (name == "giant_fraction") return s.giant_fraction;
  if (name == "eigenvector_cut") return s.eigenvector_cut;
  throw ValidationError("unknown graph statistic: " + name);
}

namespace {

StatSummary summarize_columns(const std::vector<Vector>& values) {
  const auto width = values.front().size();
  StatSummary out{Vector::Constant(width, kNaN), Vector::Constant(width, kNaN)};
  for (Eigen::Index i = 0; i < width; ++i) {
    double sum = 0.0, count = 0.0;
    for (const auto& v : values) {
      if (std::isfinite(v(i))) {
        sum += v(i);
        count += 1.0;
      }
    }
    if (count == 0) continue;
    const double mean = sum / count;
    double ss = 0.0;
    for (const auto& v : values) {
      if (std::isfinite(v(i))) ss += (v(i) - mean) * (v(i) - mean);
    }
    out.mean(i) = mean;
    out.sd(i) = count > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  }
  return out;
}

bool parse_edge_selector(const std::string& selector, int& u, int& v) {
  static const std::regex pattern(R"(edge\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  std::smatch match;
  if (!std::regex_match(selector, match, pattern)) return false;
  u = std::stoi(match[1].str());
  v = std::stoi(match[2].str());
  return true;
}

bool is_node_stat(const std::string& name) {
  const auto& names = node_stat_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

StatSummary summarize_stat(const std::vector<StatReport>& reports, const std::string& selector) {
  if (reports.empty()) throw ValidationError("summarize_stat: need at least one graph");
  std::vector<Vector> values;
  values.reserve(reports.size());
  const bool node_level = is_node_stat(selector);
  for (const auto& r : reports) {
    if (node_level) {
      values.push_back(node_stat(r.node, selector));
    } else {
      values.push_back(Vector::Constant(1, graph_stat(r.graph, selector)));
    }
  }
  return summarize_columns(values);
}

StatSummary posterior_expected_stat(const std::vector<GraphSample>& graphs, const std::string& selector,
                                    const StatOptions& options) {
  if (graphs.empty()) throw ValidationError("posterior_expected_stat: need at least one graph");
  int u = 0, v = 0;
  if (parse_edge_selector(selector, u, v)) {
    std::vector<Vector> values;
    for (const auto& g : graphs) {
      if (u >= g.n || v >= g.n || u == v) throw ValidationError("posterior_expected_stat: invalid edge selector");
      values.push_back(Vector::Constant(1, g.has_edge(u, v) ? 1.0 : 0.0));
    }
    return summarize_columns(values);
  }
  if (selector == "degree") {
    std::vector<Vector> values;
    for (const auto& g : graphs) values.push_back(degrees_of(g.adjacency()));
    return summarize_columns(values);
  }
  return summarize_stat(compute_stats_all(graphs, options), selector);
}

}  // namespace ardnet
