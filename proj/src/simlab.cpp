#include <ardnet/likelihood.hpp>
#include <ardnet/parallel.hpp>
#include <ardnet/regress.hpp>
#include <ardnet/simlab.hpp>
#include <ardnet/sphere.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace ardnet {

void ExperimentConfig::validate() const {
  if (n < 10) throw ValidationError("experiment: n must be >= 10");
  if (K < n_anchors) throw ValidationError("experiment: K must be at least the number of anchors");
  if (n_anchors < 3) throw ValidationError("experiment: at least three anchored groups are required");
  if (p < 2) throw ValidationError("experiment: latent dimension p must be >= 2");
  if (!(zeta >= 0)) throw ValidationError("experiment: zeta must be >= 0");
  if (!(nu_sd >= 0)) throw ValidationError("experiment: nu_sd must be >= 0");
  if (!(psi > 0 && psi <= 1)) throw ValidationError("experiment: psi must lie in (0, 1]");
  if (mixture && !(mixture->lambda >= 0 && mixture->lambda <= 1)) {
    throw ValidationError("experiment: mixture lambda must lie in [0, 1]");
  }
  if (!(eta_low >= 0 && eta_high >= eta_low)) throw ValidationError("experiment: need 0 <= eta_low <= eta_high");
  if (n_reps < 1) throw ValidationError("experiment: n_reps must be >= 1");
  if (chains < 1) throw ValidationError("experiment: chains must be >= 1");
  if (graphs < 0) throw ValidationError("experiment: graphs must be >= 0");
  if (priors.p != p) throw ValidationError("experiment: priors.p must equal p");
}

IntMatrix construct_ard(const GraphSample& g, const IntMatrix& traits, const std::vector<int>& ard_index) {
  if (traits.rows() != g.n) throw ValidationError("construct_ard: trait matrix must have one row per node");
  const auto adj = g.adjacency();
  IntMatrix y = IntMatrix::Zero(static_cast<Eigen::Index>(ard_index.size()), traits.cols());
  for (std::size_t r = 0; r < ard_index.size(); ++r) {
    const int i = ard_index[r];
    if (i < 0 || i >= g.n) throw ValidationError("construct_ard: ARD node id out of range");
    for (int j : adj[static_cast<std::size_t>(i)]) y.row(static_cast<Eigen::Index>(r)) += traits.row(j);
  }
  return y;
}

namespace {

int octant_code(const Eigen::Ref<const Vector>& z) {
  int code = 0;
  for (Eigen::Index c = 0; c < z.size(); ++c) {
    if (z(c) >= 0) code |= 1 << c;
  }
  return code;
}

PointSet draw_centers(const ExperimentConfig& config, Rng& rng) {
  const int dim = config.dim();
  PointSet centers(config.K, dim);
  const int base = config.center_layout == CenterLayout::clustered ? std::min(4, config.K) : config.K;
  for (int k = 0; k < base; ++k) centers.row(k) = sphere::sample_uniform(dim, rng).transpose();
  for (int k = base; k < config.K; ++k) {
    const int parent = ((k - base) / 2) % base;
    centers.row(k) = sphere::sample_vmf(centers.row(parent).transpose(), 20.0, rng).transpose();
  }
  return centers;
}

IntMatrix::ColXpr assign_trait(IntMatrix& traits, int k, const PointSet& z, const Vector& center, double eta,
                               Rng& rng) {
  const double log_c = sphere::log_vmf_norm_const(eta, static_cast<int>(center.size()));
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const double density = std::exp(log_c + eta * z.row(i).dot(center));
    traits(i, k) = uniform01(rng) < std::min(1.0, density) ? 1 : 0;
  }
  return traits.col(k);
}

}  // namespace

SimTruth simulate_dgp(const ExperimentConfig& config, Rng& rng) {
  config.validate();
  const int n = config.n;
  const int dim = config.dim();
  SimTruth truth;

  // Positions.
  PointSet z(n, dim);
  if (config.two_communities) {
    Vector pole = Vector::Zero(dim);
    pole(0) = 1.0;
    for (int i = 0; i < n; ++i) {
      const Vector mu = i % 2 == 0 ? pole : Vector(-pole);
      z.row(i) = sphere::sample_vmf(mu, config.community_kappa, rng).transpose();
    }
  } else {
    for (int i = 0; i < n; ++i) z.row(i) = sphere::sample_uniform(dim, rng).transpose();
  }

  // Gregariousness and the nominal expected degree n exp(2 mu) of each node's component.
  Vector nu(n);
  Vector nominal(n);
  for (int i = 0; i < n; ++i) {
    double mean = config.nu_mean, sd = config.nu_sd;
    if (config.mixture) {
      const bool high = uniform01(rng) < config.mixture->lambda;
      mean = high ? config.mixture->mu_high : config.mixture->mu_low;
      sd = config.mixture->sigma;
    }
    nu(i) = mean + sd * standard_normal(rng);
    nominal(i) = n * std::exp(2.0 * mean);
  }

  // Graph.
  auto probs = link_probability_matrix(nu, z, config.zeta, nominal);
  if (probs.clamped > 0) {
    truth.warnings.push_back(std::to_string(probs.clamped) + " link probabilities clamped at 1");
  }
  truth.graph = sample_graph(probs.P, rng);
  truth.P = std::move(probs.P);

  // Groups and traits.
  const PointSet centers = draw_centers(config, rng);
  Vector eta(config.K);
  for (int k = 0; k < config.K; ++k) {
    eta(k) = config.eta_low + (config.eta_high - config.eta_low) * uniform01(rng);
  }
  truth.traits.resize(n, config.K);
  for (int k = 0; k < config.K; ++k) {
    const Vector center = centers.row(k).transpose();
    if (assign_trait(truth.traits, k, z, center, eta(k), rng).sum() == 0 &&
        assign_trait(truth.traits, k, z, center, eta(k), rng).sum() == 0) {
      truth.warnings.push_back("trait " + std::to_string(k) + " is empty after one resample");
    }
  }

  // ARD sample, constructed counts, census and covariates.
  const int m = static_cast<int>(std::ceil(config.psi * n - 1e-9));
  ArdDataset& data = truth.data;
  data.n = n;
  data.ard_index.resize(static_cast<std::size_t>(m));
  std::iota(data.ard_index.begin(), data.ard_index.end(), 0);
  data.y = construct_ard(truth.graph, truth.traits, data.ard_index);
  data.census_traits = truth.traits;
  data.group_sizes = truth.traits.cast<double>().colwise().sum().transpose();
  for (int k = 0; k < config.K; ++k) data.trait_names.push_back("trait" + std::to_string(k + 1));

  truth.covariate_x1.resize(n);
  truth.covariate_x2.resize(n);
  for (int i = 0; i < n; ++i) {
    truth.covariate_x1(i) = nu(i) + config.covariate_sd * standard_normal(rng);
    truth.covariate_x2(i) = octant_code(z.row(i).transpose());
  }
  data.covariate_distance.resize(n - m, m);
  for (int j = m; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      data.covariate_distance(j - m, i) = std::abs(truth.covariate_x1(j) - truth.covariate_x1(i)) +
                                          (truth.covariate_x2(j) != truth.covariate_x2(i) ? 1.0 : 0.0);
    }
  }

  // True parameters.
  ModelParams& params = truth.params;
  params.z = z;
  params.nu = nu;
  const Vector expected = truth.P.rowwise().sum();
  params.log_d = expected.array().max(1e-12).log();
  params.beta = (data.group_sizes / static_cast<double>(n)).array().max(1e-12).log();
  params.centers = centers;
  params.eta = eta;
  params.zeta = config.zeta;
  params.mu_d = params.log_d.mean();
  params.sigma2_d = (params.log_d.array() - params.mu_d).square().mean();
  params.mu_beta = params.beta.mean();
  params.sigma2_beta = (params.beta.array() - params.mu_beta).square().mean();
  for (int a = 0; a < config.n_anchors; ++a) params.fixed_centers.push_back(a);

  truth.anchors.groups = params.fixed_centers;
  truth.anchors.targets = centers.topRows(config.n_anchors);
  return truth;
}

double scaled_mse(const Vector& estimates, const Vector& truths) {
  if (estimates.size() != truths.size() || estimates.size() == 0) {
    throw ValidationError("scaled_mse: need equal, nonzero lengths");
  }
  const double mean_truth = truths.mean();
  if (mean_truth == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (estimates - truths).squaredNorm() / static_cast<double>(truths.size()) / (mean_truth * mean_truth);
}

Confusion top_decile_confusion(const Vector& estimated, const Vector& truth) {
  const auto n = truth.size();
  if (estimated.size() != n) throw ValidationError("top_decile_confusion: vectors differ in length");
  if (n < 10) throw ValidationError("top_decile_confusion: need at least 10 nodes");
  const auto top = (n + 9) / 10;
  auto top_set = [&](const Vector& v) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v(a) > v(b); });
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (Eigen::Index r = 0; r < top; ++r) in[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = 1;
    return in;
  };
  const auto t = top_set(truth);
  const auto e = top_set(estimated);
  Confusion out;
  for (std::size_t i = 0; i < t.size(); ++i) out.counts(t[i] ? 0 : 1, e[i] ? 0 : 1) += 1.0;
  out.tpr = out.counts(0, 0) / (out.counts(0, 0) + out.counts(0, 1));
  return out;
}

PosteriorDraws beta_model_baseline(const ArdDataset& data, const PriorConfig& priors, std::uint64_t seed,
                                   const SamplerOptions& options) {
  PriorConfig baseline = priors;
  baseline.latent_model = false;
  return run_chain(data, baseline, default_anchors(baseline.dim()), seed, options);
}

// ---- experiment grid ----------------------------------------------------------

std::size_t ExperimentGrid::cell_count() const {
  std::size_t count = 1;
  for (const auto& [name, values] : axes) count *= values.size();
  return axes.empty() ? 1 : count;
}

std::vector<std::pair<std::string, double>> ExperimentGrid::cell(std::size_t index) const {
  std::vector<std::pair<std::string, double>> out(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& values = axes[a].second;
    out[a] = {axes[a].first, values[index % values.size()]};
    index /= values.size();
  }
  return out;
}

ExperimentConfig apply_cell(const ExperimentConfig& base, const std::vector<std::pair<std::string, double>>& cell) {
  ExperimentConfig c = base;
  for (const auto& [name, value] : cell) {
    if (name == "n") {
      c.n = static_cast<int>(value);
    } else if (name == "K") {
      c.K = static_cast<int>(value);
    } else if (name == "p") {
      c.p = static_cast<int>(value);
      c.priors.p = c.p;
    } else if (name == "zeta") {
      c.zeta = value;
    } else if (name == "mu") {
      c.nu_mean = value;
    } else if (name == "sd") {
      c.nu_sd = value;
    } else if (name == "psi") {
      c.psi = value;
    } else if (name == "lambda") {
      if (!c.mixture) c.mixture = MixtureConfig{};
      c.mixture->lambda = value;
    } else if (name == "eta_low") {
      c.eta_low = value;
    } else if (name == "eta_high") {
      c.eta_high = value;
    } else {
      throw ValidationError("experiment grid: unknown axis '" + name + "'");
    }
  }
  return c;
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  Rng rng = make_stream(seed, a, b, c);
  return rng();
}

PosteriorDraws pool_chains(const std::vector<PosteriorDraws>& chains) {
  PosteriorDraws pooled = chains.front();
  for (std::size_t c = 1; c < chains.size(); ++c) {
    pooled.draws.insert(pooled.draws.end(), chains[c].draws.begin(), chains[c].draws.end());
    pooled.sweeps.insert(pooled.sweeps.end(), chains[c].sweeps.begin(), chains[c].sweeps.end());
  }
  return pooled;
}

double pearson(const Vector& a, const Vector& b) {
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  const double denom = std::sqrt(ca.squaredNorm() * cb.squaredNorm());
  return denom > 0 ? ca.dot(cb) / denom : std::numeric_limits<double>::quiet_NaN();
}

ResultRow node_row(const Vector& est_all, const Vector& truth_all, const std::vector<int>& nodes) {
  std::vector<double> e, t;
  for (int i : nodes) {
    if (std::isfinite(est_all(i)) && std::isfinite(truth_all(i))) {
      e.push_back(est_all(i));
      t.push_back(truth_all(i));
    }
  }
  ResultRow row;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  if (e.empty()) {
    row.truth = row.estimate = row.pct_error = row.pct_error_sd = row.scaled_mse = row.correlation = kNaN;
    return row;
  }
  const Eigen::Map<const Vector> ev(e.data(), static_cast<Eigen::Index>(e.size()));
  const Eigen::Map<const Vector> tv(t.data(), static_cast<Eigen::Index>(t.size()));
  row.truth = tv.mean();
  row.estimate = ev.mean();
  std::vector<double> pct;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (t[i] != 0.0) pct.push_back((e[i] - t[i]) / t[i]);
  }
  if (pct.empty()) {
    row.pct_error = row.pct_error_sd = kNaN;
  } else {
    const Eigen::Map<const Vector> pv(pct.data(), static_cast<Eigen::Index>(pct.size()));
    row.pct_error = pv.mean();
    row.pct_error_sd = pct.size() > 1 ? std::sqrt((pv.array() - pv.mean()).square().sum() / (pv.size() - 1.0)) : 0.0;
  }
  row.scaled_mse = scaled_mse(ev, tv);
  row.correlation = pearson(ev, tv);
  return row;
}

}  // namespace

RepOutcome run_replication(const ExperimentConfig& config, std::size_t cell, int rep, const StatOptions& stats,
                           const SamplerOptions& sampler) {
  config.validate();
  RepOutcome out;
  Rng rng = make_stream(config.seed, cell, static_cast<std::uint64_t>(rep), 0x5d);
  out.truth = simulate_dgp(config, rng);
  const auto validated = validate_dataset(out.truth.data, config.priors.min_sampling_share, config.n_anchors);
  const AnchorSpec anchors = config.priors.latent_model ? out.truth.anchors : default_anchors(config.dim());
  for (int c = 0; c < config.chains; ++c) {
    const auto seed = derive_seed(config.seed, cell, static_cast<std::uint64_t>(rep), 0x100 + c);
    out.chains.push_back(run_chain(validated.data, config.priors, anchors, seed, sampler));
  }
  PosteriorGraphOptions graph_options;
  graph_options.knn_k = config.priors.knn_k;
  graph_options.seed = derive_seed(config.seed, cell, static_cast<std::uint64_t>(rep), 0x200);
  out.graphs = draw_posterior_graphs(pool_chains(out.chains), validated.data, config.graphs, graph_options);
  out.true_stats = compute_stats(out.truth.graph, stats);
  out.estimated_stats = compute_stats_all(out.graphs, stats);
  return out;
}

std::vector<ResultRow> compare_replication(const RepOutcome& outcome, std::size_t cell, int rep,
                                           const std::vector<std::pair<std::string, double>>& params) {
  std::vector<ResultRow> rows;
  if (outcome.estimated_stats.empty()) return rows;
  const int n = outcome.truth.data.n;
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  const auto& ard = outcome.truth.data.ard_index;
  for (const auto& name : node_stat_names()) {
    const Vector truth = node_stat(outcome.true_stats.node, name);
    if (truth.size() == 0 || truth.array().isNaN().all()) continue;
    const Vector est = summarize_stat(outcome.estimated_stats, name).mean;
    const std::vector<std::pair<std::string, const std::vector<int>*>> levels{{"node:ARD", &ard}, {"node:all", &all}};
    for (const auto& [level, nodes] : levels) {
      ResultRow row = node_row(est, truth, *nodes);
      row.level = level;
      row.statistic = name;
      rows.push_back(std::move(row));
    }
  }
  for (const auto& name : graph_stat_names()) {
    const double truth = graph_stat(outcome.true_stats.graph, name);
    const double est = summarize_stat(outcome.estimated_stats, name).mean(0);
    if (std::isnan(truth) && std::isnan(est)) continue;
    ResultRow row;
    row.level = "graph";
    row.statistic = name;
    row.truth = truth;
    row.estimate = est;
    row.pct_error = truth != 0 ? (est - truth) / truth : std::numeric_limits<double>::quiet_NaN();
    row.pct_error_sd = 0.0;
    row.scaled_mse = truth != 0 ? (est - truth) * (est - truth) / (truth * truth) : std::numeric_limits<double>::quiet_NaN();
    row.correlation = std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  for (auto& row : rows) {
    row.cell = cell;
    row.rep = rep;
    row.params = params;
  }
  return rows;
}

std::vector<ResultRow> run_experiment_grid(const ExperimentConfig& base, const ExperimentGrid& grid,
                                           const StatOptions& stats) {
  for (const auto& [name, values] : grid.axes) {
    if (values.empty()) throw ValidationError("experiment grid: axis '" + name + "' has no values");
  }
  const std::size_t cells = grid.cell_count();
  // Unknown axes and invalid cell configurations fail before any work starts.
  for (std::size_t cell = 0; cell < cells; ++cell) apply_cell(base, grid.cell(cell)).validate();
  const auto reps = static_cast<std::size_t>(base.n_reps);
  std::vector<std::vector<ResultRow>> slots(cells * reps);
  parallel_for(slots.size(), [&](std::size_t task) {
    const std::size_t cell = task / reps;
    const int rep = static_cast<int>(task % reps);
    const auto params = grid.cell(cell);
    try {
      const ExperimentConfig config = apply_cell(base, params);
      slots[task] = compare_replication(run_replication(config, cell, rep, stats), cell, rep, params);
    } catch (const std::exception& e) {
      ResultRow row;
      row.cell = cell;
      row.rep = rep;
      row.params = params;
      row.level = "error";
      row.statistic = "";
      row.status = std::string("error: ") + e.what();
      slots[task] = {row};
    }
  });
  std::vector<ResultRow> rows;
  for (auto& s : slots) rows.insert(rows.end(), s.begin(), s.end());
  return rows;
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << std::setprecision(10);
  out << "cell";
  if (!rows.empty()) {
    for (const auto& [name, value] : rows.front().params) out << ',' << name;
  }
  out << ",rep,level,statistic,true,estimated,pct_error,pct_error_sd,scaled_mse,correlation,status\n";
  for (const auto& r : rows) {
    out << r.cell;
    for (const auto& [name, value] : r.params) out << ',' << value;
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << ',' << r.rep << ',' << r.level << ',' << r.statistic << ',' << r.truth << ',' << r.estimate << ','
        << r.pct_error << ',' << r.pct_error_sd << ',' << r.scaled_mse << ',' << r.correlation << ',' << status
        << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

// ---- scaled-MSE taxonomy --------------------------------------------------------

TaxonomyResult mse_taxonomy(const ExperimentConfig& config, int reps, int graphs) {
  if (reps < 1 || graphs < 1) throw ValidationError("mse_taxonomy: need reps >= 1 and graphs >= 1");
  const std::vector<std::string> node_names{"degree", "eigenvector_centrality"};
  const std::vector<std::string> graph_names{"density",          "max_eigenvalue", "avg_path_length", "proximity",
                                             "diameter",         "global_clustering", "n_components",
                                             "giant_fraction"};
  StatOptions options;
  options.seed_node = std::nullopt;
  options.betweenness = false;
  options.eigenvector_cut = false;

  struct RepResult {
    std::map<std::string, std::pair<Vector, Vector>> node;  // estimate, truth
    std::map<std::string, std::pair<double, double>> graph;
    double link_sq = 0, link_cf = 0, diff_sum = 0, diff_sq = 0, pairs = 0, truth_sum = 0;
  };
  std::vector<RepResult> results(static_cast<std::size_t>(reps));
  parallel_for(results.size(), [&](std::size_t r) {
    Rng rng = make_stream(config.seed, 0x7a, r);
    const SimTruth truth = simulate_dgp(config, rng);
    std::vector<GraphSample> draws(static_cast<std::size_t>(graphs));
    for (auto& g : draws) g = sample_graph(truth.P, rng);
    const auto est = compute_stats_all(draws, options);
    const auto tru = compute_stats(truth.graph, options);
    RepResult& out = results[r];
    for (const auto& name : node_names) {
      out.node[name] = {summarize_stat(est, name).mean, node_stat(tru.node, name)};
    }
    for (const auto& name : graph_names) {
      out.graph[name] = {summarize_stat(est, name).mean(0), graph_stat(tru.graph, name)};
    }
    // Single link: one graph draw as the estimate of each g*_ij.
    const GraphSample& one = draws.front();
    for (int i = 0; i < truth.graph.n; ++i) {
      for (int j = i + 1; j < truth.graph.n; ++j) {
        const double p = truth.P(i, j);
        const double gs = truth.graph.has_edge(i, j) ? 1.0 : 0.0;
        const double gh = one.has_edge(i, j) ? 1.0 : 0.0;
        const double sq = (gh - gs) * (gh - gs);
        const double cf = p * (1.0 - 2.0 * gs) + gs;
        out.link_sq += sq;
        out.link_cf += cf;
        out.diff_sum += sq - cf;
        out.diff_sq += (sq - cf) * (sq - cf);
        out.truth_sum += gs;
        out.pairs += 1.0;
      }
    }
  });

  TaxonomyResult out;
  for (const auto& name : node_names) {
    std::vector<double> e, t;
    for (const auto& r : results) {
      const auto& [ev, tv] = r.node.at(name);
      e.insert(e.end(), ev.data(), ev.data() + ev.size());
      t.insert(t.end(), tv.data(), tv.data() + tv.size());
    }
    out.node_mse[name] = scaled_mse(Eigen::Map<Vector>(e.data(), static_cast<Eigen::Index>(e.size())),
                                    Eigen::Map<Vector>(t.data(), static_cast<Eigen::Index>(t.size())));
  }
  for (const auto& name : graph_names) {
    std::vector<double> e, t;
    for (const auto& r : results) {
      const auto [ev, tv] = r.graph.at(name);
      if (std::isfinite(ev) && std::isfinite(tv)) {
        e.push_back(ev);
        t.push_back(tv);
      }
    }
    out.graph_mse[name] = e.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : scaled_mse(Eigen::Map<Vector>(e.data(), static_cast<Eigen::Index>(e.size())),
                                                 Eigen::Map<Vector>(t.data(), static_cast<Eigen::Index>(t.size())));
  }
  double sq = 0, cf = 0, ds = 0, dq = 0, pairs = 0, ts = 0;
  for (const auto& r : results) {
    sq += r.link_sq;
    cf += r.link_cf;
    ds += r.diff_sum;
    dq += r.diff_sq;
    pairs += r.pairs;
    ts += r.truth_sum;
  }
  out.link_mse = sq / pairs;
  out.link_closed_form = cf / pairs;
  const double mean_diff = ds / pairs;
  out.link_difference_se = std::sqrt(std::max(0.0, dq / pairs - mean_diff * mean_diff) / pairs);
  const double mean_truth = ts / pairs;
  out.link_scaled_mse = out.link_mse / (mean_truth * mean_truth);
  out.link_scaled_closed_form = out.link_closed_form / (mean_truth * mean_truth);
  return out;
}

// ---- many-networks regression -----------------------------------------------------

RegressionTrialResult many_networks_regression(const ExperimentConfig& base, int networks, int graphs, double alpha,
                                               double beta, double noise_sd, int bootstrap, Rng& rng) {
  if (networks < 4 || graphs < 1) throw ValidationError("many_networks_regression: need >= 4 networks and >= 1 graph");
  Vector y(networks);
  Matrix x(networks, 1);
  for (int r = 0; r < networks; ++r) {
    ExperimentConfig c = base;
    c.nu_mean = -1.96 + (1.96 - 0.58) * uniform01(rng);
    const SimTruth truth = simulate_dgp(c, rng);
    const double realized = 2.0 * static_cast<double>(truth.graph.edges.size()) / c.n;
    double posterior_mean = 0.0;
    for (int s = 0; s < graphs; ++s) {
      posterior_mean += 2.0 * static_cast<double>(sample_graph(truth.P, rng).edges.size()) / c.n;
    }
    x(r, 0) = posterior_mean / graphs;
    y(r) = alpha + beta * realized + noise_sd * standard_normal(rng);
  }
  OlsOptions options;
  options.bootstrap = bootstrap;
  options.seed = rng();
  const auto fit = ols_regress(y, x, options);
  RegressionTrialResult out;
  out.beta_hat = fit.coefficients(1);
  out.bootstrap_sd = fit.bootstrap_sd(1);
  out.covered = std::abs(out.beta_hat - beta) <= 2.0 * out.bootstrap_sd;
  return out;
}

}  // namespace ardnet
