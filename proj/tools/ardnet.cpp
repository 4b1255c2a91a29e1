// Command-line front end. Exit codes: 0 success, 1 validation error,
// 2 numerical failure, 3 I/O error. ARDNET_THREADS sets the default
// parallelism; --threads overrides it.

#include <ardnet/graphs.hpp>
#include <ardnet/io.hpp>
#include <ardnet/likelihood.hpp>
#include <ardnet/parallel.hpp>
#include <ardnet/regress.hpp>
#include <ardnet/sampler.hpp>
#include <ardnet/simlab.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <mutex>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

namespace fs = std::filesystem;
using namespace ardnet;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;

struct FitArgs {
  fs::path in, out, config;
  std::optional<int> village;
  std::optional<int> chains;
  std::optional<std::uint64_t> seed;
  std::optional<int> p;
  std::optional<int> T;
  std::optional<int> graphs;
  std::optional<std::string> degree_mode;
  std::optional<double> pinned_mean;
  bool beta_baseline = false;
  bool quiet = false;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  Rng rng = make_stream(seed, a, b, 0xf17);
  return rng();
}

int run_fit(const FitArgs& args) {
  // Defaults < config file < flags.
  Json file = args.config.empty() ? Json::object() : read_json_file(args.config);
  PriorConfig priors = priors_from_json(file.value("priors", Json::object()));
  int chains = file.value("chains", 2);
  std::uint64_t seed = file.value("seed", std::uint64_t{1});
  bool beta_baseline = file.value("beta_baseline", false);
  std::vector<int> villages = file.value("villages", std::vector<int>{});
  if (args.chains) chains = *args.chains;
  if (args.seed) seed = *args.seed;
  if (args.p) priors.p = *args.p;
  if (args.T) priors.T = *args.T;
  if (args.graphs) priors.n_graph_draws = *args.graphs;
  if (args.degree_mode) priors.degree_mode = parse_degree_mode(*args.degree_mode);
  if (args.pinned_mean) priors.pinned_mean_degree = *args.pinned_mean;
  if (args.beta_baseline) beta_baseline = true;
  if (beta_baseline) priors.latent_model = false;
  if (args.village) villages = {*args.village};
  if (villages.empty()) villages = discover_villages(args.in);
  if (villages.empty()) throw IoError(args.in.string() + ": no ARD_SURVEY_<i>.csv files found");
  if (chains < 1) throw ValidationError("--chains must be >= 1");
  priors.validate();

  Json run_config;
  run_config["priors"] = to_json(priors);
  run_config["chains"] = chains;
  run_config["seed"] = seed;
  run_config["beta_baseline"] = beta_baseline;
  run_config["villages"] = villages;

  std::vector<VillageResult> results(villages.size());
  const AnchorSpec anchors = default_anchors(priors.dim());
  // Villages in parallel; chains and graph draws inside a village run on the same worker.
  parallel_for(villages.size(), [&](std::size_t v) {
    VillageResult& res = results[v];
    res.village = villages[v];
    const auto validated =
        validate_dataset(load_village_inputs(args.in, res.village), priors.min_sampling_share, 3);
    res.data = validated.data;
    res.warnings = validated.warnings;
    if (validated.excluded) return;
    for (int c = 0; c < chains; ++c) {
      SamplerOptions options;
      if (!args.quiet) {
        options.progress = [village = res.village, c](const std::string& line) {
          static std::mutex mutex;
          std::lock_guard lock(mutex);
          std::cerr << "[village " << village << " chain " << c << "] " << line << '\n';
        };
      }
      res.chains.push_back(run_chain(res.data, priors, anchors, derive_seed(seed, res.village, c), options));
    }
    if (priors.latent_model && !res.chains.front().draws.empty() &&
        !concentrations_distinct(res.chains.front().draws.back().eta)) {
      res.warnings.push_back("all group concentrations coincide; positions are weakly identified");
    }
    PosteriorDraws pooled = res.chains.front();
    for (std::size_t c = 1; c < res.chains.size(); ++c) {
      pooled.draws.insert(pooled.draws.end(), res.chains[c].draws.begin(), res.chains[c].draws.end());
    }
    PosteriorGraphOptions graph_options;
    graph_options.knn_k = priors.knn_k;
    graph_options.seed = derive_seed(seed, res.village, 0x9a);
    res.graphs = draw_posterior_graphs(pooled, res.data, priors.n_graph_draws, graph_options);
    if (priors.n_graph_draws > static_cast<int>(pooled.draws.size())) {
      res.warnings.push_back("more graphs than retained draws; draws reused with fresh Bernoulli randomness");
    }
    res.reports = compute_stats_all(res.graphs);
  });
  const Json manifest = write_outputs(results, args.out, run_config, seed);
  if (!args.quiet) std::cerr << "wrote " << manifest["files"].size() << " files to " << args.out.string() << '\n';
  return 0;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "NA";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

int run_simulate(const fs::path& config_path, const fs::path& out) {
  const Json file = read_json_file(config_path);
  const ExperimentConfig config = experiment_from_json(file);
  config.validate();
  std::vector<SimTruth> truths(static_cast<std::size_t>(config.n_reps));
  parallel_for(truths.size(), [&](std::size_t r) {
    Rng rng = make_stream(config.seed, 0x51a, r);
    truths[r] = simulate_dgp(config, rng);
  });
  for (std::size_t r = 0; r < truths.size(); ++r) {
    const int village = static_cast<int>(r) + 1;
    const SimTruth& t = truths[r];
    write_village_inputs(t.data, out, village);
    const std::string tag = std::to_string(village);
    write_edge_list(t.graph, out / "truth" / ("graph_" + tag + ".csv"));
    std::ostringstream nodes;
    nodes << "node,ard,nu,expected_degree";
    for (int c = 0; c < config.dim(); ++c) nodes << ",z" << c + 1;
    nodes << '\n';
    for (int i = 0; i < t.data.n; ++i) {
      nodes << i << ',' << (i < t.data.m() ? 1 : 0) << ',' << fmt(t.params.nu(i)) << ','
            << fmt(std::exp(t.params.log_d(i)));
      for (int c = 0; c < config.dim(); ++c) nodes << ',' << fmt(t.params.z(i, c));
      nodes << '\n';
    }
    write_text_file(out / "truth" / ("nodes_" + tag + ".csv"), nodes.str());
    Json params;
    params["zeta"] = t.params.zeta;
    params["eta"] = std::vector<double>(t.params.eta.data(), t.params.eta.data() + t.params.eta.size());
    Json centers = Json::array();
    for (Eigen::Index k = 0; k < t.params.centers.rows(); ++k) {
      centers.push_back(std::vector<double>(t.params.centers.row(k).data(),
                                            t.params.centers.row(k).data() + t.params.centers.cols()));
    }
    params["centers"] = centers;
    params["anchored_groups"] = t.anchors.groups;
    params["warnings"] = t.warnings;
    write_text_file(out / "truth" / ("params_" + tag + ".json"), params.dump(2) + "\n");
  }
  Json manifest;
  manifest["tool"] = "ardnet simulate";
  manifest["config"] = to_json(config);
  manifest["config_hash"] = config_hash(manifest["config"]);
  manifest["villages"] = config.n_reps;
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

int run_stats(const fs::path& graphs_dir, const fs::path& out, std::optional<int> seed_node, double dc_q, int dc_T) {
  if (!fs::is_directory(graphs_dir)) throw IoError(graphs_dir.string() + ": not a directory");
  static const std::regex pattern(R"(graph_(\d+)_(\d+)\.csv)");
  std::vector<std::tuple<int, int, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(graphs_dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) found.emplace_back(std::stoi(m[1]), std::stoi(m[2]), entry.path());
  }
  if (found.empty()) throw IoError(graphs_dir.string() + ": no graph_<i>_<s>.csv files");
  std::sort(found.begin(), found.end());
  std::vector<GraphSample> graphs;
  for (const auto& [village, s, path] : found) {
    int n = -1;
    const fs::path nodes_file = graphs_dir / ("nodes_" + std::to_string(village) + ".txt");
    if (fs::exists(nodes_file)) {
      std::ifstream in(nodes_file);
      if (!(in >> n)) throw IoError(nodes_file.string() + ": expected a node count");
    }
    graphs.push_back(read_edge_list(path, n));
  }
  StatOptions options;
  options.seed_node = seed_node;
  const auto reports = compute_stats_all(graphs, options);

  std::ostringstream node_rows, graph_rows;
  node_rows << "village,graph,node";
  for (const auto& name : node_stat_names()) node_rows << ',' << name;
  if (dc_T > 0) node_rows << ",diffusion_centrality";
  node_rows << '\n';
  graph_rows << "village,graph";
  for (const auto& name : graph_stat_names()) graph_rows << ',' << name;
  graph_rows << '\n';
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    const auto& [village, s, path] = found[g];
    Vector dc;
    if (dc_T > 0) dc = diffusion_centrality(graphs[g], dc_q, dc_T);
    for (int i = 0; i < graphs[g].n; ++i) {
      node_rows << village << ',' << s << ',' << i;
      for (const auto& name : node_stat_names()) node_rows << ',' << fmt(node_stat(reports[g].node, name)(i));
      if (dc_T > 0) node_rows << ',' << fmt(dc(i));
      node_rows << '\n';
    }
    graph_rows << village << ',' << s;
    for (const auto& name : graph_stat_names()) graph_rows << ',' << fmt(graph_stat(reports[g].graph, name));
    graph_rows << '\n';
  }
  write_text_file(out, node_rows.str());
  fs::path graph_out = out;
  graph_out.replace_filename(out.stem().string() + "_graph_level" + out.extension().string());
  write_text_file(graph_out, graph_rows.str());
  return 0;
}

int run_experiment(const fs::path& grid_path, const fs::path& out) {
  const Json file = read_json_file(grid_path);
  const ExperimentConfig base = experiment_from_json(file.value("base", Json::object()));
  ExperimentGrid grid;
  if (file.contains("axes")) {
    const Json& axes = file["axes"];
    if (axes.is_array()) {
      for (const auto& a : axes) grid.axes.emplace_back(a.at("name").get<std::string>(), a.at("values").get<std::vector<double>>());
    } else {
      for (const auto& [name, values] : axes.items()) grid.axes.emplace_back(name, values.get<std::vector<double>>());
    }
  }
  StatOptions stats;
  if (file.contains("stats")) {
    stats.betweenness = file["stats"].value("betweenness", true);
    stats.eigenvector_cut = file["stats"].value("eigenvector_cut", true);
  }
  const auto rows = run_experiment_grid(base, grid, stats);
  fs::create_directories(out);
  write_results_csv(rows, (out / "results.csv").string());
  Json manifest;
  manifest["tool"] = "ardnet experiment";
  manifest["config"] = file;
  manifest["config_hash"] = config_hash(file);
  manifest["cells"] = grid.cell_count();
  manifest["rows"] = rows.size();
  int failures = 0;
  for (const auto& r : rows) failures += r.status == "ok" ? 0 : 1;
  manifest["failed_reps"] = failures;
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

Matrix read_numeric_table(const fs::path& path, std::vector<std::string>& header) {
  const CsvTable t = read_csv(path);
  header = t.header;
  Matrix m(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_number(t.rows[r][c], path, r + 2, c + 1);
    }
  }
  return m;
}

int run_regress(const fs::path& y_path, const fs::path& x_path, const fs::path& cluster_path, int bootstrap,
                std::uint64_t seed) {
  std::vector<std::string> y_header, x_header, c_header;
  const Matrix y = read_numeric_table(y_path, y_header);
  const Matrix x = read_numeric_table(x_path, x_header);
  if (y.cols() != 1) throw ValidationError(y_path.string() + ": expected a single column");
  OlsOptions options;
  options.bootstrap = bootstrap;
  options.seed = seed;
  if (!cluster_path.empty()) {
    const Matrix c = read_numeric_table(cluster_path, c_header);
    if (c.cols() != 1) throw ValidationError(cluster_path.string() + ": expected a single column");
    std::vector<int> ids(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index r = 0; r < c.rows(); ++r) ids[static_cast<std::size_t>(r)] = static_cast<int>(c(r, 0));
    options.clusters = ids;
  }
  const auto fit = ols_regress(y.col(0), x, options);
  std::cout << "term,estimate,bootstrap_sd\n";
  for (Eigen::Index j = 0; j < fit.coefficients.size(); ++j) {
    const std::string term = j == 0 ? "(intercept)" : x_header[static_cast<std::size_t>(j - 1)];
    std::cout << term << ',' << fmt(fit.coefficients(j)) << ','
              << (fit.bootstrap_sd.size() ? fmt(fit.bootstrap_sd(j)) : std::string("NA")) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ardnet: latent-surface network estimation from aggregated relational data"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: ARDNET_THREADS or all cores)");
  app.set_version_flag("--version", std::string(ARDNET_VERSION));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "estimate the model for each village and draw posterior graphs");
  fit_cmd->add_option("--in", fit.in, "input folder")->required();
  fit_cmd->add_option("--out", fit.out, "output folder (OUT)")->required();
  fit_cmd->add_option("--config", fit.config, "JSON run configuration");
  fit_cmd->add_option("--village", fit.village, "only this village index");
  fit_cmd->add_option("--chains", fit.chains, "chains per village");
  fit_cmd->add_option("--seed", fit.seed, "random seed");
  fit_cmd->add_option("--p", fit.p, "latent dimension p (positions in R^{p+1})");
  fit_cmd->add_option("--T", fit.T, "sweeps per chain (even)");
  fit_cmd->add_option("--graphs", fit.graphs, "posterior graph draws S");
  fit_cmd->add_option("--degree-mode", fit.degree_mode, "observed | estimated | pinned");
  fit_cmd->add_option("--pinned-mean-degree", fit.pinned_mean, "mean degree in pinned mode");
  fit_cmd->add_flag("--beta-baseline", fit.beta_baseline, "fit the beta model (zeta = 0, no positions)");
  fit_cmd->add_flag("--quiet", fit.quiet, "no progress output");

  fs::path sim_config, sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "write synthetic village bundles plus truth files");
  sim_cmd->add_option("--config", sim_config, "JSON experiment configuration")->required();
  sim_cmd->add_option("--out", sim_out, "output folder")->required();

  fs::path stats_graphs, stats_out;
  std::optional<int> seed_node = 0;
  double dc_q = 0.0;
  int dc_T = 0;
  auto* stats_cmd = app.add_subcommand("stats", "network statistics for edge-list files");
  stats_cmd->add_option("--graphs", stats_graphs, "folder with graph_<i>_<s>.csv files")->required();
  stats_cmd->add_option("--out", stats_out, "node-level CSV (graph level goes to <stem>_graph_level.csv)")->required();
  stats_cmd->add_option("--seed-node", seed_node, "seed node for distance_from_seed");
  stats_cmd->add_option("--dc-q", dc_q, "diffusion centrality q");
  stats_cmd->add_option("--dc-T", dc_T, "diffusion centrality T");

  fs::path grid_file, grid_out;
  auto* exp_cmd = app.add_subcommand("experiment", "run a simulation grid");
  exp_cmd->add_option("--grid", grid_file, "JSON grid specification")->required();
  exp_cmd->add_option("--out", grid_out, "output folder")->required();

  fs::path reg_y, reg_x, reg_cluster;
  int reg_bootstrap = 1000;
  std::uint64_t reg_seed = 1;
  auto* reg_cmd = app.add_subcommand("regress", "OLS with optional cluster block bootstrap");
  reg_cmd->add_option("--y", reg_y, "CSV with one outcome column")->required();
  reg_cmd->add_option("--x", reg_x, "CSV of regressors")->required();
  reg_cmd->add_option("--cluster", reg_cluster, "CSV with one cluster-id column");
  reg_cmd->add_option("--bootstrap", reg_bootstrap, "bootstrap replications (0 disables)");
  reg_cmd->add_option("--seed", reg_seed, "bootstrap seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*fit_cmd) return run_fit(fit);
    if (*sim_cmd) return run_simulate(sim_config, sim_out);
    if (*stats_cmd) {
      if (dc_T > 0 && !(dc_q > 0)) throw ValidationError("--dc-T needs --dc-q > 0");
      return run_stats(stats_graphs, stats_out, seed_node, dc_q, dc_T);
    }
    if (*exp_cmd) return run_experiment(grid_file, grid_out);
    if (*reg_cmd) return run_regress(reg_y, reg_x, reg_cluster, reg_bootstrap, reg_seed);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
