#include <ardnet/io.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>

namespace ardnet {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string survey_name(int i) { return "ARD_SURVEY_" + std::to_string(i) + ".csv"; }
std::string census_name(int i) { return "ARD_CENSUS_" + std::to_string(i) + ".csv"; }
std::string distance_name(int i) { return "distance_" + std::to_string(i) + ".csv"; }

}  // namespace

void write_text_file(const fs::path& path, const std::string& body) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
  if (!out) throw IoError("failed while writing " + path.string());
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open file");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size()) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": expected " << table.header.size() << " columns, found "
         << cells.size();
      throw IoError(os.str());
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw IoError(path.string() + ": missing header row");
  return table;
}

double parse_number(const std::string& cell, const fs::path& path, std::size_t line, std::size_t column) {
  double value = 0.0;
  std::size_t used = 0;
  bool ok = !cell.empty();
  if (ok) {
    try {
      value = std::stod(cell, &used);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok || used != cell.size() || !std::isfinite(value)) {
    std::ostringstream os;
    os << path.string() << ":" << line << ":" << column << ": '" << cell << "' is not a finite number";
    throw IoError(os.str());
  }
  return value;
}

std::vector<int> discover_villages(const fs::path& folder) {
  if (!fs::is_directory(folder)) throw IoError(folder.string() + ": not a directory");
  static const std::regex pattern(R"(ARD_SURVEY_(\d+)\.csv)");
  std::vector<int> out;
  for (const auto& entry : fs::directory_iterator(folder)) {
    std::smatch match;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, match, pattern)) out.push_back(std::stoi(match[1].str()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ArdDataset load_village_inputs(const fs::path& folder, int village) {
  const fs::path survey_path = folder / survey_name(village);
  const fs::path census_path = folder / census_name(village);
  const fs::path distance_path = folder / distance_name(village);
  for (const auto& p : {survey_path, census_path, distance_path}) {
    if (!fs::exists(p)) throw IoError(p.string() + ": missing file");
  }
  const CsvTable survey = read_csv(survey_path);
  const CsvTable census = read_csv(census_path);
  const CsvTable distance = read_csv(distance_path);

  ArdDataset data;
  std::vector<std::string> traits = survey.header;
  const bool has_degree = !traits.empty() && traits.back() == "degree";
  if (has_degree) traits.pop_back();
  if (traits != census.header) {
    std::ostringstream os;
    os << "trait header mismatch: " << survey_path.string() << " has " << traits.size() << " traits, "
       << census_path.string() << " has " << census.header.size();
    if (traits.size() == census.header.size()) {
      for (std::size_t k = 0; k < traits.size(); ++k) {
        if (traits[k] != census.header[k]) {
          os << "; column " << k + 1 << " is '" << traits[k] << "' vs '" << census.header[k] << "'";
          break;
        }
      }
    }
    throw ValidationError(os.str());
  }
  const auto K = static_cast<Eigen::Index>(traits.size());
  const auto m = static_cast<Eigen::Index>(survey.rows.size());
  const auto n = static_cast<Eigen::Index>(census.rows.size());
  data.trait_names = traits;
  data.n = static_cast<int>(n);

  data.y.resize(m, K);
  Vector degrees(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(survey.header.size()); ++k) {
      const double v = parse_number(survey.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                    survey_path, static_cast<std::size_t>(i + 2), static_cast<std::size_t>(k + 1));
      if (v != std::floor(v)) {
        std::ostringstream os;
        os << survey_path.string() << ":" << i + 2 << ":" << k + 1 << ": count must be an integer";
        throw IoError(os.str());
      }
      if (k < K) {
        data.y(i, k) = static_cast<int>(v);
      } else {
        degrees(i) = v;
      }
    }
  }
  if (has_degree) data.reported_degrees = degrees;

  data.census_traits.resize(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double v = parse_number(census.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)],
                                    census_path, static_cast<std::size_t>(i + 2), static_cast<std::size_t>(k + 1));
      if (v != 0.0 && v != 1.0) {
        std::ostringstream os;
        os << census_path.string() << ":" << i + 2 << ":" << k + 1 << ": trait indicator must be 0 or 1";
        throw IoError(os.str());
      }
      data.census_traits(i, k) = static_cast<int>(v);
    }
  }
  data.group_sizes = data.census_traits.cast<double>().colwise().sum().transpose();
  data.ard_index.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) data.ard_index[static_cast<std::size_t>(i)] = static_cast<int>(i);

  const auto rows = static_cast<Eigen::Index>(distance.rows.size());
  const auto cols = static_cast<Eigen::Index>(distance.header.size());
  data.covariate_distance.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      data.covariate_distance(r, c) =
          parse_number(distance.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)], distance_path,
                       static_cast<std::size_t>(r + 2), static_cast<std::size_t>(c + 1));
    }
  }
  if (rows == 0) data.covariate_distance.resize(0, 0);
  if (n > m && (rows != n - m || cols != m)) {
    std::ostringstream os;
    os << distance_path.string() << ": expected an (n-m) x m = " << n - m << " x " << m << " matrix, found " << rows
       << " x " << cols;
    if (rows == m && cols == n - m) os << " (transposed)";
    throw ValidationError(os.str());
  }
  return validate_dataset(data).data;
}

void write_village_inputs(const ArdDataset& data, const fs::path& folder, int village) {
  for (int r = 0; r < data.m(); ++r) {
    if (data.ard_index[static_cast<std::size_t>(r)] != r) {
      throw ValidationError("write_village_inputs: surveyed nodes must be the first m nodes, in order");
    }
  }
  if (!data.has_census()) throw ValidationError("write_village_inputs: census traits are required");
  std::vector<std::string> names = data.trait_names;
  for (int k = static_cast<int>(names.size()); k < data.K(); ++k) names.push_back("trait" + std::to_string(k + 1));

  std::ostringstream survey, census, distance;
  for (int k = 0; k < data.K(); ++k) survey << (k ? "," : "") << names[static_cast<std::size_t>(k)];
  if (data.reported_degrees) survey << ",degree";
  survey << '\n';
  for (int i = 0; i < data.m(); ++i) {
    for (int k = 0; k < data.K(); ++k) survey << (k ? "," : "") << data.y(i, k);
    if (data.reported_degrees) survey << ',' << format_number((*data.reported_degrees)(i));
    survey << '\n';
  }
  for (int k = 0; k < data.K(); ++k) census << (k ? "," : "") << names[static_cast<std::size_t>(k)];
  census << '\n';
  for (int i = 0; i < data.n; ++i) {
    for (int k = 0; k < data.K(); ++k) census << (k ? "," : "") << data.census_traits(i, k);
    census << '\n';
  }
  for (int c = 0; c < data.m(); ++c) distance << (c ? "," : "") << "ard" << c;
  distance << '\n';
  for (Eigen::Index r = 0; r < data.covariate_distance.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.covariate_distance.cols(); ++c) {
      std::ostringstream cell;
      cell << std::setprecision(17) << data.covariate_distance(r, c);
      distance << (c ? "," : "") << cell.str();
    }
    distance << '\n';
  }
  write_text_file(folder / survey_name(village), survey.str());
  write_text_file(folder / census_name(village), census.str());
  write_text_file(folder / distance_name(village), distance.str());
}

void write_edge_list(const GraphSample& g, const fs::path& path) {
  std::ostringstream os;
  for (const auto& [u, v] : g.edges) os << u << ',' << v << '\n';
  write_text_file(path, os.str());
}

GraphSample read_edge_list(const fs::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::vector<std::pair<int, int>> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 2) throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected 'u,v'");
    const double u = parse_number(cells[0], path, line_no, 1);
    const double v = parse_number(cells[1], path, line_no, 2);
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  int nodes = n;
  if (nodes < 0) {
    nodes = 0;
    for (const auto& [u, v] : edges) nodes = std::max({nodes, u + 1, v + 1});
  }
  return GraphSample::from_edges(nodes, std::move(edges));
}

std::string config_hash(const Json& config) {
  const std::string text = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Json write_outputs(const std::vector<VillageResult>& results, const fs::path& out_root, const Json& run_config,
                   std::uint64_t seed) {
  std::error_code ec;
  fs::create_directories(out_root / "SIMULATION", ec);
  if (ec) throw IoError(out_root.string() + ": cannot create output folder (" + ec.message() + ")");
  std::set<std::string> files;
  auto emit = [&](const fs::path& rel, const std::string& body) {
    write_text_file(out_root / rel, body);
    files.insert(rel.generic_string());
  };

  Json villages = Json::array();
  for (const auto& res : results) {
    const std::string tag = std::to_string(res.village);

    // Node-level posterior summaries.
    std::ostringstream nodes;
    nodes << "node,ard";
    for (const auto& name : node_stat_names()) nodes << ',' << name << "_mean," << name << "_sd";
    nodes << '\n';
    std::vector<StatSummary> node_summaries;
    std::vector<StatSummary> graph_summaries;
    if (!res.reports.empty()) {
      for (const auto& name : node_stat_names()) node_summaries.push_back(summarize_stat(res.reports, name));
      for (const auto& name : graph_stat_names()) graph_summaries.push_back(summarize_stat(res.reports, name));
    }
    std::vector<char> is_ard(static_cast<std::size_t>(res.data.n), 0);
    for (int i : res.data.ard_index) is_ard[static_cast<std::size_t>(i)] = 1;
    for (int i = 0; i < res.data.n; ++i) {
      nodes << i << ',' << int(is_ard[static_cast<std::size_t>(i)]);
      for (const auto& s : node_summaries) nodes << ',' << format_number(s.mean(i)) << ',' << format_number(s.sd(i));
      nodes << '\n';
    }
    emit("network_characteristics_" + tag + ".csv", nodes.str());

    std::ostringstream graph;
    graph << "statistic,mean,sd\n";
    for (std::size_t g = 0; g < graph_summaries.size(); ++g) {
      graph << graph_stat_names()[g] << ',' << format_number(graph_summaries[g].mean(0)) << ','
            << format_number(graph_summaries[g].sd(0)) << '\n';
    }
    emit("graph_level_" + tag + ".csv", graph.str());

    // Chain diagnostics.
    std::ostringstream diag;
    diag << "parameter,rhat,ess,mean,sd\n";
    std::vector<std::string> warnings = res.warnings;
    if (!res.chains.empty()) {
      try {
        const auto summary = summarize_chain(res.chains);
        for (const auto& p : summary.parameters) {
          diag << p.name << ',' << format_number(p.rhat) << ',' << format_number(p.ess) << ','
               << format_number(p.mean) << ',' << format_number(p.sd) << '\n';
        }
        warnings.insert(warnings.end(), summary.warnings.begin(), summary.warnings.end());
      } catch (const ValidationError& e) {
        warnings.push_back(std::string("diagnostics skipped: ") + e.what());
      }
      std::map<std::string, std::pair<double, int>> acceptance;
      for (const auto& chain : res.chains) {
        for (const auto& [block, rate] : chain.retained_acceptance) {
          acceptance[block].first += rate;
          acceptance[block].second += 1;
        }
      }
      for (const auto& [block, acc] : acceptance) {
        diag << "acceptance:" << block << ",NA,NA," << format_number(acc.first / acc.second) << ",NA\n";
      }
    }
    emit("chain_" + tag + "_diagnostics.csv", diag.str());

    for (std::size_t s = 0; s < res.graphs.size(); ++s) {
      std::ostringstream edges;
      for (const auto& [u, v] : res.graphs[s].edges) edges << u << ',' << v << '\n';
      emit(fs::path("SIMULATION") / ("graph_" + tag + "_" + std::to_string(s + 1) + ".csv"), edges.str());
    }
    emit(fs::path("SIMULATION") / ("nodes_" + tag + ".txt"), std::to_string(res.data.n) + "\n");

    Json v;
    v["village"] = res.village;
    v["n"] = res.data.n;
    v["m"] = res.data.m();
    v["K"] = res.data.K();
    v["chains"] = res.chains.size();
    v["retained_draws_per_chain"] = res.chains.empty() ? 0 : res.chains.front().draws.size();
    v["graphs"] = res.graphs.size();
    int reused = 0;
    for (const auto& g : res.graphs) reused += g.reused_draw ? 1 : 0;
    v["reused_draw_graphs"] = reused;
    v["warnings"] = warnings;
    villages.push_back(v);
  }

  Json manifest;
  manifest["tool"] = "ardnet";
  manifest["versions"] = {{"ardnet", ARDNET_VERSION},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)}};
  manifest["seed"] = seed;
  manifest["config"] = run_config;
  manifest["config_hash"] = config_hash(run_config);
  manifest["villages"] = villages;
  manifest["files"] = Json(std::vector<std::string>(files.begin(), files.end()));
  write_text_file(out_root / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

// ---- configuration ----------------------------------------------------------

namespace {

Json to_json(const ScalarPrior& p) {
  return {{"kind", p.kind == ScalarPrior::Kind::gamma ? "gamma" : "uniform"}, {"a", p.a}, {"b", p.b}};
}
Json to_json(const LocationHyperprior& p) { return {{"flat", p.flat}, {"mean", p.mean}, {"var", p.var}}; }
Json to_json(const ScaleHyperprior& p) { return {{"flat", p.flat}, {"dof", p.dof}, {"scale", p.scale}}; }

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_key(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(where + ": key '" + key + "' has the wrong type");
  }
}

ScalarPrior scalar_prior_from(const Json& j, ScalarPrior base, const std::string& where) {
  check_keys(j, {"kind", "a", "b"}, where);
  std::string kind = base.kind == ScalarPrior::Kind::gamma ? "gamma" : "uniform";
  read_key(j, "kind", kind, where);
  if (kind == "gamma") {
    base.kind = ScalarPrior::Kind::gamma;
  } else if (kind == "uniform") {
    base.kind = ScalarPrior::Kind::uniform;
  } else {
    throw ValidationError(where + ": kind must be 'gamma' or 'uniform'");
  }
  read_key(j, "a", base.a, where);
  read_key(j, "b", base.b, where);
  return base;
}

LocationHyperprior location_from(const Json& j, LocationHyperprior base, const std::string& where) {
  check_keys(j, {"flat", "mean", "var"}, where);
  read_key(j, "flat", base.flat, where);
  read_key(j, "mean", base.mean, where);
  read_key(j, "var", base.var, where);
  return base;
}

ScaleHyperprior scale_from(const Json& j, ScaleHyperprior base, const std::string& where) {
  check_keys(j, {"flat", "dof", "scale"}, where);
  read_key(j, "flat", base.flat, where);
  read_key(j, "dof", base.dof, where);
  read_key(j, "scale", base.scale, where);
  return base;
}

const char* degree_mode_name(DegreeMode m) {
  switch (m) {
    case DegreeMode::observed: return "observed";
    case DegreeMode::estimated: return "estimated";
    case DegreeMode::pinned: return "pinned";
  }
  return "estimated";
}

}  // namespace

DegreeMode parse_degree_mode(const std::string& s) {
  if (s == "observed") return DegreeMode::observed;
  if (s == "estimated") return DegreeMode::estimated;
  if (s == "pinned") return DegreeMode::pinned;
  throw ValidationError("degree mode must be observed, estimated or pinned");
}

Json to_json(const PriorConfig& p) {
  Json j;
  j["zeta_prior"] = to_json(p.zeta);
  j["eta_prior"] = to_json(p.eta);
  j["mu_d_prior"] = to_json(p.mu_d);
  j["sigma2_d_prior"] = to_json(p.sigma2_d);
  j["mu_beta_prior"] = to_json(p.mu_beta);
  j["sigma2_beta_prior"] = to_json(p.sigma2_beta);
  j["p"] = p.p;
  j["T"] = p.T;
  j["thin"] = p.thin;
  j["n_graph_draws"] = p.n_graph_draws;
  j["adapt_window"] = p.adapt_window;
  j["knn_k"] = p.knn_k;
  j["degree_mode"] = degree_mode_name(p.degree_mode);
  j["pinned_mean_degree"] = p.pinned_mean_degree;
  j["prevalence_mode"] = p.prevalence_mode == PrevalenceMode::census ? "census" : "estimated";
  j["latent_model"] = p.latent_model;
  j["min_sampling_share"] = p.min_sampling_share;
  return j;
}

PriorConfig priors_from_json(const Json& j, PriorConfig p) {
  const std::string where = "priors";
  check_keys(j,
             {"zeta_prior", "eta_prior", "mu_d_prior", "sigma2_d_prior", "mu_beta_prior", "sigma2_beta_prior", "p",
              "T", "thin", "n_graph_draws", "adapt_window", "knn_k", "degree_mode", "pinned_mean_degree",
              "prevalence_mode", "latent_model", "min_sampling_share"},
             where);
  if (j.contains("zeta_prior")) p.zeta = scalar_prior_from(j["zeta_prior"], p.zeta, "priors.zeta_prior");
  if (j.contains("eta_prior")) p.eta = scalar_prior_from(j["eta_prior"], p.eta, "priors.eta_prior");
  if (j.contains("mu_d_prior")) p.mu_d = location_from(j["mu_d_prior"], p.mu_d, "priors.mu_d_prior");
  if (j.contains("sigma2_d_prior")) p.sigma2_d = scale_from(j["sigma2_d_prior"], p.sigma2_d, "priors.sigma2_d_prior");
  if (j.contains("mu_beta_prior")) p.mu_beta = location_from(j["mu_beta_prior"], p.mu_beta, "priors.mu_beta_prior");
  if (j.contains("sigma2_beta_prior")) {
    p.sigma2_beta = scale_from(j["sigma2_beta_prior"], p.sigma2_beta, "priors.sigma2_beta_prior");
  }
  read_key(j, "p", p.p, where);
  read_key(j, "T", p.T, where);
  read_key(j, "thin", p.thin, where);
  read_key(j, "n_graph_draws", p.n_graph_draws, where);
  read_key(j, "adapt_window", p.adapt_window, where);
  read_key(j, "knn_k", p.knn_k, where);
  if (j.contains("degree_mode")) {
    std::string mode;
    read_key(j, "degree_mode", mode, where);
    p.degree_mode = parse_degree_mode(mode);
  }
  read_key(j, "pinned_mean_degree", p.pinned_mean_degree, where);
  if (j.contains("prevalence_mode")) {
    std::string mode;
    read_key(j, "prevalence_mode", mode, where);
    if (mode == "census") {
      p.prevalence_mode = PrevalenceMode::census;
    } else if (mode == "estimated") {
      p.prevalence_mode = PrevalenceMode::estimated;
    } else {
      throw ValidationError("priors: prevalence_mode must be census or estimated");
    }
  }
  read_key(j, "latent_model", p.latent_model, where);
  read_key(j, "min_sampling_share", p.min_sampling_share, where);
  return p;
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["n"] = c.n;
  j["K"] = c.K;
  j["p"] = c.p;
  j["zeta"] = c.zeta;
  j["nu_mean"] = c.nu_mean;
  j["nu_sd"] = c.nu_sd;
  if (c.mixture) {
    j["mixture"] = {{"lambda", c.mixture->lambda},
                    {"mu_high", c.mixture->mu_high},
                    {"mu_low", c.mixture->mu_low},
                    {"sigma", c.mixture->sigma}};
  } else {
    j["mixture"] = nullptr;
  }
  j["psi"] = c.psi;
  j["center_layout"] = c.center_layout == CenterLayout::uniform ? "uniform" : "clustered";
  j["two_communities"] = c.two_communities;
  j["community_kappa"] = c.community_kappa;
  j["eta_low"] = c.eta_low;
  j["eta_high"] = c.eta_high;
  j["n_anchors"] = c.n_anchors;
  j["covariate_sd"] = c.covariate_sd;
  j["n_reps"] = c.n_reps;
  j["seed"] = c.seed;
  j["chains"] = c.chains;
  j["graphs"] = c.graphs;
  j["priors"] = to_json(c.priors);
  return j;
}

ExperimentConfig experiment_from_json(const Json& j, ExperimentConfig c) {
  const std::string where = "experiment";
  check_keys(j,
             {"n", "K", "p", "zeta", "nu_mean", "nu_sd", "mixture", "psi", "center_layout", "two_communities",
              "community_kappa", "eta_low", "eta_high", "n_anchors", "covariate_sd", "n_reps", "seed", "chains",
              "graphs", "priors"},
             where);
  read_key(j, "n", c.n, where);
  read_key(j, "K", c.K, where);
  read_key(j, "p", c.p, where);
  read_key(j, "zeta", c.zeta, where);
  read_key(j, "nu_mean", c.nu_mean, where);
  read_key(j, "nu_sd", c.nu_sd, where);
  if (j.contains("mixture")) {
    if (j["mixture"].is_null()) {
      c.mixture.reset();
    } else {
      check_keys(j["mixture"], {"lambda", "mu_high", "mu_low", "sigma"}, "experiment.mixture");
      MixtureConfig mix = c.mixture.value_or(MixtureConfig{});
      read_key(j["mixture"], "lambda", mix.lambda, "experiment.mixture");
      read_key(j["mixture"], "mu_high", mix.mu_high, "experiment.mixture");
      read_key(j["mixture"], "mu_low", mix.mu_low, "experiment.mixture");
      read_key(j["mixture"], "sigma", mix.sigma, "experiment.mixture");
      c.mixture = mix;
    }
  }
  read_key(j, "psi", c.psi, where);
  if (j.contains("center_layout")) {
    std::string layout;
    read_key(j, "center_layout", layout, where);
    if (layout == "uniform") {
      c.center_layout = CenterLayout::uniform;
    } else if (layout == "clustered") {
      c.center_layout = CenterLayout::clustered;
    } else {
      throw ValidationError("experiment: center_layout must be uniform or clustered");
    }
  }
  read_key(j, "two_communities", c.two_communities, where);
  read_key(j, "community_kappa", c.community_kappa, where);
  read_key(j, "eta_low", c.eta_low, where);
  read_key(j, "eta_high", c.eta_high, where);
  read_key(j, "n_anchors", c.n_anchors, where);
  read_key(j, "covariate_sd", c.covariate_sd, where);
  read_key(j, "n_reps", c.n_reps, where);
  read_key(j, "seed", c.seed, where);
  read_key(j, "chains", c.chains, where);
  read_key(j, "graphs", c.graphs, where);
  if (j.contains("priors")) c.priors = priors_from_json(j["priors"], c.priors);
  if (!j.contains("priors") || !j["priors"].contains("p")) c.priors.p = c.p;
  return c;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace ardnet
