#pragma once

// File formats: village input CSVs, the OUT results tree, JSON run configs.
//
// Input folder, village i:
//   ARD_SURVEY_i.csv  header of K trait names (+ optional trailing "degree"), m rows of counts
//   ARD_CENSUS_i.csv  header of the same K trait names, n rows of 0/1; the first m rows are
//                     the surveyed nodes, in survey order
//   distance_i.csv    header of m column names, n - m rows of nonnegative distances
//
// Output tree:
//   OUT/network_characteristics_i.csv, OUT/graph_level_i.csv, OUT/chain_i_diagnostics.csv,
//   OUT/SIMULATION/graph_i_s.csv (edge lists, "u,v" per line), OUT/SIMULATION/nodes_i.txt,
//   OUT/manifest.json

#include <ardnet/graphs.hpp>
#include <ardnet/model.hpp>
#include <ardnet/sampler.hpp>
#include <ardnet/simlab.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ardnet {

using Json = nlohmann::json;

/// Comma-separated table with a required header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Throws IoError for a missing/unreadable file or ragged rows (with file and line).
CsvTable read_csv(const std::filesystem::path& path);

/// Parses a numeric cell; throws IoError naming file, line and column.
double parse_number(const std::string& cell, const std::filesystem::path& path, std::size_t line, std::size_t column);

/// Village indices found in `folder` (files ARD_SURVEY_<i>.csv), ascending.
std::vector<int> discover_villages(const std::filesystem::path& folder);

/// Reads and validates one village bundle.
ArdDataset load_village_inputs(const std::filesystem::path& folder, int village);

/// Writes a village bundle; the surveyed nodes must be 0..m-1.
void write_village_inputs(const ArdDataset& data, const std::filesystem::path& folder, int village);

/// Everything produced for one village by `fit`.
struct VillageResult {
  int village = 0;
  ArdDataset data;
  std::vector<PosteriorDraws> chains;
  std::vector<GraphSample> graphs;
  std::vector<StatReport> reports;
  std::vector<std::string> warnings;
};

void write_edge_list(const GraphSample& g, const std::filesystem::path& path);
GraphSample read_edge_list(const std::filesystem::path& path, int n);

/// Writes the OUT tree for every village plus manifest.json (last). Returns the
/// manifest written.
Json write_outputs(const std::vector<VillageResult>& results, const std::filesystem::path& out_root,
                   const Json& run_config, std::uint64_t seed);

/// 64-bit FNV-1a of the canonical (sorted-key) JSON dump, as 16 hex digits.
std::string config_hash(const Json& config);

// ---- configuration ----------------------------------------------------------

Json to_json(const PriorConfig& priors);
Json to_json(const ExperimentConfig& config);

/// Overlay the keys present in `j` onto `base`; unknown keys are rejected.
PriorConfig priors_from_json(const Json& j, PriorConfig base = {});
ExperimentConfig experiment_from_json(const Json& j, ExperimentConfig base = {});

/// Reads a JSON document; throws IoError / ValidationError.
Json read_json_file(const std::filesystem::path& path);

DegreeMode parse_degree_mode(const std::string& name);

void write_text_file(const std::filesystem::path& path, const std::string& body);

}  // namespace ardnet
