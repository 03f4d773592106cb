#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "indeg/degree_counts.hpp"
#include "indeg/estimate.hpp"
#include "indeg/generate.hpp"
#include "indeg/sample.hpp"

namespace indeg {

struct ExperimentConfig {
  std::optional<std::filesystem::path> input_path;  ///< edge list; the generator is used when empty
  GeneratorConfig generator;
  Scheme scheme = Scheme::RVS;
  bool with_replacement = true;
  double jump_rate = 0.0;
  std::size_t burn_in = 0;
  double p = 0.2;
  std::size_t replicates = 1;
  std::uint64_t base_seed = 1;
  std::set<std::string> tail_methods{"asym", "line"};
  std::set<std::string> metrics{"tv_distance", "log_mse", "alpha_error"};
  EstimateOptions estimate;
  /// LINE takes alpha from a fit to each replicate's true counts (needs ground truth).
  bool alpha_from_truth = false;
  std::size_t tv_max_j = 20;                ///< tv_distance compares j <= tv_max_j
  std::optional<std::filesystem::path> output_dir;
  std::size_t jobs = 1;
};

/// JSON mirror of the config (the report's provenance block uses it).
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on unknown keys or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ReplicateResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t vertex_budget = 0;
  std::size_t edge_budget = 0;
  double jump_weight = 0.0;
  double effective_p = 0.0;
  std::size_t jump_count = 0;
  DegreeCountVector truth;
  DegreeCountVector sample;
  Estimates estimates;
  nlohmann::json metrics = nlohmann::json::object();
  std::optional<std::string> error;
};

/// Column names of the frozen CSV schema, in order.
inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"j", "true", "sample", "inv_naive", "inv_penalized",
                                             "asym", "line"};
  return cols;
}

struct AveragedVectors {
  std::vector<std::string> names;                  ///< true, sample, inv_naive, ...
  std::vector<DegreeCountVector> vectors;          ///< NaN where no replicate defines the entry
  std::vector<std::vector<std::size_t>> defined;   ///< replicates contributing to each entry
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReplicateResult> replicates;
  AveragedVectors average;
  nlohmann::json metrics_mean = nlohmann::json::object();        ///< mean of per-replicate metrics
  nlohmann::json metrics_of_average = nlohmann::json::object();  ///< metrics of averaged vectors
  nlohmann::json provenance = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// Replicate r uses seed base_seed + r for graph generation and sampling
/// (independent sub-streams). The graph is restricted to its largest weakly
/// connected component before sampling. With an output directory, writes
/// replicate_<r>.csv, average.csv and report.json. A failing replicate keeps
/// its partial result; the first failure is rethrown after the report is
/// written, with the replicate index in its message.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// One CSV row per j in 0..max length; undefined entries are empty cells.
void write_estimate_csv(std::ostream& out, const std::vector<std::string>& names,
                        const std::vector<const DegreeCountVector*>& columns);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

std::string software_version();

}  // namespace indeg
