#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "indeg/degree_counts.hpp"
#include "indeg/invert.hpp"
#include "indeg/tail.hpp"

namespace indeg {

struct EstimateOptions {
  bool naive = true;
  bool penalized = true;
  bool asym = true;
  bool line = true;
  PenaltyConfig penalty;
  std::size_t lambda_points = 30;
  std::optional<std::size_t> max_in_degree;  ///< inversion range; largest sample in-degree if empty
  double epsilon = 0.1;
  std::optional<double> alpha;               ///< external tail index for LINE
  std::optional<std::size_t> j_start;
  bool normalize = false;                    ///< also emit the stitched estimate rescaled to N_v
};

struct EstimateInput {
  DegreeCountVector d_hat_s;
  MatrixScheme scheme = MatrixScheme::RVS_WR;
  std::size_t population = 0;  ///< N_v or N_e
  std::size_t budget = 0;      ///< n_v or n_e
  double vertex_count = 0.0;   ///< N_v; sum of d_hat_s when zero

  double fraction() const { return static_cast<double>(budget) / static_cast<double>(population); }
};

/// Every estimator that could be run on one sample. Missing estimators carry
/// the reason in `skipped`.
struct Estimates {
  std::optional<DegreeCountVector> inv_naive;
  std::optional<DegreeCountVector> inv_penalized;
  std::optional<DegreeCountVector> asym;
  std::optional<DegreeCountVector> line;
  std::optional<DegreeCountVector> stitched;
  std::optional<DegreeCountVector> stitched_normalized;
  std::optional<double> alpha_hat;
  bool census = false;  ///< NR sample of the whole population: estimates are the sample itself
  nlohmann::json diagnostics = nlohmann::json::object();
  nlohmann::json skipped = nlohmann::json::object();
};

/// Runs the inversion and tail estimators. A full NR census short-cuts every
/// estimator to d_hat_s. Estimator-specific failures (refused naive inversion,
/// too little tail mass) are recorded in `skipped`; invalid input throws.
Estimates estimate_all(const EstimateInput& in, const EstimateOptions& opt);

}  // namespace indeg
