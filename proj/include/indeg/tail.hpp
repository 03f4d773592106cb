#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "indeg/degree_counts.hpp"
#include "indeg/invert.hpp"

namespace indeg {

// Tail estimates span j = 0..J_hat and hold NaN where the method is not
// defined (below its onset). Use is_defined() before reading an entry.
bool is_defined(double v);

/// Smallest index attaining the minimum positive value of d_hat_s.
std::size_t estimate_tau_s(const DegreeCountVector& d_hat_s);

/// round(J_hat_s / p), half to even.
std::size_t estimate_J(std::size_t j_hat_s, double p);

/// ceil(1 / (p eps^2)): onset of the large-j regime.
std::size_t default_j_min(double p, double epsilon = 0.1);

struct AsymResult {
  DegreeCountVector estimate;
  std::size_t j_min = 0;
  std::size_t tau_s = 0;
  std::size_t j_hat_s = 0;
  std::size_t j_hat = 0;
  double flat_start = 0.0;        ///< tau_s / p
  bool degenerate_flat = false;   ///< tau_s / p >= J_hat: no flat segment emitted
};

/// Distribution-free tail: rescaled segment p (D_s(p j) - 1/p) floored at 0
/// for j_min <= j <= tau_s/p, then the flat part of D_s stretched up to J_hat.
/// For p < 1 the rescaled segment reads D_s through a 3-point average.
AsymResult asym_estimate(const DegreeCountVector& d_hat_s, double p, std::size_t j_min);

/// Scheme constant C_s(j') linking sample and true power-law amplitudes.
/// Throws ConfigError outside the formula's domain.
double cs_factor(MatrixScheme scheme, double j_prime, double alpha, double population,
                 double budget);

/// The large-j' limit p^alpha.
inline double cs_limit(double p, double alpha) { return std::pow(p, alpha); }

struct PowerLawFit {
  double alpha = 0.0;       ///< tail index; the pmf decays as j^-(alpha+1)
  double amplitude = 0.0;   ///< A with D_s(j') ~ A j'^-(alpha+1); A = C_s c alpha
  std::size_t j_start = 0;
  double ks_distance = 0.0;
  double tail_count = 0.0;  ///< vertices with sample in-degree >= j_start
};

/// Continuous-approximation MLE over sample in-degrees >= j_start, amplitude
/// from total tail mass. With no j_start the cutoff minimizes the KS distance.
/// A supplied alpha is used as is (only the amplitude and cutoff are fitted).
PowerLawFit fit_power_law(const DegreeCountVector& d_hat_s,
                          std::optional<std::size_t> j_start = std::nullopt,
                          std::optional<double> alpha = std::nullopt);

/// sum_{j >= start} j^-s for s > 1.
double hurwitz_zeta(double s, double start);

struct LineConfig {
  double epsilon = 0.1;
  std::optional<double> alpha;        ///< external tail index
  std::optional<std::size_t> j_start; ///< fit cutoff; KS-selected when empty
  std::optional<std::size_t> j_min;   ///< onset; ceil(1/(p eps^2)) when empty
};

struct LineResult {
  DegreeCountVector estimate;
  PowerLawFit fit;
  double k1 = 0.0;
  double cs_at_tau_s = 0.0;
  std::size_t tau_s = 0;
  std::size_t tau = 0;
  std::size_t j_hat_s = 0;
  std::size_t j_hat = 0;
  std::size_t j_min = 0;
  bool cs_fallback = false;  ///< p^alpha used where C_s(j) was out of domain
};

/// Power-law tail: (A / C_s(j)) j^-(alpha+1) for j_min <= j <= tau, then 1 up to J_hat.
LineResult line_estimate(const DegreeCountVector& d_hat_s, double p, MatrixScheme scheme,
                         double population, double budget, const LineConfig& cfg = {});

struct Stitched {
  DegreeCountVector estimate;
  std::size_t crossover = 0;
  bool gap = false;         ///< tail undefined somewhere at or past the crossover; zero-filled
  bool normalized = false;
};

/// Bulk below the crossover, tail from it on. With normalize_to the result is
/// rescaled to that total.
Stitched stitch(const DegreeCountVector& bulk, const DegreeCountVector& tail,
                std::size_t crossover, std::optional<double> normalize_to = std::nullopt);

/// Smallest j where the bulk is zero while the tail is positive; bulk size if none.
std::size_t default_crossover(const DegreeCountVector& bulk, const DegreeCountVector& tail);

}  // namespace indeg
