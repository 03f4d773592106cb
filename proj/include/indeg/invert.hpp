#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "indeg/degree_counts.hpp"
#include "indeg/sample.hpp"

namespace indeg {

enum class MatrixScheme { RVS_NR, RES_NR, RVS_WR, RES_WR };

std::string to_string(MatrixScheme s);
MatrixScheme matrix_scheme_from_string(const std::string& s);
bool is_without_replacement(MatrixScheme s);

/// The matrix family serving a sampling scheme: walks use the WR matrices of
/// the uniform scheme they mimic in their stationary regime.
MatrixScheme matrix_scheme_for(Scheme scheme, bool with_replacement);

/// How many rows a WR matrix keeps (formally n + 1).
enum class WrRows {
  truncated,  ///< drop rows beyond which every column carries < 1e-15 mass
  full,
};

/// P_s with P_s(j', j) = P(sample in-degree j' | in-degree j).
struct SamplingMatrix {
  Eigen::MatrixXd entries;
  MatrixScheme scheme = MatrixScheme::RVS_NR;
  std::size_t population = 0;  ///< N_v or N_e
  std::size_t budget = 0;      ///< n_v or n_e

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// Build P_s for in-degrees 0..J. For WR matrices at least `min_rows` rows are
/// kept so an observed sample vector always fits. Columns are checked to sum
/// to one within 1e-10.
SamplingMatrix build_ps(MatrixScheme scheme, std::size_t population, std::size_t budget,
                        std::size_t max_in_degree, WrRows rows = WrRows::truncated,
                        std::size_t min_rows = 0);

/// Closed-form inverse of the square NR matrix (requires J < n).
Eigen::MatrixXd explicit_inverse_nr(std::size_t population, std::size_t budget,
                                    std::size_t max_in_degree);

/// log10 of sigma_max / sigma_min from a double-precision SVD.
double log10_condition_number(const Eigen::MatrixXd& m);

struct NaiveInversion {
  DegreeCountVector estimate;  ///< may hold negative entries
  double log10_condition = 0.0;
};

/// Least-squares solution of P D = D_s. Refuses (NumericalError) when the
/// condition number exceeds 1/machine-epsilon.
NaiveInversion invert_naive(const SamplingMatrix& p, const DegreeCountVector& d_hat_s);

/// (J-1) x (J+1) second-difference operator, rows (1, -2, 1).
Eigen::MatrixXd second_diff_operator(std::size_t max_in_degree);

/// Diagonal of C = diag(D_s) + max(D_s)/20 I.
Eigen::VectorXd weight_diagonal(const DegreeCountVector& d_hat_s);

struct PenaltyConfig {
  double lambda = 1.0;
  std::vector<double> lambda_grid;     ///< empty: default_lambda_grid()
  std::size_t sure_perturbations = 20;
  double ridge = 0.0;                  ///< epsilon_r; 0 selects 1e-10 trace(Q)/dim
  std::uint64_t seed = 0x5eed;         ///< probe vectors for SURE
  double tol = 1e-9;                   ///< relative KKT tolerance
  std::size_t max_iter = 20000;
};

struct PenalizedInversion {
  DegreeCountVector estimate;
  double lambda = 0.0;
  double ridge = 0.0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Constrained penalized weighted least squares:
///   argmin (P D - D_s)' C^-1 (P D - D_s) + lambda |Diff2 D|^2,  D >= 0, sum D = N_v.
PenalizedInversion invert_penalized(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                                    double vertex_count, const PenaltyConfig& cfg);

/// 30 log-spaced values over [1e-4, 1e4] * trace(P'C^-1 P) / trace(Diff2'Diff2).
std::vector<double> default_lambda_grid(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                                        std::size_t points = 30);

struct SureResult {
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> risk;
  std::vector<double> residual;    ///< |P D_lambda - D_s|^2 in the C^-1 norm
  std::vector<double> divergence;  ///< Monte Carlo estimate per grid point
  double delta = 0.0;              ///< finite-difference step
  PenalizedInversion best;
};

/// Stein's unbiased risk estimate over the lambda grid; returns the minimizer.
SureResult select_lambda_sure(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                              double vertex_count, const PenaltyConfig& cfg);

/// Monte Carlo divergence of D_s -> P D_lambda(D_s) at one lambda (C held at
/// its value for the unperturbed D_s).
double sure_divergence(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                       double vertex_count, double lambda, const PenaltyConfig& cfg);

}  // namespace indeg
