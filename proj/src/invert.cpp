#include "indeg/invert.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "indeg/combinatorics.hpp"
#include "indeg/error.hpp"
#include "indeg/optim.hpp"
#include "indeg/rng.hpp"

namespace indeg {

std::string to_string(MatrixScheme s) {
  switch (s) {
    case MatrixScheme::RVS_NR: return "RVS_NR";
    case MatrixScheme::RES_NR: return "RES_NR";
    case MatrixScheme::RVS_WR: return "RVS_WR";
    case MatrixScheme::RES_WR: return "RES_WR";
  }
  return "?";
}

MatrixScheme matrix_scheme_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(c)));
  if (u == "RVS_NR") return MatrixScheme::RVS_NR;
  if (u == "RES_NR") return MatrixScheme::RES_NR;
  if (u == "RVS_WR") return MatrixScheme::RVS_WR;
  if (u == "RES_WR") return MatrixScheme::RES_WR;
  throw ConfigError("unknown matrix scheme '" + s + "'");
}

bool is_without_replacement(MatrixScheme s) {
  return s == MatrixScheme::RVS_NR || s == MatrixScheme::RES_NR;
}

MatrixScheme matrix_scheme_for(Scheme scheme, bool with_replacement) {
  switch (scheme) {
    case Scheme::RVS: return with_replacement ? MatrixScheme::RVS_WR : MatrixScheme::RVS_NR;
    case Scheme::RES: return with_replacement ? MatrixScheme::RES_WR : MatrixScheme::RES_NR;
    case Scheme::RWS1: return MatrixScheme::RVS_WR;
    case Scheme::RWS2:
    case Scheme::RWS3: return MatrixScheme::RES_WR;
  }
  throw ConfigError("unknown sampling scheme");
}

namespace {

void check_columns(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = m.col(j).sum();
    if (std::abs(s - 1.0) > 1e-10) {
      throw NumericalError("sampling matrix column " + std::to_string(j) + " sums to " +
                           std::to_string(s));
    }
  }
}

// Binomial(n, j/N) log-pmf at k.
long double log_binom_pmf(std::size_t n, std::size_t k, std::size_t j, std::size_t N) {
  const long double q = static_cast<long double>(j) / static_cast<long double>(N);
  const auto nn = static_cast<long double>(n);
  const auto kk = static_cast<long double>(k);
  return log_choose(nn, kk) + kk * std::log(q) + (nn - kk) * std::log1p(-q);
}

// Largest row t whose upper tail P(X >= t) under Binomial(n, j/N) is at
// least 1e-15, but never below ceil(mean). Terms are generated upward from
// the mean by the pmf ratio until they underflow.
std::size_t wr_tail_top(std::size_t n, std::size_t j, std::size_t N) {
  const long double q = static_cast<long double>(j) / static_cast<long double>(N);
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(static_cast<double>(n) * static_cast<double>(j) / static_cast<double>(N)));
  if (k >= n) return n;
  std::vector<long double> pmf;
  long double lp = log_binom_pmf(n, k + 1, j, N);
  const long double odds = std::log(q) - std::log1p(-q);
  for (std::size_t t = k + 1; t <= n; ++t) {
    if (t > k + 1) lp += std::log(static_cast<long double>(n - t + 1) / static_cast<long double>(t)) + odds;
    if (lp < -1000.0L) break;
    pmf.push_back(std::exp(lp));
  }
  long double tail = 0.0L;
  for (std::size_t i = pmf.size(); i-- > 0;) {
    tail += pmf[i];
    if (tail >= 1e-15L) return k + 1 + i;
  }
  return k;
}

}  // namespace

SamplingMatrix build_ps(MatrixScheme scheme, std::size_t population, std::size_t budget,
                        std::size_t max_in_degree, WrRows rows, std::size_t min_rows) {
  if (population == 0 || budget == 0) throw ConfigError("population and budget must be positive");
  const std::size_t J = max_in_degree;
  const std::size_t N = population;
  const std::size_t n = budget;
  SamplingMatrix out;
  out.scheme = scheme;
  out.population = N;
  out.budget = n;

  if (is_without_replacement(scheme)) {
    if (n > N) throw ConfigError("budget exceeds population without replacement");
    if (J > N) throw ConfigError("maximal in-degree exceeds the population");
    const std::size_t jr = std::min(J, n);
    out.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(jr + 1),
                                        static_cast<Eigen::Index>(J + 1));
    const long double log_total = log_choose(static_cast<long double>(N), static_cast<long double>(n));
    for (std::size_t j = 0; j <= J; ++j) {
      for (std::size_t k = 0; k <= std::min(j, jr); ++k) {
        if (n - k > N - j) continue;
        const long double l = log_choose(j, k) + log_choose(N - j, n - k) - log_total;
        out.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            static_cast<double>(std::exp(l));
      }
    }
  } else {
    if (J > N) throw ConfigError("maximal in-degree exceeds the population");
    // Columns are binomial(n, j/N); only rows carrying mass are stored.
    std::size_t last = 0;
    if (rows == WrRows::full) {
      last = n;
    } else {
      for (std::size_t j = 1; j <= J; ++j) {
        if (j == N) {
          last = n;
          break;
        }
        last = std::max(last, wr_tail_top(n, j, N));
      }
      last = std::max(last, min_rows > 0 ? min_rows - 1 : 0);
      last = std::min(last, n);
    }
    out.entries = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(last + 1),
                                        static_cast<Eigen::Index>(J + 1));
    out.entries(0, 0) = 1.0;
    for (std::size_t j = 1; j <= J; ++j) {
      if (j == N) {
        if (n <= last) out.entries(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = 1.0;
        continue;
      }
      for (std::size_t k = 0; k <= last; ++k) {
        out.entries(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
            static_cast<double>(std::exp(log_binom_pmf(n, k, j, N)));
      }
    }
  }
  check_columns(out.entries);
  return out;
}

Eigen::MatrixXd explicit_inverse_nr(std::size_t population, std::size_t budget,
                                    std::size_t max_in_degree) {
  const std::size_t N = population;
  const std::size_t n = budget;
  const std::size_t J = max_in_degree;
  if (n == 0 || n > N) throw ConfigError("budget must lie in [1, population]");
  if (J >= n) throw ConfigError("explicit inverse requires maximal in-degree below the budget");
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(J + 1),
                                              static_cast<Eigen::Index>(J + 1));
  for (std::size_t j = 0; j <= J; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      const std::size_t d = j - k;
      // C(N - n + d - 1, d); the top is -1 only for a census, where it vanishes unless d = 0.
      const long double top = static_cast<long double>(N - n + d) - 1.0L;
      if (d > 0 && top < static_cast<long double>(d)) continue;
      const long double l = (d == 0 ? 0.0L : log_choose(top, d)) + log_choose(N, k) - log_choose(n, j);
      const double mag = static_cast<double>(std::exp(l));
      inv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = (d % 2 == 0) ? mag : -mag;
    }
  }
  return inv;
}

namespace {

// One-sided Jacobi keeps relative accuracy in the small singular values.
using Svd = Eigen::JacobiSVD<Eigen::MatrixXd, Eigen::ColPivHouseholderQRPreconditioner>;

}  // namespace

double log10_condition_number(const Eigen::MatrixXd& m) {
  if (m.size() == 0) throw NumericalError("empty matrix");
  const Svd svd(m);
  const auto& s = svd.singularValues();
  const double smax = s[0];
  const double smin = s[s.size() - 1];
  if (smax == 0.0 || smin <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log10(smax) - std::log10(smin);
}

NaiveInversion invert_naive(const SamplingMatrix& p, const DegreeCountVector& d_hat_s) {
  const Eigen::Index rows = p.rows();
  const Eigen::Index cols = p.cols();
  if (rows < cols) {
    throw NumericalError("sampling matrix has fewer rows than columns; naive inversion is "
                         "underdetermined, use the penalized estimator");
  }
  const Svd svd(p.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  NaiveInversion out;
  out.log10_condition = s[s.size() - 1] > 0.0
                            ? std::log10(s[0]) - std::log10(s[s.size() - 1])
                            : std::numeric_limits<double>::infinity();
  const double limit = -std::log10(std::numeric_limits<double>::epsilon());
  if (!(out.log10_condition <= limit)) {
    throw NumericalError("sampling matrix is numerically rank deficient (log10 condition " +
                         std::to_string(out.log10_condition) +
                         "); use the penalized estimator instead");
  }
  const DegreeCountVector y = d_hat_s.resized(static_cast<std::size_t>(rows));
  const Eigen::Map<const Eigen::VectorXd> b(y.values.data(), rows);
  const Eigen::VectorXd x = svd.solve(b);
  out.estimate = DegreeCountVector(std::vector<double>(x.data(), x.data() + x.size()));
  return out;
}

Eigen::MatrixXd second_diff_operator(std::size_t max_in_degree) {
  if (max_in_degree < 2) throw ConfigError("second differences need J >= 2");
  const auto J = static_cast<Eigen::Index>(max_in_degree);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(J - 1, J + 1);
  for (Eigen::Index r = 0; r < J - 1; ++r) {
    d(r, r) = 1.0;
    d(r, r + 1) = -2.0;
    d(r, r + 2) = 1.0;
  }
  return d;
}

Eigen::VectorXd weight_diagonal(const DegreeCountVector& d_hat_s) {
  const double mx = d_hat_s.max_value();
  if (!(mx > 0.0)) throw DataError("sample counts are identically zero");
  Eigen::VectorXd c(static_cast<Eigen::Index>(d_hat_s.size()));
  for (std::size_t i = 0; i < d_hat_s.size(); ++i) {
    c[static_cast<Eigen::Index>(i)] = d_hat_s[i] + mx / 20.0;
  }
  return c;
}

namespace {

// Pieces of the penalized objective that do not depend on lambda or the data
// perturbation: P'C^-1 P, P'C^-1 and the penalty Gram matrix.
struct PenaltyParts {
  Eigen::MatrixXd ptcp;
  Eigen::MatrixXd ptc;
  Eigen::MatrixXd dtd;
  Eigen::VectorXd cinv;
  Eigen::VectorXd y;
};

PenaltyParts make_parts(const SamplingMatrix& p, const DegreeCountVector& d_hat_s) {
  PenaltyParts parts;
  const auto rows = static_cast<std::size_t>(p.rows());
  const DegreeCountVector y = d_hat_s.resized(rows);
  parts.cinv = weight_diagonal(y).cwiseInverse();
  parts.y = Eigen::Map<const Eigen::VectorXd>(y.values.data(), p.rows());
  parts.ptc = p.entries.transpose() * parts.cinv.asDiagonal();
  parts.ptcp = parts.ptc * p.entries;
  const std::size_t J = static_cast<std::size_t>(p.cols()) - 1;
  if (J >= 2) {
    const Eigen::MatrixXd d = second_diff_operator(J);
    parts.dtd = d.transpose() * d;
  } else {
    parts.dtd = Eigen::MatrixXd::Zero(p.cols(), p.cols());
  }
  return parts;
}

struct Solved {
  Eigen::VectorXd x;
  QpSolution qp;
  double ridge = 0.0;
};

// Solves in units of y = D / N_v with the objective rescaled to unit diagonal
// so the KKT tolerance is relative.
Solved solve_penalized(const PenaltyParts& parts, const Eigen::VectorXd& y, double vertex_count,
                       double lambda, const PenaltyConfig& cfg,
                       const std::optional<Eigen::VectorXd>& warm) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be non-negative");
  if (!(vertex_count > 0.0)) throw ConfigError("vertex count must be positive");
  const Eigen::Index m = parts.ptcp.rows();
  Eigen::MatrixXd h = parts.ptcp + lambda * parts.dtd;
  const double ridge = cfg.ridge > 0.0 ? cfg.ridge : 1e-10 * h.trace() / static_cast<double>(m);
  h.diagonal().array() += ridge;
  Solved out;
  out.ridge = ridge;
  const double nv = vertex_count;
  QpProblem qp;
  qp.Q = 2.0 * nv * nv * h;
  qp.q = -2.0 * nv * (parts.ptc * y);
  const double scale = qp.Q.diagonal().maxCoeff();
  qp.Q /= scale;
  qp.q /= scale;
  qp.Q = 0.5 * (qp.Q + qp.Q.transpose());
  qp.equality_sum = 1.0;
  std::optional<Eigen::VectorXd> start;
  if (warm) start = *warm / nv;
  if (start) {
    start = start->cwiseMax(0.0);
    const double s = start->sum();
    if (s > 0.0) *start /= s;
    else start.reset();
  }
  out.qp = solve_qp(qp, cfg.tol, cfg.max_iter, start);
  out.x = out.qp.x * nv;
  return out;
}

double weighted_residual(const SamplingMatrix& p, const PenaltyParts& parts,
                         const Eigen::VectorXd& x) {
  const Eigen::VectorXd r = p.entries * x - parts.y;
  return r.cwiseProduct(r).dot(parts.cinv);
}

PenalizedInversion to_result(const Solved& s, double lambda, const SamplingMatrix& p,
                             const PenaltyParts& parts) {
  PenalizedInversion out;
  out.estimate = DegreeCountVector(std::vector<double>(s.x.data(), s.x.data() + s.x.size()));
  out.lambda = lambda;
  out.ridge = s.ridge;
  out.objective = weighted_residual(p, parts, s.x) + lambda * s.x.dot(parts.dtd * s.x);
  out.kkt_residual = s.qp.kkt_residual;
  out.iterations = s.qp.iterations;
  out.converged = s.qp.converged;
  return out;
}

std::vector<Eigen::VectorXd> make_probes(Eigen::Index rows, const PenaltyConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<Eigen::VectorXd> probes(cfg.sure_perturbations, Eigen::VectorXd(rows));
  for (auto& z : probes) {
    for (Eigen::Index i = 0; i < rows; ++i) z[i] = rng.bernoulli(0.5) ? 1.0 : -1.0;
  }
  return probes;
}

double divergence_at(const SamplingMatrix& p, const PenaltyParts& parts, double vertex_count,
                     double lambda, const PenaltyConfig& cfg, const Solved& base,
                     const std::vector<Eigen::VectorXd>& probes, double delta) {
  const Eigen::VectorXd fitted = p.entries * base.x;
  double acc = 0.0;
  for (const auto& z : probes) {
    const Eigen::VectorXd y = parts.y + delta * z;
    const Solved s = solve_penalized(parts, y, vertex_count, lambda, cfg, base.x);
    acc += z.dot(p.entries * s.x - fitted) / delta;
  }
  return acc / static_cast<double>(probes.size());
}

}  // namespace

PenalizedInversion invert_penalized(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                                    double vertex_count, const PenaltyConfig& cfg) {
  const PenaltyParts parts = make_parts(p, d_hat_s);
  const Solved s = solve_penalized(parts, parts.y, vertex_count, cfg.lambda, cfg, std::nullopt);
  return to_result(s, cfg.lambda, p, parts);
}

std::vector<double> default_lambda_grid(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                                        std::size_t points) {
  if (points == 0) throw ConfigError("lambda grid needs at least one point");
  const PenaltyParts parts = make_parts(p, d_hat_s);
  const double td = parts.dtd.trace();
  const double scale = td > 0.0 ? parts.ptcp.trace() / td : 1.0;
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(points - 1);
    grid[i] = scale * std::pow(10.0, -4.0 + 8.0 * t);
  }
  return grid;
}

double sure_divergence(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                       double vertex_count, double lambda, const PenaltyConfig& cfg) {
  if (cfg.sure_perturbations == 0) throw ConfigError("SURE needs at least one perturbation");
  const PenaltyParts parts = make_parts(p, d_hat_s);
  const double delta = d_hat_s.max_value() * 1e-4;
  const Solved base = solve_penalized(parts, parts.y, vertex_count, lambda, cfg, std::nullopt);
  const auto probes = make_probes(p.rows(), cfg);
  return divergence_at(p, parts, vertex_count, lambda, cfg, base, probes, delta);
}

SureResult select_lambda_sure(const SamplingMatrix& p, const DegreeCountVector& d_hat_s,
                              double vertex_count, const PenaltyConfig& cfg) {
  if (cfg.sure_perturbations == 0) throw ConfigError("SURE needs at least one perturbation");
  SureResult out;
  out.grid = cfg.lambda_grid.empty() ? default_lambda_grid(p, d_hat_s) : cfg.lambda_grid;
  if (out.grid.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    if (!(out.grid[i] >= 0.0) || (i > 0 && !(out.grid[i] > out.grid[i - 1]))) {
      throw ConfigError("lambda grid must be non-negative and strictly increasing");
    }
  }
  const PenaltyParts parts = make_parts(p, d_hat_s);
  out.delta = d_hat_s.max_value() * 1e-4;
  const auto probes = make_probes(p.rows(), cfg);

  double best_risk = std::numeric_limits<double>::infinity();
  std::optional<Eigen::VectorXd> warm;
  for (double lambda : out.grid) {
    const Solved base = solve_penalized(parts, parts.y, vertex_count, lambda, cfg, warm);
    warm = base.x;
    const double res = weighted_residual(p, parts, base.x);
    const double div =
        divergence_at(p, parts, vertex_count, lambda, cfg, base, probes, out.delta);
    const double risk = res + 2.0 * div;
    out.residual.push_back(res);
    out.divergence.push_back(div);
    out.risk.push_back(risk);
    if (risk < best_risk) {
      best_risk = risk;
      out.lambda = lambda;
      out.best = to_result(base, lambda, p, parts);
    }
  }
  return out;
}

}  // namespace indeg
