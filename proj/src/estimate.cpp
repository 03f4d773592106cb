#include "indeg/estimate.hpp"

#include <cmath>

#include "indeg/error.hpp"

namespace indeg {

namespace {

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

Estimates estimate_all(const EstimateInput& in, const EstimateOptions& opt) {
  if (in.population == 0 || in.budget == 0) throw ConfigError("population and budget must be positive");
  if (is_without_replacement(in.scheme) && in.budget > in.population) {
    throw ConfigError("budget exceeds population without replacement");
  }
  const DegreeCountVector d = in.d_hat_s.trimmed();
  for (double v : d.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DataError("sample counts must be finite and non-negative");
  }
  if (!(d.total() > 0.0)) throw DataError("sample counts are identically zero");
  const double nv = in.vertex_count > 0.0 ? in.vertex_count : d.total();
  const double p = in.fraction();

  Estimates out;
  auto& diag = out.diagnostics;
  diag["scheme"] = to_string(in.scheme);
  diag["population"] = in.population;
  diag["budget"] = in.budget;
  diag["vertex_count"] = nv;
  diag["fraction"] = p;
  diag["j_hat_s"] = d.last_positive();

  out.census = is_without_replacement(in.scheme) && in.budget == in.population;
  if (out.census) {
    diag["census"] = true;
    if (opt.naive) out.inv_naive = d;
    if (opt.penalized) out.inv_penalized = d;
    if (opt.asym) out.asym = d;
    if (opt.line) out.line = d;
    out.stitched = d;
    if (opt.normalize) out.stitched_normalized = d;
    try {
      const PowerLawFit fit = fit_power_law(d, opt.j_start, opt.alpha);
      out.alpha_hat = fit.alpha;
    } catch (const DataError& e) {
      out.skipped["alpha"] = e.what();
    }
    return out;
  }
  diag["census"] = false;

  const std::size_t J = opt.max_in_degree ? *opt.max_in_degree : d.last_positive();
  if (opt.naive || opt.penalized) {
    const SamplingMatrix P = build_ps(in.scheme, in.population, in.budget, J, WrRows::truncated, d.size());
    diag["matrix_rows"] = P.rows();
    diag["matrix_cols"] = P.cols();
    diag["log10_condition"] = finite_or_null(log10_condition_number(P.entries));

    if (opt.naive) {
      try {
        out.inv_naive = invert_naive(P, d).estimate;
      } catch (const NumericalError& e) {
        out.skipped["inv_naive"] = e.what();
      }
    }
    if (opt.penalized) {
      PenaltyConfig cfg = opt.penalty;
      if (cfg.lambda_grid.empty()) cfg.lambda_grid = default_lambda_grid(P, d, opt.lambda_points);
      const SureResult sure = select_lambda_sure(P, d, nv, cfg);
      out.inv_penalized = sure.best.estimate;
      diag["penalized"] = {
          {"lambda", sure.lambda},
          {"ridge", sure.best.ridge},
          {"kkt_residual", sure.best.kkt_residual},
          {"converged", sure.best.converged},
          {"iterations", sure.best.iterations},
          {"sure", {{"grid", sure.grid},
                    {"risk", sure.risk},
                    {"residual", sure.residual},
                    {"divergence", sure.divergence},
                    {"delta", sure.delta},
                    {"perturbations", cfg.sure_perturbations},
                    {"probe_seed", cfg.seed}}},
      };
    }
  }

  const bool tail_ok = p > 0.0 && p <= 1.0;
  if ((opt.asym || opt.line) && !tail_ok) {
    if (opt.asym) out.skipped["asym"] = "sampling fraction above 1";
    if (opt.line) out.skipped["line"] = "sampling fraction above 1";
  }
  if (opt.asym && tail_ok) {
    const AsymResult a = asym_estimate(d, p, default_j_min(p, opt.epsilon));
    out.asym = a.estimate;
    diag["asym"] = {{"j_min", a.j_min},     {"tau_s", a.tau_s},
                    {"j_hat", a.j_hat},     {"flat_start", a.flat_start},
                    {"degenerate_flat", a.degenerate_flat}};
  }
  if (opt.line && tail_ok) {
    LineConfig lc;
    lc.epsilon = opt.epsilon;
    lc.alpha = opt.alpha;
    lc.j_start = opt.j_start;
    try {
      const LineResult l = line_estimate(d, p, in.scheme, static_cast<double>(in.population),
                                         static_cast<double>(in.budget), lc);
      out.line = l.estimate;
      out.alpha_hat = l.fit.alpha;
      diag["line"] = {{"alpha", l.fit.alpha},         {"alpha_supplied", opt.alpha.has_value()},
                      {"amplitude", l.fit.amplitude}, {"j_start", l.fit.j_start},
                      {"ks_distance", l.fit.ks_distance}, {"k1", l.k1},
                      {"cs_at_tau_s", l.cs_at_tau_s}, {"tau_s", l.tau_s},
                      {"tau", l.tau},                 {"j_hat", l.j_hat},
                      {"j_min", l.j_min},             {"cs_fallback", l.cs_fallback}};
    } catch (const DataError& e) {
      out.skipped["line"] = e.what();
    } catch (const ConfigError& e) {
      out.skipped["line"] = e.what();
    }
  }

  if (out.inv_penalized && (out.line || out.asym)) {
    const DegreeCountVector& tail = out.line ? *out.line : *out.asym;
    const std::size_t cross = default_crossover(*out.inv_penalized, tail);
    const Stitched raw = stitch(*out.inv_penalized, tail, cross);
    out.stitched = raw.estimate;
    diag["stitch"] = {{"tail", out.line ? "line" : "asym"}, {"crossover", cross}, {"gap", raw.gap}};
    if (opt.normalize) out.stitched_normalized = stitch(*out.inv_penalized, tail, cross, nv).estimate;
  }
  return out;
}

}  // namespace indeg
