#include "indeg/tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "indeg/error.hpp"
#include "indeg/sample.hpp"

namespace indeg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_fraction(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("sampling fraction must lie in (0, 1]");
}

}  // namespace

bool is_defined(double v) { return !std::isnan(v); }

std::size_t estimate_tau_s(const DegreeCountVector& d_hat_s) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t j = 0; j < d_hat_s.size(); ++j) {
    const double v = d_hat_s[j];
    if (v > 0.0 && v < best) {
      best = v;
      arg = j;
    }
  }
  if (!std::isfinite(best)) throw DataError("sample counts have no positive entry");
  return arg;
}

std::size_t estimate_J(std::size_t j_hat_s, double p) {
  check_fraction(p);
  return round_half_even(static_cast<double>(j_hat_s) / p);
}

std::size_t default_j_min(double p, double epsilon) {
  check_fraction(p);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  // Guard against 1/(0.2 * 0.01) landing a hair above an integer.
  const double raw = 1.0 / (p * epsilon * epsilon);
  return static_cast<std::size_t>(std::ceil(raw * (1.0 - 1e-12)));
}

AsymResult asym_estimate(const DegreeCountVector& d_hat_s, double p, std::size_t j_min) {
  check_fraction(p);
  AsymResult out;
  out.j_min = j_min;
  out.tau_s = estimate_tau_s(d_hat_s);
  out.j_hat_s = d_hat_s.last_positive();
  out.j_hat = estimate_J(out.j_hat_s, p);
  out.flat_start = static_cast<double>(out.tau_s) / p;
  out.estimate = DegreeCountVector(std::vector<double>(out.j_hat + 1, kNaN));

  const auto last_rescaled =
      static_cast<std::size_t>(std::min(std::floor(out.flat_start), static_cast<double>(out.j_hat)));
  for (std::size_t j = j_min; j <= last_rescaled; ++j) {
    const std::size_t k = round_half_even(p * static_cast<double>(j));
    double v = d_hat_s.at(k);
    if (p < 1.0) {
      double acc = 0.0;
      int used = 0;
      for (std::size_t i = (k == 0 ? 0 : k - 1); i <= k + 1; ++i) {
        acc += d_hat_s.at(i);
        ++used;
      }
      v = acc / used;
    }
    out.estimate[j] = std::max(0.0, p * (v - 1.0 / p));
  }

  const double span = static_cast<double>(out.j_hat) - out.flat_start;
  if (!(span > 0.0)) {
    out.degenerate_flat = true;
    return out;
  }
  const double ratio = static_cast<double>(out.j_hat_s - out.tau_s) / span;
  const auto first_flat = static_cast<std::size_t>(std::floor(out.flat_start)) + 1;
  for (std::size_t j = first_flat; j <= out.j_hat; ++j) {
    const double offset = ratio * (static_cast<double>(j) - out.flat_start);
    out.estimate[j] = d_hat_s.at(out.tau_s + round_half_even(offset));
  }
  return out;
}

double cs_factor(MatrixScheme scheme, double j_prime, double alpha, double population,
                 double budget) {
  const double N = population;
  const double n = budget;
  if (!(j_prime >= 1.0)) throw ConfigError("C_s needs j' >= 1");
  if (!(alpha > 0.0)) throw ConfigError("C_s needs alpha > 0");
  if (!(n > 0.0 && n <= N)) throw ConfigError("C_s needs 0 < n <= N");
  double l = alpha * std::log(n / N);
  if (is_without_replacement(scheme)) {
    if (!(n < N)) throw ConfigError("C_s for NR sampling needs n < N");
    if (!(j_prime < n)) throw ConfigError("C_s for NR sampling needs j' < n");
    const double a = 1.0 / (1.0 - n / N);
    const double b1 = (a - 2.0 * alpha - 1.0) / (2.0 * j_prime * a);
    const double b2 = (a - alpha) / (a * n);
    const double b3 = (a + 1.0) / (2.0 * a * (n - j_prime));
    if (!(b1 > -1.0 && b2 > -1.0)) throw ConfigError("C_s factors are not positive");
    l += (a * (j_prime + 0.5) - alpha - 1.0) * std::log1p(b1);
    l += (alpha - a * (1.0 + n) + 0.5) * std::log1p(b2);
    l += a * (n - j_prime + 0.5) * std::log1p(b3);
  } else {
    if (!(j_prime > alpha + 1.0)) throw ConfigError("C_s for WR sampling needs j' > alpha + 1");
    if (!(n > alpha)) throw ConfigError("C_s for WR sampling needs n > alpha");
    l += 1.0;
    l += (j_prime - alpha - 0.5) * std::log1p(-(alpha + 1.0) / j_prime);
    l += (alpha - n + 0.5) * std::log1p(-alpha / n);
  }
  return std::exp(l);
}

double hurwitz_zeta(double s, double start) {
  if (!(s > 1.0) || !(start > 0.0)) throw ConfigError("zeta sum needs s > 1 and start > 0");
  constexpr int kDirect = 32;
  double acc = 0.0;
  for (int k = 0; k < kDirect; ++k) acc += std::pow(start + k, -s);
  // Euler-Maclaurin remainder from a = start + kDirect.
  const double a = start + kDirect;
  acc += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) + s * std::pow(a, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(a, -s - 3.0) / 720.0;
  return acc;
}

PowerLawFit fit_power_law(const DegreeCountVector& d_hat_s, std::optional<std::size_t> j_start,
                          std::optional<double> alpha) {
  if (alpha && !(*alpha > 0.0)) throw ConfigError("alpha must be positive");
  std::vector<double> xs;
  std::vector<double> ns;
  for (std::size_t j = 1; j < d_hat_s.size(); ++j) {
    if (d_hat_s[j] > 0.0) {
      xs.push_back(static_cast<double>(j));
      ns.push_back(d_hat_s[j]);
    }
  }
  const std::size_t k = xs.size();
  // Suffix sums of counts and of count * log(x).
  std::vector<double> tail(k + 1, 0.0);
  std::vector<double> tail_log(k + 1, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    tail[i] = tail[i + 1] + ns[i];
    tail_log[i] = tail_log[i + 1] + ns[i] * std::log(xs[i]);
  }
  constexpr double kMinTail = 10.0;

  // Fit on the observed degrees from index c on, with the given cutoff <= xs[c].
  auto fit_at = [&](std::size_t c, double cutoff, PowerLawFit& f) -> bool {
    const double m = tail[c];
    if (m < kMinTail) return false;
    const double shift = cutoff - 0.5;
    double a = 0.0;
    if (alpha) {
      a = *alpha;
    } else {
      const double l = tail_log[c] - m * std::log(shift);
      if (!(l > 0.0)) return false;
      a = m / l;
    }
    double ks = 0.0;
    for (std::size_t i = c; i < k; ++i) {
      const double at = std::pow((xs[i] - 0.5) / shift, -a);
      const double after = std::pow((xs[i] + 0.5) / shift, -a);
      ks = std::max(ks, std::abs(tail[i] / m - at));
      ks = std::max(ks, std::abs(tail[i + 1] / m - after));
    }
    f.alpha = a;
    f.j_start = static_cast<std::size_t>(cutoff);
    f.ks_distance = ks;
    f.tail_count = m;
    f.amplitude = m / hurwitz_zeta(a + 1.0, cutoff);
    return true;
  };

  PowerLawFit best;
  bool found = false;
  if (j_start) {
    if (*j_start == 0) throw ConfigError("power-law cutoff must be positive");
    const double cutoff = static_cast<double>(*j_start);
    const auto c = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), cutoff) - xs.begin());
    found = c < k && fit_at(c, cutoff, best);
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      PowerLawFit f;
      if (fit_at(c, xs[c], f) && (!found || f.ks_distance < best.ks_distance)) {
        best = f;
        found = true;
      }
    }
  }
  if (!found) throw DataError("insufficient tail mass for a power-law fit");
  return best;
}

LineResult line_estimate(const DegreeCountVector& d_hat_s, double p, MatrixScheme scheme,
                         double population, double budget, const LineConfig& cfg) {
  check_fraction(p);
  LineResult out;
  out.fit = fit_power_law(d_hat_s, cfg.j_start, cfg.alpha);
  const double a = out.fit.alpha;
  out.tau_s = estimate_tau_s(d_hat_s);
  out.j_hat_s = d_hat_s.last_positive();
  out.j_hat = estimate_J(out.j_hat_s, p);
  out.j_min = cfg.j_min ? *cfg.j_min : default_j_min(p, cfg.epsilon);

  auto cs = [&](double j) {
    try {
      return cs_factor(scheme, j, a, population, budget);
    } catch (const ConfigError&) {
      out.cs_fallback = true;
      return cs_limit(p, a);
    }
  };
  out.cs_at_tau_s = cs(static_cast<double>(out.tau_s));
  out.k1 = std::pow(d_hat_s.at(out.tau_s) / out.cs_at_tau_s, 1.0 / (a + 1.0));
  out.tau = std::min(round_half_even(out.k1 * static_cast<double>(out.tau_s)), out.j_hat);
  out.tau = std::max(out.tau, std::min(out.tau_s, out.j_hat));

  out.estimate = DegreeCountVector(std::vector<double>(out.j_hat + 1, kNaN));
  for (std::size_t j = std::max<std::size_t>(out.j_min, 1); j <= out.tau; ++j) {
    const double jd = static_cast<double>(j);
    out.estimate[j] = out.fit.amplitude / cs(jd) * std::pow(jd, -a - 1.0);
  }
  for (std::size_t j = std::max(out.tau + 1, out.j_min); j <= out.j_hat; ++j) out.estimate[j] = 1.0;
  return out;
}

Stitched stitch(const DegreeCountVector& bulk, const DegreeCountVector& tail, std::size_t crossover,
                std::optional<double> normalize_to) {
  Stitched out;
  out.crossover = crossover;
  const std::size_t size = std::max(bulk.size(), tail.size());
  out.estimate = DegreeCountVector(size);
  for (std::size_t j = 0; j < size; ++j) {
    if (j < crossover) {
      out.estimate[j] = bulk.at(j);
    } else if (j < tail.size() && is_defined(tail[j])) {
      out.estimate[j] = tail[j];
    } else {
      out.gap = out.gap || j < tail.size();
      out.estimate[j] = 0.0;
    }
  }
  if (normalize_to) {
    const double total = out.estimate.total();
    if (!(total > 0.0)) throw NumericalError("cannot normalize an all-zero estimate");
    for (double& v : out.estimate.values) v *= *normalize_to / total;
    out.normalized = true;
  }
  return out;
}

std::size_t default_crossover(const DegreeCountVector& bulk, const DegreeCountVector& tail) {
  for (std::size_t j = 0; j < tail.size(); ++j) {
    if (bulk.at(j) <= 0.0 && is_defined(tail[j]) && tail[j] > 0.0) return j;
  }
  return bulk.size();
}

}  // namespace indeg
