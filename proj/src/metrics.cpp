#include "indeg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "indeg/error.hpp"

namespace indeg {

namespace {

double defined_mass(const DegreeCountVector& v, std::size_t end) {
  double s = 0.0;
  for (std::size_t j = 0; j < std::min(end, v.size()); ++j) {
    if (std::isnan(v[j])) throw DataError("distance of a vector with undefined entries");
    s += v[j];
  }
  return s;
}

}  // namespace

double tv_distance(const DegreeCountVector& a, const DegreeCountVector& b, std::size_t max_j) {
  const std::size_t end = std::min(std::max(a.size(), b.size()), max_j + 1);
  const double ma = defined_mass(a, end);
  const double mb = defined_mass(b, end);
  if (!(ma > 0.0) || !(mb > 0.0)) throw DataError("distance of a vector with no positive mass");
  double d = 0.0;
  for (std::size_t j = 0; j < end; ++j) d += std::abs(a.at(j) / ma - b.at(j) / mb);
  return std::min(1.0, 0.5 * d);
}

double tv_distance(const DegreeCountVector& a, const DegreeCountVector& b) {
  return tv_distance(a, b, std::max(a.size(), b.size()));
}

double log_mse(const DegreeCountVector& a, const DegreeCountVector& b,
               std::span<const std::size_t> support) {
  if (support.empty()) throw DataError("log error over an empty support");
  double s = 0.0;
  for (std::size_t j : support) {
    const double x = a.at(j);
    const double y = b.at(j);
    if (!(x > 0.0) || !(y > 0.0)) {
      throw DataError("log error needs positive entries; index " + std::to_string(j) + " is not");
    }
    const double d = std::log10(x) - std::log10(y);
    s += d * d;
  }
  return s / static_cast<double>(support.size());
}

std::vector<std::size_t> common_positive_support(const DegreeCountVector& a,
                                                 const DegreeCountVector& b, std::size_t from) {
  std::vector<std::size_t> out;
  const std::size_t end = std::min(a.size(), b.size());
  for (std::size_t j = from; j < end; ++j) {
    if (a[j] > 0.0 && b[j] > 0.0) out.push_back(j);
  }
  return out;
}

double alpha_error(double alpha_hat, double alpha_true) { return std::abs(alpha_hat - alpha_true); }

}  // namespace indeg
