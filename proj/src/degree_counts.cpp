#include "indeg/degree_counts.hpp"

#include <algorithm>
#include <numeric>

namespace indeg {

DegreeCountVector DegreeCountVector::from_counts(std::span<const std::size_t> counts) {
  DegreeCountVector out(counts.size());
  std::transform(counts.begin(), counts.end(), out.values.begin(),
                 [](std::size_t c) { return static_cast<double>(c); });
  return out;
}

std::size_t DegreeCountVector::last_positive() const {
  for (std::size_t j = values.size(); j-- > 0;) {
    if (values[j] > 0.0) return j;
  }
  return 0;
}

double DegreeCountVector::total() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double DegreeCountVector::first_moment() const {
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += static_cast<double>(j) * values[j];
  return s;
}

double DegreeCountVector::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

DegreeCountVector DegreeCountVector::resized(std::size_t size) const {
  DegreeCountVector out = *this;
  out.values.resize(size, 0.0);
  return out;
}

DegreeCountVector DegreeCountVector::trimmed() const {
  DegreeCountVector out = *this;
  while (out.values.size() > 1 && out.values.back() == 0.0) out.values.pop_back();
  return out;
}

}  // namespace indeg
