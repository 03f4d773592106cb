#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "indeg/degree_counts.hpp"

namespace indeg {

/// Total-variation distance between the vectors normalized to probability
/// vectors (zero padded to a common length). With max_j set, only entries
/// 0..max_j take part.
double tv_distance(const DegreeCountVector& a, const DegreeCountVector& b);
double tv_distance(const DegreeCountVector& a, const DegreeCountVector& b, std::size_t max_j);

/// Mean over `support` of (log10 a(j) - log10 b(j))^2; both must be positive there.
double log_mse(const DegreeCountVector& a, const DegreeCountVector& b,
               std::span<const std::size_t> support);

/// Indices j >= from where both vectors are defined and positive.
std::vector<std::size_t> common_positive_support(const DegreeCountVector& a,
                                                 const DegreeCountVector& b, std::size_t from = 0);

/// Absolute error of a tail-index estimate.
double alpha_error(double alpha_hat, double alpha_true);

}  // namespace indeg
