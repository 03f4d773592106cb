#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace indeg {

/// Counts (or estimated counts) indexed by in-degree j = 0..J.
///
/// Holds true counts D(j), sample counts D_s(j') and estimates alike. Reads
/// past the end return zero so vectors of different lengths combine freely.
struct DegreeCountVector {
  std::vector<double> values;

  DegreeCountVector() = default;
  explicit DegreeCountVector(std::vector<double> v) : values(std::move(v)) {}
  explicit DegreeCountVector(std::size_t size) : values(size, 0.0) {}

  static DegreeCountVector from_counts(std::span<const std::size_t> counts);

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  /// Largest index, i.e. size() - 1; zero for an empty vector.
  std::size_t max_index() const { return values.empty() ? 0 : values.size() - 1; }

  /// Largest index holding a positive entry; zero when none is positive.
  std::size_t last_positive() const;

  double at(std::size_t j) const { return j < values.size() ? values[j] : 0.0; }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }

  double total() const;
  /// Sum of j * values(j); equals N_e for true in-degree counts.
  double first_moment() const;
  double max_value() const;

  /// Copy resized to `size`, zero padded or truncated.
  DegreeCountVector resized(std::size_t size) const;
  /// Drop trailing zeros (keeps at least one entry).
  DegreeCountVector trimmed() const;
};

}  // namespace indeg
