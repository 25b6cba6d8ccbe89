#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "automato/geometry.hpp"

namespace automato {

/// DTM smoothing, given either as a neighbour count k or as a mass fraction m
/// with k = ceil(m * n).
class Smoothing {
 public:
  static Smoothing neighbors(std::size_t k);
  static Smoothing mass(double m);

  bool is_mass() const noexcept { return is_mass_; }
  double value() const noexcept { return value_; }

  /// Neighbour count for a cloud of n points. Throws InvalidParameter unless
  /// 1 <= k <= n - 1.
  std::size_t resolve(std::size_t n) const;

  bool operator==(const Smoothing&) const = default;

 private:
  Smoothing(bool is_mass, double value) : is_mass_(is_mass), value_(value) {}
  bool is_mass_;
  double value_;
};

enum class DensityKind { dtm, log_dtm, kde };

struct DensityEstimate {
  std::vector<double> values;
  DensityKind kind;
  /// Resolved k for DTM variants, bandwidth h for KDE.
  double parameter;
};

/// Truncation radius of the Gaussian kernel, in bandwidths.
inline constexpr double kKdeTruncation = 3.0;

/// Empirical unnormalized distance-to-measure density
///   f(x) = (mean of |x - y|^2 over the k nearest neighbours y of x)^(-1/2).
/// The query point is not its own neighbour; coincident duplicates are.
DensityEstimate dtm_density(const PointCloud& cloud, Smoothing smoothing);
DensityEstimate dtm_density(const NeighborTable& table, std::size_t k);

/// Natural logarithm of dtm_density.
DensityEstimate log_dtm_density(const PointCloud& cloud, Smoothing smoothing);
DensityEstimate log_dtm_density(const NeighborTable& table, std::size_t k);

/// Unnormalized Gaussian KDE truncated at kKdeTruncation * h, self term
/// included.
DensityEstimate kde_gaussian(const PointCloud& cloud, double bandwidth);

/// ceil(x) that treats values within a relative 1e-9 of an integer as that
/// integer, so that e.g. (1 - 0.35) * 1000 resolves to 650.
std::size_t stable_ceil(double x);

}  // namespace automato
