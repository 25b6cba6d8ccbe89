#include "automato/density.hpp"

#include <cmath>
#include <string>

#include "automato/errors.hpp"

namespace automato {

std::size_t stable_ceil(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(std::max(0.0, nearest));
  }
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x)));
}

Smoothing Smoothing::neighbors(std::size_t k) {
  if (k < 1) throw InvalidParameter("DTM smoothing: k must be >= 1");
  return Smoothing(false, static_cast<double>(k));
}

Smoothing Smoothing::mass(double m) {
  if (!(m > 0.0 && m < 1.0)) throw InvalidParameter("DTM smoothing: m must lie in (0, 1)");
  return Smoothing(true, m);
}

std::size_t Smoothing::resolve(std::size_t n) const {
  const std::size_t k =
      is_mass_ ? stable_ceil(value_ * static_cast<double>(n)) : static_cast<std::size_t>(value_);
  if (k < 1 || k + 1 > n) {
    throw InvalidParameter("DTM smoothing resolves to k = " + std::to_string(k) +
                           ", outside [1, n - 1] for n = " + std::to_string(n));
  }
  return k;
}

DensityEstimate dtm_density(const NeighborTable& table, std::size_t k) {
  if (k < 1 || k > table.k()) throw InvalidParameter("DTM: k exceeds the neighbor table width");
  std::vector<double> values(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto sq = table.squared_distances(i);
    double sum = 0.0;
    for (std::size_t r = 0; r < k; ++r) sum += sq[r];
    if (sum == 0.0) {
      throw DegenerateDensity("DTM: point " + std::to_string(i) + " coincides with all of its " +
                              std::to_string(k) + " nearest neighbours");
    }
    values[i] = 1.0 / std::sqrt(sum / static_cast<double>(k));
  }
  return {std::move(values), DensityKind::dtm, static_cast<double>(k)};
}

DensityEstimate dtm_density(const PointCloud& cloud, Smoothing smoothing) {
  const std::size_t k = smoothing.resolve(cloud.size());
  return dtm_density(nearest_neighbors(cloud, k), k);
}

namespace {

DensityEstimate to_log(DensityEstimate dtm) {
  for (double& v : dtm.values) v = std::log(v);
  dtm.kind = DensityKind::log_dtm;
  return dtm;
}

}  // namespace

DensityEstimate log_dtm_density(const NeighborTable& table, std::size_t k) {
  return to_log(dtm_density(table, k));
}

DensityEstimate log_dtm_density(const PointCloud& cloud, Smoothing smoothing) {
  return to_log(dtm_density(cloud, smoothing));
}

DensityEstimate kde_gaussian(const PointCloud& cloud, double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw InvalidParameter("KDE: bandwidth must be positive and finite");
  }
  const double radius = kKdeTruncation * bandwidth;
  const double two_h2 = 2.0 * bandwidth * bandwidth;
  std::vector<double> values(cloud.size(), 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      const double sq = squared_distance(cloud.row(i), cloud.row(j));
      if (std::sqrt(sq) <= radius) values[i] += std::exp(-sq / two_h2);
    }
  }
  return {std::move(values), DensityKind::kde, bandwidth};
}

}  // namespace automato
