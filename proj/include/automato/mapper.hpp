#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "automato/automato.hpp"
#include "automato/geometry.hpp"

namespace automato {

struct Interval {
  double lo;
  double hi;
  /// Closed interval membership.
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Equal-length intervals over [min, max] of the filter where consecutive
/// intervals overlap by `overlap_fraction` of their length.
struct IntervalCover {
  std::vector<Interval> intervals;
  double overlap_fraction = 0.0;
};

/// Length L solves L * (1 + (N - 1) * (1 - g)) = max - min; interval i starts
/// at min + i * L * (1 - g). A constant filter yields a single interval.
IntervalCover build_cover(std::span<const double> filter_values, std::size_t n_intervals,
                          double overlap_fraction);

/// Labels for one preimage. Negative labels leave the point out of every
/// vertex.
using MapperClusterer =
    std::function<std::vector<int>(const PointCloud& preimage, std::size_t interval)>;

struct MapperVertex {
  std::size_t id;
  std::size_t interval;
  int cluster;
  std::vector<std::size_t> members;
};

struct MapperGraph {
  std::vector<MapperVertex> vertices;
  /// (i, j) with i < j, sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t component_count() const;
  /// E - V + #components, the number of independent cycles.
  long cycle_rank() const;
  std::size_t isolated_vertex_count() const;

  nlohmann::json to_json() const;
  std::string to_dot() const;
};

/// Clusters every non-empty preimage and joins vertices of different
/// intervals that share a point.
MapperGraph mapper_graph(const PointCloud& cloud, std::span<const double> filter_values,
                         const IntervalCover& cover, const MapperClusterer& clusterer);

/// AuToMATo on each preimage, seeded with seed + interval. Preimages with
/// fewer points than the estimators need run with k clamped to size - 1;
/// preimages of one or two points form a single cluster.
MapperClusterer automato_mapper_clusterer(AutomatoConfig config, std::uint64_t seed);

/// Everything in one cluster.
MapperClusterer single_cluster_clusterer();

}  // namespace automato
