#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "automato/geometry.hpp"
#include "automato/tomato.hpp"

namespace automato {

/// Resamples that fail density estimation are redrawn from a fresh substream
/// up to this many times before fit() gives up.
inline constexpr unsigned kMaxResampleAttempts = 10;

/// Outlier threshold used when flagging is switched on without a value.
inline constexpr double kDefaultOutlierThreshold = 0.5;

struct AutomatoConfig {
  /// Graph and density estimators; tau is ignored.
  TomatoParams tomato;
  double alpha = 0.35;
  std::size_t b_iterations = 1000;
  /// Drawn from std::random_device when absent, and recorded in the result.
  std::optional<std::uint64_t> seed;
  /// Reciprocity share below which a point is labelled an outlier. Off by
  /// default.
  std::optional<double> outlier_threshold;
  /// Worker threads for the bootstrap; 0 uses the hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

struct FittedAutomato {
  AutomatoConfig config;
  std::uint64_t seed = 0;
  /// Reference persistence structure of the full cloud.
  ClusterHierarchy hierarchy;
  /// sqrt(n) * finite bottleneck distance of each bootstrap diagram to the
  /// reference, ascending.
  std::vector<double> sorted_distances;
  double q_hat = 0.0;
  double tau = 0.0;
  Clustering clustering;
  /// Empty unless outlier flagging is enabled.
  std::vector<bool> outliers;

  std::size_t n_points() const noexcept { return hierarchy.vertex_count(); }
  const PersistenceDiagram& reference_diagram() const noexcept { return hierarchy.diagram(); }
  /// Cluster labels with outliers set to -1.
  std::vector<int> labels() const;

  bool operator==(const FittedAutomato& other) const;
};

/// 1-based rank ceil((1 - alpha) * b) of the bootstrap quantile.
std::size_t quantile_rank(double alpha, std::size_t b);

/// q_hat: the quantile_rank-th smallest of `sorted_distances`.
double bootstrap_quantile(std::span<const double> sorted_distances, double alpha);

/// Prominence threshold 2 * q_hat / sqrt(n).
double prominence_threshold(double q_hat, std::size_t n);

/// Seed of the random stream for one bootstrap iteration and attempt.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t iteration, unsigned attempt);

/// n indices drawn uniformly with replacement from [0, n).
std::vector<std::size_t> draw_resample(std::size_t n, std::uint64_t stream_seed);

/// Unsorted bootstrap distances d_i = sqrt(n) * d_B(D*_i, D) over finite
/// points. Iteration i only depends on (seed, i), so the result does not
/// depend on `threads`.
std::vector<double> bootstrap_distances(const PointCloud& cloud, const TomatoParams& params,
                                        const PersistenceDiagram& reference, std::size_t b,
                                        std::uint64_t seed, unsigned threads);

/// Bottleneck bootstrap over ToMATo diagrams, then ToMATo at
/// tau = 2 * q_hat / sqrt(n).
FittedAutomato fit(const PointCloud& cloud, const AutomatoConfig& config);

/// Builds the fitted model from externally supplied bootstrap distances.
FittedAutomato fit_from_distances(ClusterHierarchy hierarchy, std::vector<double> distances,
                                  const AutomatoConfig& config, std::uint64_t seed);

/// Re-selects the threshold from the stored distances; no resampling.
FittedAutomato update_alpha(const FittedAutomato& fitted, double alpha);

/// v is an outlier iff fewer than `threshold` of its k nearest neighbours
/// list v among their own k nearest.
std::vector<bool> flag_outliers(const NeighborTable& table, double threshold);
std::vector<bool> flag_outliers(const PointCloud& cloud, std::size_t k, double threshold);

}  // namespace automato
