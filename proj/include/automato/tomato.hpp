#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "automato/density.hpp"
#include "automato/diagram.hpp"
#include "automato/geometry.hpp"

namespace automato {

/// Neighbourhood graph estimator: k-NN (union) or delta-Rips.
struct GraphSpec {
  GraphKind kind = GraphKind::knn;
  std::size_t k = 10;
  double delta = 0.0;

  static GraphSpec knn(std::size_t k) { return {GraphKind::knn, k, 0.0}; }
  static GraphSpec rips(double delta) { return {GraphKind::rips, 0, delta}; }

  bool operator==(const GraphSpec&) const = default;
};

struct DensitySpec {
  DensityKind kind = DensityKind::log_dtm;
  Smoothing smoothing = Smoothing::neighbors(10);
  double bandwidth = 0.0;

  static DensitySpec dtm(Smoothing s) { return {DensityKind::dtm, s, 0.0}; }
  static DensitySpec log_dtm(Smoothing s) { return {DensityKind::log_dtm, s, 0.0}; }
  static DensitySpec kde(double h) { return {DensityKind::kde, Smoothing::neighbors(10), h}; }

  bool operator==(const DensitySpec&) const = default;
};

/// Defaults: 10-NN graph with log-DTM density (k = 10), tau = +inf.
struct TomatoParams {
  GraphSpec graph;
  DensitySpec density;
  double tau = kInfinity;

  void validate() const;
  bool operator==(const TomatoParams&) const = default;
};

NeighborhoodGraph build_graph(const PointCloud& cloud, const GraphSpec& spec);
DensityEstimate estimate_density(const PointCloud& cloud, const DensitySpec& spec);

/// True when `u` comes before `v` in the sweep: higher density first, ties
/// broken by smaller index.
inline bool sweeps_before(std::span<const double> density, std::size_t u, std::size_t v) noexcept {
  return density[u] > density[v] || (density[u] == density[v] && u < v);
}

struct HillClimbForest {
  /// parent[v] == v for peaks, otherwise v's highest neighbour.
  std::vector<std::size_t> parent;
  /// Peaks in sweep order.
  std::vector<std::size_t> peaks;
  /// The peak whose tree contains v.
  std::vector<std::size_t> root;
};

/// Points each vertex at its highest neighbour when that neighbour sweeps
/// before it.
HillClimbForest hill_climb_forest(const NeighborhoodGraph& graph, std::span<const double> density);

struct Clustering {
  std::vector<int> labels;
  std::size_t n_clusters = 0;
  std::vector<std::size_t> peak_of_cluster;

  bool operator==(const Clustering&) const = default;
};

/// 0-dimensional persistence of the superlevel-set filtration together with
/// the merge tree it induces on density peaks. Diagram point i belongs to the
/// i-th peak in sweep order, so point 0 is the global maximum.
class ClusterHierarchy {
 public:
  ClusterHierarchy() = default;
  /// Throws InvalidParameter on inconsistent input.
  ClusterHierarchy(PersistenceDiagram diagram, std::vector<std::size_t> absorber,
                   std::vector<std::size_t> vertex_point);

  const PersistenceDiagram& diagram() const noexcept { return diagram_; }
  /// For diagram point i, the point whose component absorbed it at its death,
  /// or kDiagonal for essential points. Always smaller than i.
  std::span<const std::size_t> absorber() const noexcept { return absorber_; }
  /// For each vertex, the diagram point of its hill-climbing peak.
  std::span<const std::size_t> vertex_point() const noexcept { return vertex_point_; }
  std::size_t vertex_count() const noexcept { return vertex_point_.size(); }

  /// Merges every cluster of prominence < tau into its absorber, repeatedly.
  /// Labels follow the sweep order of the surviving peaks.
  Clustering cluster(double tau) const;

  bool operator==(const ClusterHierarchy&) const = default;

 private:
  PersistenceDiagram diagram_;
  std::vector<std::size_t> absorber_;
  std::vector<std::size_t> vertex_point_;
};

ClusterHierarchy build_hierarchy(const NeighborhoodGraph& graph, std::span<const double> density);

PersistenceDiagram compute_persistence(const NeighborhoodGraph& graph,
                                       std::span<const double> density);

struct TomatoResult {
  Clustering clustering;
  ClusterHierarchy hierarchy;

  const PersistenceDiagram& diagram() const noexcept { return hierarchy.diagram(); }
};

TomatoResult tomato_cluster(const NeighborhoodGraph& graph, std::span<const double> density,
                            double tau);
TomatoResult tomato_cluster(const PointCloud& cloud, const TomatoParams& params);

/// Graph and density per `params`, without clustering. Shares one k-NN
/// search between a k-NN graph and a DTM density.
ClusterHierarchy tomato_hierarchy(const PointCloud& cloud, const TomatoParams& params);

}  // namespace automato
