#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace automato {

/// n points in d dimensions, stored row-major. Every coordinate is finite.
class PointCloud {
 public:
  PointCloud(std::size_t n_points, std::size_t dim, std::vector<double> coords);

  static PointCloud from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {coords_.data() + i * d_, d_};
  }
  double at(std::size_t i, std::size_t j) const noexcept {
    return coords_[i * d_ + j];
  }
  std::span<const double> coords() const noexcept { return coords_; }

  /// Rows at `indices`, in that order; repeated indices give repeated rows.
  PointCloud select(std::span<const std::size_t> indices) const;

  bool operator==(const PointCloud&) const = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> coords_;
};

/// Maps every column affinely onto [0, 1]. Constant columns become zero.
PointCloud min_max_scale(const PointCloud& cloud);

/// Squared Euclidean distance, summed in coordinate order.
double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Directed k-nearest-neighbour lists. Row i holds the k points closest to
/// point i (excluding i itself), ordered by (distance, index).
class NeighborTable {
 public:
  NeighborTable(std::size_t n_points, std::size_t k, std::vector<std::size_t> index,
                std::vector<double> sq_dist);

  std::size_t size() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
    return {index_.data() + i * k_, k_};
  }
  std::span<const double> squared_distances(std::size_t i) const noexcept {
    return {sq_dist_.data() + i * k_, k_};
  }

  /// The first `k` columns of this table.
  NeighborTable truncated(std::size_t k) const;

  bool operator==(const NeighborTable&) const = default;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::size_t> index_;
  std::vector<double> sq_dist_;
};

/// Exact k-NN via a kd-tree. Identical output to the brute-force search,
/// including tie order. Requires 1 <= k <= n - 1.
NeighborTable nearest_neighbors(const PointCloud& cloud, std::size_t k);

NeighborTable nearest_neighbors_brute_force(const PointCloud& cloud, std::size_t k);

enum class GraphKind { knn, rips, custom };

/// Undirected simple graph on point indices with sorted adjacency lists.
class NeighborhoodGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  /// Symmetrizes `edges`, dropping self-loops and duplicates.
  NeighborhoodGraph(std::size_t n_vertices, std::span<const Edge> edges,
                    GraphKind kind = GraphKind::custom, double parameter = 0.0);

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::span<const std::size_t> neighbors(std::size_t v) const noexcept {
    return adjacency_[v];
  }
  GraphKind kind() const noexcept { return kind_; }
  /// k for knn graphs, delta for rips graphs.
  double parameter() const noexcept { return parameter_; }

  std::size_t edge_count() const noexcept;
  /// Each edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;
  bool has_edge(std::size_t u, std::size_t v) const noexcept;

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  GraphKind kind_;
  double parameter_;
};

/// Union of the directed k-NN relation: u ~ v if either lists the other.
NeighborhoodGraph build_knn_graph(const PointCloud& cloud, std::size_t k);
NeighborhoodGraph build_knn_graph(const NeighborTable& table, std::size_t k);

/// u ~ v iff |x_u - x_v| <= delta.
NeighborhoodGraph build_rips_graph(const PointCloud& cloud, double delta);

}  // namespace automato
