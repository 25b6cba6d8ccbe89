#include "automato/tomato.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "automato/errors.hpp"

namespace automato {

void TomatoParams::validate() const {
  if (graph.kind == GraphKind::knn && graph.k < 1) {
    throw InvalidParameter("k-NN graph needs k >= 1");
  }
  if (graph.kind == GraphKind::rips && !(graph.delta > 0.0)) {
    throw InvalidParameter("rips graph needs delta > 0");
  }
  if (graph.kind == GraphKind::custom) {
    throw InvalidParameter("a custom graph cannot be built from a point cloud");
  }
  if (density.kind == DensityKind::kde && !(density.bandwidth > 0.0)) {
    throw InvalidParameter("KDE needs bandwidth > 0");
  }
  if (std::isnan(tau) || tau < 0.0) throw InvalidParameter("tau must be >= 0");
}

NeighborhoodGraph build_graph(const PointCloud& cloud, const GraphSpec& spec) {
  switch (spec.kind) {
    case GraphKind::knn:
      return build_knn_graph(cloud, spec.k);
    case GraphKind::rips:
      return build_rips_graph(cloud, spec.delta);
    case GraphKind::custom:
      break;
  }
  throw InvalidParameter("a custom graph cannot be built from a point cloud");
}

DensityEstimate estimate_density(const PointCloud& cloud, const DensitySpec& spec) {
  switch (spec.kind) {
    case DensityKind::dtm:
      return dtm_density(cloud, spec.smoothing);
    case DensityKind::log_dtm:
      return log_dtm_density(cloud, spec.smoothing);
    case DensityKind::kde:
      return kde_gaussian(cloud, spec.bandwidth);
  }
  throw InvalidParameter("unknown density kind");
}

namespace {

void check_sizes(const NeighborhoodGraph& graph, std::span<const double> density) {
  if (graph.size() != density.size()) {
    throw InvalidParameter("density has " + std::to_string(density.size()) +
                           " values for a graph on " + std::to_string(graph.size()) + " vertices");
  }
}

std::vector<std::size_t> sweep_order(std::span<const double> density) {
  std::vector<std::size_t> order(density.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t u, std::size_t v) { return sweeps_before(density, u, v); });
  return order;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // `child` becomes part of `root`'s set; both must be roots.
  void attach(std::size_t child, std::size_t root) { parent_[child] = root; }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

HillClimbForest hill_climb_forest(const NeighborhoodGraph& graph, std::span<const double> density) {
  check_sizes(graph, density);
  const std::size_t n = graph.size();
  HillClimbForest forest;
  forest.parent.resize(n);
  forest.root.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t best = v;
    for (std::size_t u : graph.neighbors(v)) {
      if (sweeps_before(density, u, best)) best = u;
    }
    forest.parent[v] = best;
  }
  // Parents sweep strictly earlier, so one pass in sweep order resolves roots.
  for (std::size_t v : sweep_order(density)) {
    if (forest.parent[v] == v) {
      forest.root[v] = v;
      forest.peaks.push_back(v);
    } else {
      forest.root[v] = forest.root[forest.parent[v]];
    }
  }
  return forest;
}

ClusterHierarchy::ClusterHierarchy(PersistenceDiagram diagram, std::vector<std::size_t> absorber,
                                   std::vector<std::size_t> vertex_point)
    : diagram_(std::move(diagram)),
      absorber_(std::move(absorber)),
      vertex_point_(std::move(vertex_point)) {
  const std::size_t m = diagram_.size();
  if (absorber_.size() != m) throw InvalidParameter("hierarchy: absorber size mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    const bool essential = diagram_.points[i].is_infinite();
    if (essential != (absorber_[i] == kDiagonal) || (!essential && absorber_[i] >= i)) {
      throw InvalidParameter("hierarchy: invalid absorber for point " + std::to_string(i));
    }
  }
  for (std::size_t p : vertex_point_) {
    if (p >= m) throw InvalidParameter("hierarchy: vertex refers to a missing diagram point");
  }
}

Clustering ClusterHierarchy::cluster(double tau) const {
  const std::size_t m = diagram_.size();
  std::vector<std::size_t> representative(m);
  Clustering out;
  std::vector<int> label_of_point(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (diagram_.points[i].prominence() >= tau) {
      representative[i] = i;
      label_of_point[i] = static_cast<int>(out.n_clusters++);
      out.peak_of_cluster.push_back(diagram_.points[i].peak);
    } else {
      representative[i] = representative[absorber_[i]];
    }
  }
  out.labels.resize(vertex_point_.size());
  for (std::size_t v = 0; v < vertex_point_.size(); ++v) {
    out.labels[v] = label_of_point[representative[vertex_point_[v]]];
  }
  return out;
}

ClusterHierarchy build_hierarchy(const NeighborhoodGraph& graph, std::span<const double> density) {
  check_sizes(graph, density);
  const std::size_t n = graph.size();
  const HillClimbForest forest = hill_climb_forest(graph, density);

  std::vector<std::size_t> point_of_peak(n, kDiagonal);
  PersistenceDiagram diagram;
  std::vector<std::size_t> absorber;

  UnionFind components(n);
  std::vector<bool> processed(n, false);
  for (std::size_t v : sweep_order(density)) {
    processed[v] = true;
    if (forest.parent[v] == v) {
      point_of_peak[v] = diagram.size();
      diagram.points.push_back({density[v], -kInfinity, v});
      absorber.push_back(kDiagonal);
      continue;
    }
    // Join the component of the hill-climbing parent, then merge every other
    // processed neighbour's component with the elder rule.
    std::size_t root = components.find(forest.parent[v]);
    components.attach(v, root);
    for (std::size_t u : graph.neighbors(v)) {
      if (!processed[u]) continue;
      const std::size_t other = components.find(u);
      if (other == root) continue;
      // Roots are peaks; the one sweeping first is the elder.
      const auto [elder, younger] =
          sweeps_before(density, root, other) ? std::pair{root, other} : std::pair{other, root};
      const std::size_t dying = point_of_peak[younger];
      diagram.points[dying].death = density[v];
      absorber[dying] = point_of_peak[elder];
      components.attach(younger, elder);
      root = elder;
    }
  }

  std::vector<std::size_t> vertex_point(n);
  for (std::size_t v = 0; v < n; ++v) vertex_point[v] = point_of_peak[forest.root[v]];
  return ClusterHierarchy(std::move(diagram), std::move(absorber), std::move(vertex_point));
}

PersistenceDiagram compute_persistence(const NeighborhoodGraph& graph,
                                       std::span<const double> density) {
  return build_hierarchy(graph, density).diagram();
}

TomatoResult tomato_cluster(const NeighborhoodGraph& graph, std::span<const double> density,
                            double tau) {
  if (std::isnan(tau) || tau < 0.0) throw InvalidParameter("tau must be >= 0");
  ClusterHierarchy hierarchy = build_hierarchy(graph, density);
  Clustering clustering = hierarchy.cluster(tau);
  return {std::move(clustering), std::move(hierarchy)};
}

ClusterHierarchy tomato_hierarchy(const PointCloud& cloud, const TomatoParams& params) {
  params.validate();
  const bool knn_graph = params.graph.kind == GraphKind::knn;
  const bool dtm_based = params.density.kind != DensityKind::kde;
  if (knn_graph && dtm_based) {
    const std::size_t k_density = params.density.smoothing.resolve(cloud.size());
    const NeighborTable table = nearest_neighbors(cloud, std::max(params.graph.k, k_density));
    const NeighborhoodGraph graph = build_knn_graph(table, params.graph.k);
    const DensityEstimate density = params.density.kind == DensityKind::dtm
                                        ? dtm_density(table, k_density)
                                        : log_dtm_density(table, k_density);
    return build_hierarchy(graph, density.values);
  }
  const NeighborhoodGraph graph = build_graph(cloud, params.graph);
  const DensityEstimate density = estimate_density(cloud, params.density);
  return build_hierarchy(graph, density.values);
}

TomatoResult tomato_cluster(const PointCloud& cloud, const TomatoParams& params) {
  ClusterHierarchy hierarchy = tomato_hierarchy(cloud, params);
  Clustering clustering = hierarchy.cluster(params.tau);
  return {std::move(clustering), std::move(hierarchy)};
}

}  // namespace automato
