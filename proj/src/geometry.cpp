#include "automato/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "automato/errors.hpp"

namespace automato {

PointCloud::PointCloud(std::size_t n_points, std::size_t dim, std::vector<double> coords)
    : n_(n_points), d_(dim), coords_(std::move(coords)) {
  if (n_ == 0 || d_ == 0) {
    throw InvalidParameter("point cloud needs n >= 1 and d >= 1");
  }
  if (coords_.size() != n_ * d_) {
    throw InvalidParameter("point cloud: expected " + std::to_string(n_ * d_) +
                           " coordinates, got " + std::to_string(coords_.size()));
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw InvalidParameter("point cloud: non-finite coordinate in row " +
                             std::to_string(i / d_));
    }
  }
}

PointCloud PointCloud::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidParameter("point cloud: no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw InvalidParameter("point cloud: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " columns, expected " +
                             std::to_string(d));
    }
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointCloud(rows.size(), d, std::move(coords));
}

PointCloud PointCloud::select(std::span<const std::size_t> indices) const {
  std::vector<double> coords;
  coords.reserve(indices.size() * d_);
  for (std::size_t i : indices) {
    if (i >= n_) throw InvalidParameter("point cloud: selected index out of range");
    auto r = row(i);
    coords.insert(coords.end(), r.begin(), r.end());
  }
  return PointCloud(indices.size(), d_, std::move(coords));
}

PointCloud min_max_scale(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  const std::size_t d = cloud.dim();
  std::vector<double> out(cloud.coords().begin(), cloud.coords().end());
  for (std::size_t j = 0; j < d; ++j) {
    double lo = cloud.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, cloud.at(i, j));
      hi = std::max(hi, cloud.at(i, j));
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
      out[i * d + j] = range > 0.0 ? (cloud.at(i, j) - lo) / range : 0.0;
    }
  }
  return PointCloud(n, d, std::move(out));
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

NeighborTable::NeighborTable(std::size_t n_points, std::size_t k, std::vector<std::size_t> index,
                             std::vector<double> sq_dist)
    : n_(n_points), k_(k), index_(std::move(index)), sq_dist_(std::move(sq_dist)) {
  if (index_.size() != n_ * k_ || sq_dist_.size() != n_ * k_) {
    throw InvalidParameter("neighbor table: size mismatch");
  }
}

NeighborTable NeighborTable::truncated(std::size_t k) const {
  if (k > k_) throw InvalidParameter("neighbor table: cannot widen a table");
  std::vector<std::size_t> idx;
  std::vector<double> sq;
  idx.reserve(n_ * k);
  sq.reserve(n_ * k);
  for (std::size_t i = 0; i < n_; ++i) {
    auto ni = neighbors(i);
    auto di = squared_distances(i);
    idx.insert(idx.end(), ni.begin(), ni.begin() + static_cast<std::ptrdiff_t>(k));
    sq.insert(sq.end(), di.begin(), di.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return NeighborTable(n_, k, std::move(idx), std::move(sq));
}

namespace {

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

void check_k(const PointCloud& cloud, std::size_t k) {
  if (k < 1 || k >= cloud.size()) {
    throw InvalidParameter("k-NN: k = " + std::to_string(k) + " must satisfy 1 <= k <= n - 1 (n = " +
                           std::to_string(cloud.size()) + ")");
  }
}

// Fixed-capacity sorted list of the best candidates seen so far.
class BestK {
 public:
  explicit BestK(std::size_t k) : k_(k) { items_.reserve(k + 1); }

  bool full() const noexcept { return items_.size() == k_; }
  double worst() const noexcept { return items_.back().first; }

  void offer(Candidate c) {
    if (full() && !(c < items_.back())) return;
    auto pos = std::upper_bound(items_.begin(), items_.end(), c);
    items_.insert(pos, c);
    if (items_.size() > k_) items_.pop_back();
  }

  const std::vector<Candidate>& items() const noexcept { return items_; }

 private:
  std::size_t k_;
  std::vector<Candidate> items_;
};

class KdTree {
 public:
  explicit KdTree(const PointCloud& cloud) : cloud_(cloud), perm_(cloud.size()) {
    for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = i;
    nodes_.reserve(2 * cloud.size() / kLeafSize + 2);
    build(0, perm_.size());
  }

  void query(std::size_t self, BestK& best) const { visit(0, self, best); }

 private:
  static constexpr std::size_t kLeafSize = 8;

  struct Node {
    std::size_t begin;
    std::size_t end;
    std::size_t left = 0;  // 0 means leaf; the root is never a child
    std::size_t right = 0;
    std::vector<double> lo;
    std::vector<double> hi;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t d = cloud_.dim();
    Node node{begin, end, 0, 0, std::vector<double>(d), std::vector<double>(d)};
    for (std::size_t j = 0; j < d; ++j) {
      node.lo[j] = node.hi[j] = cloud_.at(perm_[begin], j);
    }
    for (std::size_t p = begin + 1; p < end; ++p) {
      for (std::size_t j = 0; j < d; ++j) {
        const double x = cloud_.at(perm_[p], j);
        node.lo[j] = std::min(node.lo[j], x);
        node.hi[j] = std::max(node.hi[j], x);
      }
    }
    std::size_t split_dim = 0;
    for (std::size_t j = 1; j < d; ++j) {
      if (node.hi[j] - node.lo[j] > node.hi[split_dim] - node.lo[split_dim]) split_dim = j;
    }
    const bool leaf = end - begin <= kLeafSize || node.hi[split_dim] == node.lo[split_dim];
    const std::size_t id = nodes_.size();
    nodes_.push_back(std::move(node));
    if (leaf) return id;

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                     perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                     perm_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       return cloud_.at(a, split_dim) < cloud_.at(b, split_dim);
                     });
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  // Lower bound on the squared distance from q to any point in the node's box.
  // Summed in coordinate order with zero terms for covered coordinates, so it
  // never exceeds squared_distance() to a contained point, even after rounding.
  double box_bound(const Node& node, std::span<const double> q) const noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      double diff = 0.0;
      if (q[j] < node.lo[j]) {
        diff = q[j] - node.lo[j];
      } else if (q[j] > node.hi[j]) {
        diff = q[j] - node.hi[j];
      }
      s += diff * diff;
    }
    return s;
  }

  void visit(std::size_t id, std::size_t self, BestK& best) const {
    const Node& node = nodes_[id];
    const auto q = cloud_.row(self);
    if (node.left == 0) {
      for (std::size_t p = node.begin; p < node.end; ++p) {
        const std::size_t j = perm_[p];
        if (j == self) continue;
        best.offer({squared_distance(q, cloud_.row(j)), j});
      }
      return;
    }
    const double bl = box_bound(nodes_[node.left], q);
    const double br = box_bound(nodes_[node.right], q);
    const auto [first, first_bound, second, second_bound] =
        bl <= br ? std::tuple{node.left, bl, node.right, br}
                 : std::tuple{node.right, br, node.left, bl};
    // Equal bounds must still be visited: a tie may carry a smaller index.
    if (!best.full() || first_bound <= best.worst()) visit(first, self, best);
    if (!best.full() || second_bound <= best.worst()) visit(second, self, best);
  }

  const PointCloud& cloud_;
  std::vector<std::size_t> perm_;
  std::vector<Node> nodes_;
};

NeighborTable pack(std::size_t n, std::size_t k, const std::vector<std::vector<Candidate>>& rows) {
  std::vector<std::size_t> idx;
  std::vector<double> sq;
  idx.reserve(n * k);
  sq.reserve(n * k);
  for (const auto& row : rows) {
    for (const auto& [d, j] : row) {
      sq.push_back(d);
      idx.push_back(j);
    }
  }
  return NeighborTable(n, k, std::move(idx), std::move(sq));
}

}  // namespace

NeighborTable nearest_neighbors(const PointCloud& cloud, std::size_t k) {
  check_k(cloud, k);
  const KdTree tree(cloud);
  std::vector<std::vector<Candidate>> rows(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    BestK best(k);
    tree.query(i, best);
    rows[i] = best.items();
  }
  return pack(cloud.size(), k, rows);
}

NeighborTable nearest_neighbors_brute_force(const PointCloud& cloud, std::size_t k) {
  check_k(cloud, k);
  const std::size_t n = cloud.size();
  std::vector<std::vector<Candidate>> rows(n);
  std::vector<Candidate> all;
  all.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    all.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) all.emplace_back(squared_distance(cloud.row(i), cloud.row(j)), j);
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    rows[i].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return pack(n, k, rows);
}

NeighborhoodGraph::NeighborhoodGraph(std::size_t n_vertices, std::span<const Edge> edges,
                                     GraphKind kind, double parameter)
    : adjacency_(n_vertices), kind_(kind), parameter_(parameter) {
  for (const auto& [u, v] : edges) {
    if (u >= n_vertices || v >= n_vertices) {
      throw InvalidParameter("graph: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                             ") out of range");
    }
    if (u == v) continue;
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

std::size_t NeighborhoodGraph::edge_count() const noexcept {
  std::size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

std::vector<NeighborhoodGraph::Edge> NeighborhoodGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (std::size_t v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool NeighborhoodGraph::has_edge(std::size_t u, std::size_t v) const noexcept {
  if (u >= adjacency_.size()) return false;
  return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

NeighborhoodGraph build_knn_graph(const NeighborTable& table, std::size_t k) {
  if (k < 1 || k > table.k()) {
    throw InvalidParameter("k-NN graph: k exceeds the neighbor table width");
  }
  std::vector<NeighborhoodGraph::Edge> edges;
  edges.reserve(table.size() * k);
  for (std::size_t i = 0; i < table.size(); ++i) {
    auto nb = table.neighbors(i);
    for (std::size_t r = 0; r < k; ++r) edges.emplace_back(i, nb[r]);
  }
  return NeighborhoodGraph(table.size(), edges, GraphKind::knn, static_cast<double>(k));
}

NeighborhoodGraph build_knn_graph(const PointCloud& cloud, std::size_t k) {
  return build_knn_graph(nearest_neighbors(cloud, k), k);
}

NeighborhoodGraph build_rips_graph(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0)) throw InvalidParameter("rips graph: delta must be positive");
  std::vector<NeighborhoodGraph::Edge> edges;
  for (std::size_t u = 0; u < cloud.size(); ++u) {
    for (std::size_t v = u + 1; v < cloud.size(); ++v) {
      if (std::sqrt(squared_distance(cloud.row(u), cloud.row(v))) <= delta) {
        edges.emplace_back(u, v);
      }
    }
  }
  return NeighborhoodGraph(cloud.size(), edges, GraphKind::rips, delta);
}

}  // namespace automato
