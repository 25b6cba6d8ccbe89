#include "automato/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "automato/errors.hpp"

namespace automato {

IntervalCover build_cover(std::span<const double> filter_values, std::size_t n_intervals,
                          double overlap_fraction) {
  if (n_intervals < 1) throw InvalidParameter("cover needs at least one interval");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw InvalidParameter("overlap fraction must lie in [0, 1)");
  }
  if (filter_values.empty()) throw InvalidParameter("cover of an empty filter");
  for (double f : filter_values) {
    if (!std::isfinite(f)) throw InvalidParameter("filter values must be finite");
  }
  const auto [lo_it, hi_it] = std::minmax_element(filter_values.begin(), filter_values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  IntervalCover cover;
  cover.overlap_fraction = overlap_fraction;
  if (n_intervals == 1 || lo == hi) {
    cover.intervals.push_back({lo, hi});
    return cover;
  }
  const double step_fraction = 1.0 - overlap_fraction;
  const double length =
      (hi - lo) / (1.0 + static_cast<double>(n_intervals - 1) * step_fraction);
  for (std::size_t i = 0; i < n_intervals; ++i) {
    const double start = lo + static_cast<double>(i) * length * step_fraction;
    cover.intervals.push_back({start, start + length});
  }
  cover.intervals.front().lo = lo;
  cover.intervals.back().hi = hi;
  return cover;
}

MapperGraph mapper_graph(const PointCloud& cloud, std::span<const double> filter_values,
                         const IntervalCover& cover, const MapperClusterer& clusterer) {
  if (filter_values.size() != cloud.size()) {
    throw InvalidParameter("filter has " + std::to_string(filter_values.size()) +
                           " values for " + std::to_string(cloud.size()) + " points");
  }
  MapperGraph graph;
  std::vector<std::vector<std::size_t>> vertices_of_point(cloud.size());

  for (std::size_t iv = 0; iv < cover.intervals.size(); ++iv) {
    std::vector<std::size_t> preimage;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
      if (cover.intervals[iv].contains(filter_values[p])) preimage.push_back(p);
    }
    if (preimage.empty()) continue;

    std::vector<int> labels;
    try {
      labels = clusterer(cloud.select(preimage), iv);
    } catch (const std::exception& e) {
      throw std::runtime_error("mapper: clustering interval " + std::to_string(iv) + " (" +
                               std::to_string(preimage.size()) + " points) failed: " + e.what());
    }
    if (labels.size() != preimage.size()) {
      throw std::runtime_error("mapper: clusterer returned the wrong number of labels");
    }
    std::vector<int> distinct;
    for (int l : labels) {
      if (l >= 0) distinct.push_back(l);
    }
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t first_id = graph.vertices.size();
    for (int l : distinct) {
      graph.vertices.push_back({graph.vertices.size(), iv, l, {}});
    }
    for (std::size_t r = 0; r < preimage.size(); ++r) {
      if (labels[r] < 0) continue;
      const auto pos = std::lower_bound(distinct.begin(), distinct.end(), labels[r]) - distinct.begin();
      auto& vertex = graph.vertices[first_id + static_cast<std::size_t>(pos)];
      vertex.members.push_back(preimage[r]);
      vertices_of_point[preimage[r]].push_back(vertex.id);
    }
  }

  for (const auto& ids : vertices_of_point) {
    for (std::size_t a = 0; a < ids.size(); ++a) {
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        graph.edges.emplace_back(std::min(ids[a], ids[b]), std::max(ids[a], ids[b]));
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
  return graph;
}

std::size_t MapperGraph::component_count() const {
  std::vector<std::size_t> parent(vertices.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = vertices.size();
  for (const auto& [u, v] : edges) {
    const std::size_t ru = find(u);
    const std::size_t rv = find(v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components;
}

long MapperGraph::cycle_rank() const {
  return static_cast<long>(edges.size()) - static_cast<long>(vertices.size()) +
         static_cast<long>(component_count());
}

std::size_t MapperGraph::isolated_vertex_count() const {
  std::vector<bool> touched(vertices.size(), false);
  for (const auto& [u, v] : edges) touched[u] = touched[v] = true;
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), false));
}

nlohmann::json MapperGraph::to_json() const {
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : vertices) {
    vs.push_back({{"id", v.id},
                  {"interval", v.interval},
                  {"size", v.members.size()},
                  {"members", v.members}});
  }
  nlohmann::json es = nlohmann::json::array();
  for (const auto& [a, b] : edges) es.push_back({a, b});
  return {{"vertices", vs}, {"edges", es}};
}

std::string MapperGraph::to_dot() const {
  std::ostringstream out;
  out << "graph mapper {\n";
  for (const auto& v : vertices) {
    out << "  " << v.id << " [label=\"" << v.interval << ":" << v.cluster << " ("
        << v.members.size() << ")\"];\n";
  }
  for (const auto& [a, b] : edges) out << "  " << a << " -- " << b << ";\n";
  out << "}\n";
  return out.str();
}

MapperClusterer automato_mapper_clusterer(AutomatoConfig config, std::uint64_t seed) {
  return [config, seed](const PointCloud& preimage, std::size_t interval) {
    const std::size_t n = preimage.size();
    // One or two points always form a single cluster.
    if (n <= 2) return std::vector<int>(n, 0);
    AutomatoConfig local = config;
    local.seed = seed + interval;
    auto& g = local.tomato.graph;
    if (g.kind == GraphKind::knn) g.k = std::min(g.k, n - 1);
    auto& d = local.tomato.density;
    if (d.kind != DensityKind::kde && !d.smoothing.is_mass()) {
      d.smoothing = Smoothing::neighbors(std::min<std::size_t>(
          static_cast<std::size_t>(d.smoothing.value()), n - 1));
    }
    return fit(preimage, local).labels();
  };
}

MapperClusterer single_cluster_clusterer() {
  return [](const PointCloud& preimage, std::size_t) {
    return std::vector<int>(preimage.size(), 0);
  };
}

}  // namespace automato
