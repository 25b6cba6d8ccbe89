#include "automato/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace automato {

std::size_t PersistenceDiagram::infinite_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const auto& p) { return p.is_infinite(); }));
}

PersistenceDiagram PersistenceDiagram::finite_part() const {
  PersistenceDiagram out;
  for (const auto& p : points) {
    if (!p.is_infinite()) out.points.push_back(p);
  }
  return out;
}

std::size_t PersistenceDiagram::count_significant(double tau) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      points.begin(), points.end(), [tau](const auto& p) { return p.prominence() >= tau; }));
}

namespace {

double coordinate_gap(double x, double y) noexcept {
  if (x == y) return 0.0;  // also covers equal infinities
  return std::abs(x - y);
}

// Hopcroft-Karp on a dense bipartite graph given as an adjacency predicate.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(std::size_t size)
      : n_(size), adj_(size), match_left_(size), match_right_(size), layer_(size) {}

  std::vector<std::size_t>& adjacency(std::size_t u) { return adj_[u]; }

  std::size_t solve() {
    std::fill(match_left_.begin(), match_left_.end(), kNone);
    std::fill(match_right_.begin(), match_right_.end(), kNone);
    std::size_t matched = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < n_; ++u) {
        if (match_left_[u] == kNone && dfs(u)) ++matched;
      }
    }
    return matched;
  }

  std::size_t partner(std::size_t u) const noexcept { return match_left_[u]; }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  bool bfs() {
    std::queue<std::size_t> frontier;
    bool reachable_free = false;
    for (std::size_t u = 0; u < n_; ++u) {
      if (match_left_[u] == kNone) {
        layer_[u] = 0;
        frontier.push(u);
      } else {
        layer_[u] = kNone;
      }
    }
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      for (std::size_t v : adj_[u]) {
        const std::size_t w = match_right_[v];
        if (w == kNone) {
          reachable_free = true;
        } else if (layer_[w] == kNone) {
          layer_[w] = layer_[u] + 1;
          frontier.push(w);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(std::size_t u) {
    for (std::size_t v : adj_[u]) {
      const std::size_t w = match_right_[v];
      if (w == kNone || (layer_[w] == layer_[u] + 1 && dfs(w))) {
        match_left_[u] = v;
        match_right_[v] = u;
        return true;
      }
    }
    layer_[u] = kNone;
    return false;
  }

  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> match_left_;
  std::vector<std::size_t> match_right_;
  std::vector<std::size_t> layer_;
};

// Bottleneck matching of two finite diagrams. Left vertices are the points of
// `a` followed by diagonal copies of the points of `b`; right vertices are the
// points of `b` followed by diagonal copies of the points of `a`.
MatchingResult match_finite(const std::vector<DiagramPoint>& a, const std::vector<std::size_t>& a_ids,
                            const std::vector<DiagramPoint>& b, const std::vector<std::size_t>& b_ids) {
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t size = na + nb;
  if (size == 0) return {0.0, {}};

  std::vector<double> cross(na * nb);
  std::vector<double> candidates;
  candidates.reserve(na * nb + na + nb + 1);
  candidates.push_back(0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      cross[i * nb + j] = point_distance(a[i], b[j]);
      candidates.push_back(cross[i * nb + j]);
    }
  }
  for (const auto& p : a) candidates.push_back(diagonal_distance(p));
  for (const auto& p : b) candidates.push_back(diagonal_distance(p));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  auto build = [&](double r, BipartiteMatcher& m) {
    for (std::size_t i = 0; i < na; ++i) {
      auto& adj = m.adjacency(i);
      adj.clear();
      for (std::size_t j = 0; j < nb; ++j) {
        if (cross[i * nb + j] <= r) adj.push_back(j);
      }
      if (diagonal_distance(a[i]) <= r) adj.push_back(nb + i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
      auto& adj = m.adjacency(na + j);
      adj.clear();
      if (diagonal_distance(b[j]) <= r) adj.push_back(j);
      for (std::size_t i = 0; i < na; ++i) adj.push_back(nb + i);
    }
  };

  BipartiteMatcher matcher(size);
  // Matching every point to the diagonal is always feasible at the largest
  // candidate, so the search space is never empty.
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    build(candidates[mid], matcher);
    if (matcher.solve() == size) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  const double r = candidates[lo];
  build(r, matcher);
  matcher.solve();

  MatchingResult result{0.0, {}};
  for (std::size_t i = 0; i < na; ++i) {
    const std::size_t v = matcher.partner(i);
    if (v < nb) {
      result.matching.push_back({a_ids[i], b_ids[v], cross[i * nb + v]});
    } else {
      result.matching.push_back({a_ids[i], kDiagonal, diagonal_distance(a[i])});
    }
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (matcher.partner(na + j) == j) {
      result.matching.push_back({kDiagonal, b_ids[j], diagonal_distance(b[j])});
    }
  }
  for (const auto& m : result.matching) result.distance = std::max(result.distance, m.cost);
  return result;
}

}  // namespace

double point_distance(const DiagramPoint& a, const DiagramPoint& b) noexcept {
  return std::max(coordinate_gap(a.birth, b.birth), coordinate_gap(a.death, b.death));
}

double diagonal_distance(const DiagramPoint& p) noexcept {
  return p.is_infinite() ? kInfinity : (p.birth - p.death) / 2.0;
}

MatchingResult bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                   bool finite_only) {
  std::vector<DiagramPoint> fa, fb;
  std::vector<std::size_t> fa_ids, fb_ids;
  std::vector<std::size_t> ia, ib;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.points[i].is_infinite()) {
      ia.push_back(i);
    } else {
      fa.push_back(a.points[i]);
      fa_ids.push_back(i);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b.points[j].is_infinite()) {
      ib.push_back(j);
    } else {
      fb.push_back(b.points[j]);
      fb_ids.push_back(j);
    }
  }

  MatchingResult result = match_finite(fa, fa_ids, fb, fb_ids);
  if (finite_only) return result;

  // Essential points can only meet each other; sorted-order pairing is an
  // optimal bottleneck matching on the line.
  auto by_birth = [](const PersistenceDiagram& d) {
    return [&d](std::size_t x, std::size_t y) {
      return d.points[x].birth < d.points[y].birth ||
             (d.points[x].birth == d.points[y].birth && x < y);
    };
  };
  std::sort(ia.begin(), ia.end(), by_birth(a));
  std::sort(ib.begin(), ib.end(), by_birth(b));
  const std::size_t common = std::min(ia.size(), ib.size());
  for (std::size_t r = 0; r < common; ++r) {
    const double cost = point_distance(a.points[ia[r]], b.points[ib[r]]);
    result.matching.push_back({ia[r], ib[r], cost});
    result.distance = std::max(result.distance, cost);
  }
  for (std::size_t r = common; r < ia.size(); ++r) {
    result.matching.push_back({ia[r], kDiagonal, kInfinity});
    result.distance = kInfinity;
  }
  for (std::size_t r = common; r < ib.size(); ++r) {
    result.matching.push_back({kDiagonal, ib[r], kInfinity});
    result.distance = kInfinity;
  }
  return result;
}

}  // namespace automato
