#pragma once
// Brute-force reference implementations used only by the tests. None of them
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point {
  double birth;
  double death;  // -inf for essential points
};

/// Superlevel-set component tracker: for every distinct density value t in
/// decreasing order, builds {v : f(v) >= t} from scratch, finds its connected
/// components by BFS and identifies each component by its highest vertex.
/// Requires distinct densities. Returns (birth, death, peak) sorted.
struct PeakPoint {
  double birth;
  double death;
  std::size_t peak;
  bool operator<(const PeakPoint& o) const {
    return std::tie(birth, death, peak) < std::tie(o.birth, o.death, o.peak);
  }
  bool operator==(const PeakPoint& o) const {
    return birth == o.birth && death == o.death && peak == o.peak;
  }
};

inline std::vector<PeakPoint> superlevel_persistence(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
    const std::vector<double>& f) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<double> levels(f.begin(), f.end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::map<std::size_t, double> alive;  // peak -> birth
  std::vector<PeakPoint> out;
  for (double t : levels) {
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> comp_peak;
    for (std::size_t s = 0; s < n; ++s) {
      if (f[s] < t || comp[s] >= 0) continue;
      const int id = static_cast<int>(comp_peak.size());
      std::size_t best = s;
      std::vector<std::size_t> stack{s};
      comp[s] = id;
      while (!stack.empty()) {
        const std::size_t x = stack.back();
        stack.pop_back();
        if (f[x] > f[best]) best = x;
        for (std::size_t y : adj[x]) {
          if (f[y] >= t && comp[y] < 0) {
            comp[y] = id;
            stack.push_back(y);
          }
        }
      }
      comp_peak.push_back(best);
    }
    // Alive peaks that are no longer the maximum of their component die now.
    for (auto it = alive.begin(); it != alive.end();) {
      const std::size_t p = it->first;
      if (comp_peak[static_cast<std::size_t>(comp[p])] != p) {
        out.push_back({it->second, t, p});
        it = alive.erase(it);
      } else {
        ++it;
      }
    }
    for (std::size_t c = 0; c < comp_peak.size(); ++c) {
      if (!alive.count(comp_peak[c])) alive[comp_peak[c]] = f[comp_peak[c]];
    }
  }
  for (const auto& [p, b] : alive) out.push_back({b, -kInf, p});
  std::sort(out.begin(), out.end());
  return out;
}

inline double gap(double x, double y) { return x == y ? 0.0 : std::abs(x - y); }

inline double linf(const Point& a, const Point& b) {
  return std::max(gap(a.birth, b.birth), gap(a.death, b.death));
}

inline double to_diagonal(const Point& p) {
  return p.death == -kInf ? kInf : (p.birth - p.death) / 2.0;
}

/// Minimum over all partial injections A -> B (unmatched points go to the
/// diagonal) of the maximum matched cost.
inline double exhaustive_bottleneck(const std::vector<Point>& a, const std::vector<Point>& b) {
  double best = kInf;
  std::vector<bool> used(b.size(), false);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double cur) {
    if (cur > best) return;
    if (i == a.size()) {
      double total = cur;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (!used[j]) total = std::max(total, to_diagonal(b[j]));
      }
      best = std::min(best, total);
      return;
    }
    rec(i + 1, std::max(cur, to_diagonal(a[i])));
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      rec(i + 1, std::max(cur, linf(a[i], b[j])));
      used[j] = false;
    }
  };
  rec(0, 0.0);
  // With every point infinite on one side and nothing to match, the search
  // above still visits the all-diagonal assignment, so `best` is set.
  return best;
}

/// Fowlkes-Mallows by enumerating all O(n^2) pairs after masking pred == -1.
inline double pair_counting_fm(const std::vector<int>& pred, const std::vector<int>& truth) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] != -1) keep.push_back(i);
  }
  double tp = 0, same_truth_only = 0, same_pred_only = 0;
  for (std::size_t x = 0; x < keep.size(); ++x) {
    for (std::size_t y = x + 1; y < keep.size(); ++y) {
      const bool c = pred[keep[x]] == pred[keep[y]];
      const bool g = truth[keep[x]] == truth[keep[y]];
      if (c && g) tp += 1;
      if (g && !c) same_truth_only += 1;
      if (c && !g) same_pred_only += 1;
    }
  }
  if (tp == 0) return 0.0;
  return std::sqrt(tp / (tp + same_truth_only)) * std::sqrt(tp / (tp + same_pred_only));
}

}  // namespace oracle
