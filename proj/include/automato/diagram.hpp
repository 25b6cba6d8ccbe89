#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace automato {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A point of a 0-dimensional superlevel-set persistence diagram. Components
/// are born at high density and die lower, so birth >= death; components
/// that never die have death = -inf.
struct DiagramPoint {
  double birth;
  double death;
  /// Vertex at which the component was born (its density peak).
  std::size_t peak;

  bool is_infinite() const noexcept { return death == -kInfinity; }
  /// birth - death, +inf for essential points.
  double prominence() const noexcept { return is_infinite() ? kInfinity : birth - death; }

  bool operator==(const DiagramPoint&) const = default;
};

struct PersistenceDiagram {
  std::vector<DiagramPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  std::size_t infinite_count() const noexcept;
  /// The diagram with essential points removed.
  PersistenceDiagram finite_part() const;
  /// Number of points with prominence >= tau.
  std::size_t count_significant(double tau) const noexcept;

  bool operator==(const PersistenceDiagram&) const = default;
};

/// Marks a side of a matched pair that goes to the diagonal.
inline constexpr std::size_t kDiagonal = std::numeric_limits<std::size_t>::max();

struct MatchedPair {
  std::size_t first;   ///< index into the first diagram, or kDiagonal
  std::size_t second;  ///< index into the second diagram, or kDiagonal
  double cost;
};

struct MatchingResult {
  double distance;
  std::vector<MatchedPair> matching;
};

/// L-infinity distance between two diagram points with (-inf) - (-inf) = 0.
double point_distance(const DiagramPoint& a, const DiagramPoint& b) noexcept;

/// L-infinity distance from a point to the diagonal, (birth - death) / 2.
double diagonal_distance(const DiagramPoint& p) noexcept;

/// Exact bottleneck distance with an optimal matching. With `finite_only`,
/// essential points of both diagrams are ignored. Otherwise essential points
/// are matched among themselves by birth, and a mismatch in their number
/// gives distance +inf.
///
/// Binary search over the candidate costs, with a perfect-matching
/// feasibility test on the threshold graph at each probe.
MatchingResult bottleneck_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                   bool finite_only = true);

}  // namespace automato
