#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "automato/diagram.hpp"
#include "oracles.hpp"

using namespace automato;

namespace {

PersistenceDiagram make(std::initializer_list<std::pair<double, double>> pts) {
  PersistenceDiagram d;
  std::size_t i = 0;
  for (auto [b, de] : pts) d.points.push_back({b, de, i++});
  return d;
}

std::vector<oracle::Point> as_oracle(const PersistenceDiagram& d) {
  std::vector<oracle::Point> out;
  for (const auto& p : d.points) out.push_back({p.birth, p.death});
  return out;
}

// Small quantized coordinates so that ties and coincident points occur often.
PersistenceDiagram random_diagram(std::mt19937_64& rng, std::size_t max_finite,
                                  std::size_t max_infinite) {
  std::uniform_int_distribution<int> coord(0, 12);
  const auto n_finite = std::uniform_int_distribution<std::size_t>(0, max_finite)(rng);
  const auto n_inf = std::uniform_int_distribution<std::size_t>(0, max_infinite)(rng);
  PersistenceDiagram d;
  for (std::size_t i = 0; i < n_finite; ++i) {
    double a = coord(rng) * 0.25;
    double b = coord(rng) * 0.25;
    if (a < b) std::swap(a, b);
    d.points.push_back({a, b, i});
  }
  for (std::size_t i = 0; i < n_inf; ++i) {
    d.points.push_back({coord(rng) * 0.25, -kInfinity, n_finite + i});
  }
  std::shuffle(d.points.begin(), d.points.end(), rng);
  return d;
}

double oracle_distance(const PersistenceDiagram& a, const PersistenceDiagram& b,
                       bool finite_only) {
  if (finite_only) return oracle::exhaustive_bottleneck(as_oracle(a.finite_part()), as_oracle(b.finite_part()));
  return oracle::exhaustive_bottleneck(as_oracle(a), as_oracle(b));
}

void check_matching(const PersistenceDiagram& a, const PersistenceDiagram& b, bool finite_only,
                    const MatchingResult& r) {
  std::vector<int> used_a(a.size(), 0), used_b(b.size(), 0);
  double worst = 0.0;
  for (const auto& m : r.matching) {
    REQUIRE((m.first != kDiagonal || m.second != kDiagonal));
    double cost;
    if (m.first == kDiagonal) {
      ++used_b[m.second];
      cost = diagonal_distance(b.points[m.second]);
    } else if (m.second == kDiagonal) {
      ++used_a[m.first];
      cost = diagonal_distance(a.points[m.first]);
    } else {
      ++used_a[m.first];
      ++used_b[m.second];
      cost = point_distance(a.points[m.first], b.points[m.second]);
    }
    CHECK(cost == m.cost);
    worst = std::max(worst, cost);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int expected = finite_only && a.points[i].is_infinite() ? 0 : 1;
    CHECK(used_a[i] == expected);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const int expected = finite_only && b.points[j].is_infinite() ? 0 : 1;
    CHECK(used_b[j] == expected);
  }
  CHECK(worst == r.distance);
}

}  // namespace

TEST_SUITE_BEGIN("diagram");

TEST_CASE("diagram helpers") {
  const auto d = make({{3, 1}, {5, -kInfinity}, {2, 2}});
  CHECK(d.infinite_count() == 1);
  CHECK(d.finite_part().size() == 2);
  CHECK(d.points[0].prominence() == 2.0);
  CHECK(d.points[1].prominence() == kInfinity);
  CHECK(d.count_significant(2.0) == 2);
  CHECK(d.count_significant(2.5) == 1);
  CHECK(d.count_significant(0.0) == 3);
  CHECK(diagonal_distance(d.points[0]) == 1.0);
  CHECK(diagonal_distance(d.points[1]) == kInfinity);
  CHECK(point_distance({5, -kInfinity, 0}, {7, -kInfinity, 1}) == 2.0);
  CHECK(point_distance({5, -kInfinity, 0}, {5, 1, 1}) == kInfinity);
}

TEST_CASE("bottleneck worked examples") {
  const auto d = make({{3, 1}, {4, 0}, {6, -kInfinity}});
  CHECK(bottleneck_distance(d, d).distance == 0.0);
  CHECK(bottleneck_distance(d, d, false).distance == 0.0);

  CHECK(bottleneck_distance(make({{3, 1}}), make({})).distance == 1.0);
  CHECK(bottleneck_distance(make({}), make({{3, 1}})).distance == 1.0);
  CHECK(bottleneck_distance(make({{4, 0}}), make({{4, 1}})).distance == 1.0);
  CHECK(bottleneck_distance(make({{5, -kInfinity}}), make({{7, -kInfinity}}), false).distance ==
        2.0);
  CHECK(bottleneck_distance(make({{5, -kInfinity}}), make({{7, -kInfinity}})).distance == 0.0);
  CHECK(bottleneck_distance(make({{5, -kInfinity}}), make({}), false).distance == kInfinity);
  CHECK(bottleneck_distance(make({}), make({})).distance == 0.0);
}

TEST_CASE("bottleneck matches the exhaustive oracle") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_diagram(rng, 6, 2);
    const auto b = random_diagram(rng, 6, 2);
    for (bool finite_only : {true, false}) {
      const auto r = bottleneck_distance(a, b, finite_only);
      const double want = oracle_distance(a, b, finite_only);
      if (std::isinf(want)) {
        CHECK(std::isinf(r.distance));
      } else {
        CHECK(r.distance == doctest::Approx(want).epsilon(1e-9));
        check_matching(a, b, finite_only, r);
      }
    }
  }
}

TEST_CASE("bottleneck metric axioms") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_diagram(rng, 5, 0);
    const auto b = random_diagram(rng, 5, 0);
    const auto c = random_diagram(rng, 5, 0);
    const double ab = bottleneck_distance(a, b).distance;
    CHECK(ab == bottleneck_distance(b, a).distance);
    CHECK(ab <= bottleneck_distance(a, c).distance + bottleneck_distance(c, b).distance + 1e-12);
    CHECK(bottleneck_distance(a, a).distance == 0.0);

    // Zero distance iff equal multisets of off-diagonal points.
    auto key = [](const PersistenceDiagram& d) {
      std::vector<std::pair<double, double>> v;
      for (const auto& p : d.points) {
        if (p.birth != p.death) v.emplace_back(p.birth, p.death);
      }
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK((ab == 0.0) == (key(a) == key(b)));
  }
}

TEST_CASE("bottleneck is invariant under permutation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_diagram(rng, 8, 2);
    const auto b = random_diagram(rng, 8, 2);
    auto pa = a;
    auto pb = b;
    std::shuffle(pa.points.begin(), pa.points.end(), rng);
    std::shuffle(pb.points.begin(), pb.points.end(), rng);
    for (bool finite_only : {true, false}) {
      CHECK(bottleneck_distance(a, b, finite_only).distance ==
            bottleneck_distance(pa, pb, finite_only).distance);
    }
  }
}

TEST_CASE("bottleneck value lies in the candidate set") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    PersistenceDiagram a, b;
    for (int i = 0; i < 6; ++i) {
      double x = u(rng), y = u(rng);
      a.points.push_back({std::max(x, y), std::min(x, y), 0});
      x = u(rng);
      y = u(rng);
      b.points.push_back({std::max(x, y), std::min(x, y), 0});
    }
    std::vector<double> candidates{0.0};
    for (const auto& p : a.points) candidates.push_back(diagonal_distance(p));
    for (const auto& q : b.points) candidates.push_back(diagonal_distance(q));
    for (const auto& p : a.points) {
      for (const auto& q : b.points) candidates.push_back(point_distance(p, q));
    }
    const double d = bottleneck_distance(a, b).distance;
    CHECK(std::find(candidates.begin(), candidates.end(), d) != candidates.end());
  }
}

TEST_CASE("bottleneck on larger diagrams stays consistent") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PersistenceDiagram a, b;
  for (int i = 0; i < 300; ++i) {
    const double x = u(rng), y = u(rng);
    a.points.push_back({std::max(x, y), std::min(x, y), 0});
  }
  b = a;
  for (auto& p : b.points) {
    p.birth += 0.001;
    p.death -= 0.001;
  }
  const auto r = bottleneck_distance(a, b);
  CHECK(r.distance <= 0.001 + 1e-15);
  check_matching(a, b, true, r);
}

TEST_SUITE_END();
