#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "automato/errors.hpp"
#include "automato/mapper.hpp"
#include "fixtures.hpp"

using namespace automato;

namespace {

AutomatoConfig quick_config() {
  AutomatoConfig config;
  config.b_iterations = 50;
  config.threads = 1;
  return config;
}

void check_membership(const MapperGraph& g, std::span<const double> filter,
                      const IntervalCover& cover) {
  for (std::size_t p = 0; p < filter.size(); ++p) {
    std::size_t containing = 0;
    for (const auto& iv : cover.intervals) containing += iv.contains(filter[p]) ? 1 : 0;
    std::size_t holding = 0;
    for (const auto& v : g.vertices) {
      holding += std::count(v.members.begin(), v.members.end(), p);
    }
    CHECK(containing >= 1);
    CHECK(holding == containing);
  }
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < g.vertices.size(); ++j) {
      const auto& a = g.vertices[i].members;
      const auto& b = g.vertices[j].members;
      std::vector<std::size_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      const bool edge = std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(i, j));
      CHECK(edge == !common.empty());
      if (edge) CHECK(g.vertices[i].interval != g.vertices[j].interval);
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("mapper");

TEST_CASE("build_cover") {
  SUBCASE("uniform split") {
    const std::vector<double> f{0.0, 0.3, 1.0};
    const auto c = build_cover(f, 2, 0.0);
    REQUIRE(c.intervals.size() == 2);
    CHECK(c.intervals[0].lo == 0.0);
    CHECK(c.intervals[0].hi == 0.5);
    CHECK(c.intervals[1].lo == 0.5);
    CHECK(c.intervals[1].hi == 1.0);
  }
  SUBCASE("single interval") {
    const std::vector<double> f{0.0, 1.0};
    const auto c = build_cover(f, 1, 0.7);
    REQUIRE(c.intervals.size() == 1);
    CHECK(c.intervals[0].lo == 0.0);
    CHECK(c.intervals[0].hi == 1.0);
  }
  SUBCASE("half overlap") {
    const std::vector<double> f{3.0, 0.0, 1.0};
    const auto c = build_cover(f, 3, 0.5);
    REQUIRE(c.intervals.size() == 3);
    CHECK(c.intervals[0].lo == 0.0);
    CHECK(c.intervals[1].lo == 0.75);
    CHECK(c.intervals[2].lo == 1.5);
    for (const auto& iv : c.intervals) CHECK(iv.hi - iv.lo == doctest::Approx(1.5));
    CHECK(c.intervals[2].hi == 3.0);
  }
  SUBCASE("constant filter") {
    const std::vector<double> f{2.0, 2.0};
    const auto c = build_cover(f, 5, 0.3);
    REQUIRE(c.intervals.size() == 1);
    CHECK(c.intervals[0].contains(2.0));
  }
  SUBCASE("overlap fraction and coverage on random filters") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> f(20);
      for (auto& x : f) x = u(rng);
      const auto n = std::uniform_int_distribution<std::size_t>(1, 20)(rng);
      const double g = std::uniform_real_distribution<double>(0.0, 0.9)(rng);
      const auto c = build_cover(f, n, g);
      REQUIRE(c.intervals.size() == n);
      const double len = c.intervals[0].hi - c.intervals[0].lo;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const double overlap = c.intervals[i].hi - c.intervals[i + 1].lo;
        CHECK(overlap == doctest::Approx(g * len).epsilon(1e-9).scale(10.0));
      }
      for (double x : f) {
        CHECK(std::any_of(c.intervals.begin(), c.intervals.end(),
                          [&](const Interval& iv) { return iv.contains(x); }));
      }
    }
  }
  const std::vector<double> f{0.0, 1.0};
  CHECK_THROWS_AS(build_cover(f, 0, 0.1), InvalidParameter);
  CHECK_THROWS_AS(build_cover(f, 3, 1.0), InvalidParameter);
  CHECK_THROWS_AS(build_cover(f, 3, -0.1), InvalidParameter);
  CHECK_THROWS_AS(build_cover(std::vector<double>{}, 3, 0.1), InvalidParameter);
}

TEST_CASE("trivial clusterer on a chain gives a path") {
  std::vector<double> xs;
  for (int i = 0; i <= 100; ++i) xs.push_back(i * 0.01);
  const PointCloud cloud(xs.size(), 1, xs);
  const auto cover = build_cover(xs, 8, 0.25);
  const auto g = mapper_graph(cloud, xs, cover, single_cluster_clusterer());
  CHECK(g.vertices.size() == 8);
  CHECK(g.edges.size() == 7);
  for (std::size_t i = 0; i + 1 < 8; ++i) CHECK(g.edges[i] == std::make_pair(i, i + 1));
  CHECK(g.component_count() == 1);
  CHECK(g.cycle_rank() == 0);
  check_membership(g, xs, cover);
}

TEST_CASE("separated blobs give disjoint vertices") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({0.01 * i, 0.0});
  for (int i = 0; i < 10; ++i) rows.push_back({5.0 + 0.01 * i, 0.0});
  const auto cloud = PointCloud::from_rows(rows);
  const auto filter = fixtures::column(cloud, 0);
  const auto cover = build_cover(filter, 2, 0.0);
  const auto g = mapper_graph(cloud, filter, cover, single_cluster_clusterer());
  CHECK(g.vertices.size() == 2);
  CHECK(g.edges.empty());
  CHECK(g.isolated_vertex_count() == 2);
  CHECK(g.component_count() == 2);
}

TEST_CASE("empty preimages are skipped and clusterer errors carry context") {
  const auto cloud = PointCloud::from_rows({{0.0}, {0.1}, {10.0}});
  const auto filter = fixtures::column(cloud, 0);
  const auto cover = build_cover(filter, 5, 0.0);
  const auto g = mapper_graph(cloud, filter, cover, single_cluster_clusterer());
  CHECK(g.vertices.size() == 2);

  MapperClusterer broken = [](const PointCloud&, std::size_t interval) -> std::vector<int> {
    if (interval == 4) throw DegenerateDensity("boom");
    return {0, 0};
  };
  try {
    mapper_graph(cloud, filter, cover, broken);
    FAIL("expected an exception");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("interval 4") != std::string::npos);
  }
  CHECK_THROWS_AS(mapper_graph(cloud, std::vector<double>{0.0}, cover, broken), InvalidParameter);
}

TEST_CASE("AuToMATo on a single dense blob gives a tree") {
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const auto blobs = fixtures::three_blobs(seed, 400, 0.05);
    std::vector<std::size_t> first(400);
    for (std::size_t i = 0; i < first.size(); ++i) first[i] = i;
    const auto cloud = blobs.points.select(first);
    const auto filter = fixtures::column(cloud, 0);
    const auto cover = build_cover(filter, 4, 0.3);
    AutomatoConfig config = quick_config();
    config.b_iterations = 200;
    const auto g = mapper_graph(cloud, filter, cover, automato_mapper_clusterer(config, seed));
    CHECK(g.cycle_rank() == 0);
    CHECK(g.component_count() == 1);
    check_membership(g, filter, cover);
  }
}

TEST_CASE("AuToMATo clusterer is reproducible and handles tiny preimages") {
  const auto circles = fixtures::concentric_circles(1, 120);
  const auto filter = fixtures::column(circles.points, 0);
  const auto cover = build_cover(filter, 15, 0.3);
  const auto a = mapper_graph(circles.points, filter, cover,
                              automato_mapper_clusterer(quick_config(), 9));
  const auto b = mapper_graph(circles.points, filter, cover,
                              automato_mapper_clusterer(quick_config(), 9));
  CHECK(a.to_json() == b.to_json());
  check_membership(a, filter, cover);

  const auto one = automato_mapper_clusterer(quick_config(), 0)(PointCloud::from_rows({{1.0}}), 0);
  CHECK(one == std::vector<int>{0});
  const auto two =
      automato_mapper_clusterer(quick_config(), 0)(PointCloud::from_rows({{1.0}, {2.0}}), 0);
  CHECK(two == std::vector<int>{0, 0});
  AutomatoConfig k1 = quick_config();
  k1.seed = 0;
  k1.b_iterations = 5;
  k1.tomato.graph = GraphSpec::knn(1);
  k1.tomato.density = DensitySpec::log_dtm(Smoothing::neighbors(1));
  CHECK(fit(PointCloud::from_rows({{1.0}, {2.0}}), k1).labels() == two);
  const auto three = automato_mapper_clusterer(quick_config(), 0)(
      PointCloud::from_rows({{1.0}, {2.0}, {4.0}}), 0);
  CHECK(three.size() == 3);
}

TEST_CASE("graph export") {
  MapperGraph g;
  g.vertices = {{0, 0, 0, {0, 1}}, {1, 1, 0, {1, 2}}, {2, 1, 1, {3}}};
  g.edges = {{0, 1}};
  CHECK(g.component_count() == 2);
  CHECK(g.cycle_rank() == 0);
  CHECK(g.isolated_vertex_count() == 1);
  const auto j = g.to_json();
  CHECK(j["vertices"].size() == 3);
  CHECK(j["vertices"][1]["id"] == 1);
  CHECK(j["vertices"][1]["interval"] == 1);
  CHECK(j["vertices"][1]["size"] == 2);
  CHECK(j["vertices"][1]["members"] == nlohmann::json::array({1, 2}));
  CHECK(j["edges"] == nlohmann::json::array({nlohmann::json::array({0, 1})}));
  const auto dot = g.to_dot();
  CHECK(dot.rfind("graph", 0) == 0);
  CHECK(dot.find("0 -- 1") != std::string::npos);
}

TEST_SUITE_END();
