#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "automato/geometry.hpp"

namespace fixtures {

struct Labelled {
  automato::PointCloud points;
  std::vector<int> labels;
};

/// Three isotropic Gaussian blobs, 100 points each, sigma 0.05, centres at
/// least 0.6 apart.
inline Labelled three_blobs(std::uint64_t seed, std::size_t per_blob = 100, double sigma = 0.05) {
  const double centres[3][2] = {{0.2, 0.2}, {0.8, 0.2}, {0.5, 0.8}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> coords;
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      coords.push_back(centres[c][0] + noise(rng));
      coords.push_back(centres[c][1] + noise(rng));
      labels.push_back(c);
    }
  }
  return {automato::PointCloud(labels.size(), 2, std::move(coords)), std::move(labels)};
}

/// Two concentric noisy circles with radii 1 and 2, half the points on each,
/// Gaussian noise of 0.05 * outer radius per coordinate. Angles are evenly
/// spaced unless `even` is false.
inline Labelled concentric_circles(std::uint64_t seed, std::size_t n = 400, bool even = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const std::size_t outer = n / 2;
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> coords;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int circle = i < n / 2 ? 0 : 1;
    const double r = circle == 0 ? 2.0 : 1.0;
    const std::size_t on_circle = circle == 0 ? outer : n - outer;
    const std::size_t pos = circle == 0 ? i : i - outer;
    const double t = even ? 2.0 * std::numbers::pi * static_cast<double>(pos) /
                                static_cast<double>(on_circle)
                          : angle(rng);
    coords.push_back(r * std::cos(t) + noise(rng));
    coords.push_back(r * std::sin(t) + noise(rng));
    labels.push_back(circle);
  }
  return {automato::PointCloud(n, 2, std::move(coords)), std::move(labels)};
}

inline std::vector<double> column(const automato::PointCloud& cloud, std::size_t j) {
  std::vector<double> out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) out[i] = cloud.at(i, j);
  return out;
}

}  // namespace fixtures
