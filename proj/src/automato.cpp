#include "automato/automato.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "automato/errors.hpp"

namespace automato {

void AutomatoConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  if (b_iterations < 1) throw InvalidParameter("the bootstrap needs at least one iteration");
  if (outlier_threshold && !(*outlier_threshold > 0.0 && *outlier_threshold <= 1.0)) {
    throw InvalidParameter("outlier threshold must lie in (0, 1]");
  }
  TomatoParams estimators = tomato;
  estimators.tau = kInfinity;
  estimators.validate();
}

std::vector<int> FittedAutomato::labels() const {
  std::vector<int> out = clustering.labels;
  for (std::size_t i = 0; i < outliers.size(); ++i) {
    if (outliers[i]) out[i] = -1;
  }
  return out;
}

bool FittedAutomato::operator==(const FittedAutomato& other) const {
  return seed == other.seed && hierarchy == other.hierarchy &&
         sorted_distances == other.sorted_distances && q_hat == other.q_hat && tau == other.tau &&
         clustering == other.clustering && outliers == other.outliers &&
         config.alpha == other.config.alpha && config.b_iterations == other.config.b_iterations &&
         config.tomato == other.config.tomato &&
         config.outlier_threshold == other.config.outlier_threshold;
}

std::size_t quantile_rank(double alpha, std::size_t b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  if (b < 1) throw InvalidParameter("the bootstrap needs at least one iteration");
  return std::clamp<std::size_t>(stable_ceil((1.0 - alpha) * static_cast<double>(b)), 1, b);
}

double bootstrap_quantile(std::span<const double> sorted_distances, double alpha) {
  return sorted_distances[quantile_rank(alpha, sorted_distances.size()) - 1];
}

double prominence_threshold(double q_hat, std::size_t n) {
  return 2.0 * q_hat / std::sqrt(static_cast<double>(n));
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t iteration, unsigned attempt) {
  // splitmix64 finalizer over a combination of the three inputs
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ iteration) ^ attempt);
}

std::vector<std::size_t> draw_resample(std::size_t n, std::uint64_t stream_seed) {
  std::mt19937_64 engine(stream_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(engine);
  return idx;
}

namespace {

double one_bootstrap(const PointCloud& cloud, const TomatoParams& params,
                     const PersistenceDiagram& reference, std::uint64_t seed, std::size_t iteration) {
  const double root_n = std::sqrt(static_cast<double>(cloud.size()));
  for (unsigned attempt = 0;; ++attempt) {
    const auto idx = draw_resample(cloud.size(), substream_seed(seed, iteration, attempt));
    try {
      const ClusterHierarchy h = tomato_hierarchy(cloud.select(idx), params);
      return root_n * bottleneck_distance(h.diagram(), reference, true).distance;
    } catch (const DegenerateDensity&) {
      if (attempt + 1 >= kMaxResampleAttempts) {
        throw DegenerateDensity("bootstrap iteration " + std::to_string(iteration) + " failed " +
                                std::to_string(kMaxResampleAttempts) +
                                " times on degenerate resamples");
      }
    }
  }
}

}  // namespace

std::vector<double> bootstrap_distances(const PointCloud& cloud, const TomatoParams& params,
                                        const PersistenceDiagram& reference, std::size_t b,
                                        std::uint64_t seed, unsigned threads) {
  std::vector<double> out(b);
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, b));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < b && !failed; i = next++) {
      try {
        out[i] = one_bootstrap(cloud, params, reference, seed, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

FittedAutomato fit_from_distances(ClusterHierarchy hierarchy, std::vector<double> distances,
                                  const AutomatoConfig& config, std::uint64_t seed) {
  config.validate();
  if (distances.size() != config.b_iterations) {
    throw InvalidParameter("expected " + std::to_string(config.b_iterations) +
                           " bootstrap distances, got " + std::to_string(distances.size()));
  }
  FittedAutomato fitted;
  fitted.config = config;
  fitted.config.seed = seed;
  fitted.seed = seed;
  fitted.hierarchy = std::move(hierarchy);
  fitted.sorted_distances = std::move(distances);
  std::sort(fitted.sorted_distances.begin(), fitted.sorted_distances.end());
  return update_alpha(fitted, config.alpha);
}

FittedAutomato fit(const PointCloud& cloud, const AutomatoConfig& config) {
  config.validate();
  if (cloud.size() < 2) throw InvalidParameter("fit needs at least two points");
  const std::uint64_t seed =
      config.seed ? *config.seed
                  : (std::uint64_t{std::random_device{}()} << 32) ^ std::random_device{}();

  TomatoParams estimators = config.tomato;
  estimators.tau = kInfinity;
  ClusterHierarchy hierarchy = tomato_hierarchy(cloud, estimators);
  std::vector<double> distances = bootstrap_distances(
      cloud, estimators, hierarchy.diagram(), config.b_iterations, seed, config.threads);

  FittedAutomato fitted =
      fit_from_distances(std::move(hierarchy), std::move(distances), config, seed);
  if (config.outlier_threshold) {
    const std::size_t k = config.tomato.graph.kind == GraphKind::knn ? config.tomato.graph.k : 10;
    fitted.outliers = flag_outliers(cloud, std::min(k, cloud.size() - 1), *config.outlier_threshold);
  }
  return fitted;
}

FittedAutomato update_alpha(const FittedAutomato& fitted, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidParameter("alpha must lie in (0, 1)");
  FittedAutomato out = fitted;
  out.config.alpha = alpha;
  out.q_hat = bootstrap_quantile(out.sorted_distances, alpha);
  out.tau = prominence_threshold(out.q_hat, out.n_points());
  out.clustering = out.hierarchy.cluster(out.tau);
  return out;
}

std::vector<bool> flag_outliers(const NeighborTable& table, double threshold) {
  std::vector<bool> flagged(table.size(), false);
  for (std::size_t v = 0; v < table.size(); ++v) {
    std::size_t reciprocated = 0;
    for (std::size_t u : table.neighbors(v)) {
      const auto back = table.neighbors(u);
      if (std::find(back.begin(), back.end(), v) != back.end()) ++reciprocated;
    }
    const double share = static_cast<double>(reciprocated) / static_cast<double>(table.k());
    flagged[v] = share < threshold;
  }
  return flagged;
}

std::vector<bool> flag_outliers(const PointCloud& cloud, std::size_t k, double threshold) {
  return flag_outliers(nearest_neighbors(cloud, k), threshold);
}

}  // namespace automato
