#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "automato/automato.hpp"
#include "automato/geometry.hpp"

namespace automato {

/// Label reserved for points a clusterer rejects as noise.
inline constexpr int kOutlierLabel = -1;

/// Pair counts between a clustering C and a ground truth G, named as in the
/// usual FMS = sqrt(TP / (TP + FP)) * sqrt(TP / (TP + FN)):
///   tp: pairs together in C and in G
///   fp: pairs together in G but not in C
///   fn: pairs together in C but not in G
struct PairCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

/// Counts over the points whose predicted label is not kOutlierLabel.
PairCounts count_pairs(std::span<const int> pred, std::span<const int> truth);

/// Fowlkes-Mallows score in [0, 1]; 0 when no pair is shared. Points with
/// pred == -1 are dropped first. Throws InvalidParameter on length mismatch,
/// outliers in the truth, or when every point is masked.
double fowlkes_mallows(std::span<const int> pred, std::span<const int> truth);

struct Dataset {
  std::string name;
  PointCloud points;
  /// (truth name, labels) per ground truth.
  std::vector<std::pair<std::string, std::vector<int>>> truths;
};

struct DatasetFiles {
  std::string name;
  std::filesystem::path points;
  std::vector<std::filesystem::path> truths;
};

/// Loads points and labels; truth names are the label file stems.
Dataset load_dataset(const DatasetFiles& files);

struct BenchmarkRow {
  std::string dataset;
  std::string truth;
  double mean_fm = 0.0;
  /// Population standard deviation over the runs.
  double std_fm = 0.0;
  std::size_t runs = 0;
  /// Wall time of all runs on the dataset.
  double seconds = 0.0;
  /// Highest mean among the dataset's ground truths.
  bool best = false;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  /// Columns dataset,truth,mean_fm,std_fm,runs,seconds,best. Without timing the
  /// seconds column is written as 0 so that reports compare byte for byte.
  std::string to_csv(bool with_timing = true) const;
  std::string to_table() const;
};

/// Produces labels for a min-max scaled cloud given a run seed.
using Clusterer = std::function<std::vector<int>(const PointCloud&, std::uint64_t seed)>;

/// AuToMATo with `config`, seeded per run.
Clusterer automato_clusterer(AutomatoConfig config);

/// Each dataset is min-max scaled and clustered with seeds base_seed + 0 ..
/// base_seed + runs - 1; every run is scored against every truth. Rows are
/// sorted by dataset name, truths in input order.
BenchmarkReport run_benchmark(const std::vector<Dataset>& datasets, const Clusterer& clusterer,
                              std::size_t runs, std::uint64_t base_seed);
BenchmarkReport run_benchmark(const std::vector<DatasetFiles>& datasets,
                              const Clusterer& clusterer, std::size_t runs,
                              std::uint64_t base_seed);

}  // namespace automato
