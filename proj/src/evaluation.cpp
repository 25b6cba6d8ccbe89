#include "automato/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "automato/errors.hpp"
#include "automato/io.hpp"

namespace automato {

namespace {

std::uint64_t pairs(std::uint64_t c) { return c * (c - (c > 0 ? 1 : 0)) / 2; }

}  // namespace

PairCounts count_pairs(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) {
    throw InvalidParameter("label vectors differ in length (" + std::to_string(pred.size()) +
                           " vs " + std::to_string(truth.size()) + ")");
  }
  std::map<std::pair<int, int>, std::uint64_t> joint;
  std::map<int, std::uint64_t> pred_sizes;
  std::map<int, std::uint64_t> truth_sizes;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] == kOutlierLabel) {
      throw InvalidParameter("ground truth contains outlier labels");
    }
    if (pred[i] == kOutlierLabel) continue;
    ++kept;
    ++joint[{pred[i], truth[i]}];
    ++pred_sizes[pred[i]];
    ++truth_sizes[truth[i]];
  }
  if (kept == 0) throw InvalidParameter("every point is labelled as an outlier");

  PairCounts counts;
  std::uint64_t together_pred = 0;
  std::uint64_t together_truth = 0;
  for (const auto& [key, c] : joint) counts.tp += pairs(c);
  for (const auto& [key, c] : pred_sizes) together_pred += pairs(c);
  for (const auto& [key, c] : truth_sizes) together_truth += pairs(c);
  counts.fp = together_truth - counts.tp;
  counts.fn = together_pred - counts.tp;
  return counts;
}

double fowlkes_mallows(std::span<const int> pred, std::span<const int> truth) {
  const PairCounts c = count_pairs(pred, truth);
  if (c.tp == 0) return 0.0;
  const double tp = static_cast<double>(c.tp);
  return std::sqrt(tp / (tp + static_cast<double>(c.fp))) *
         std::sqrt(tp / (tp + static_cast<double>(c.fn)));
}

Dataset load_dataset(const DatasetFiles& files) {
  Dataset ds{files.name, read_point_cloud(files.points), {}};
  for (const auto& path : files.truths) {
    auto labels = read_labels(path);
    if (labels.size() != ds.points.size()) {
      throw ParseError(path.string() + ": " + std::to_string(labels.size()) +
                       " labels for " + std::to_string(ds.points.size()) + " points");
    }
    ds.truths.emplace_back(path.stem().string(), std::move(labels));
  }
  return ds;
}

Clusterer automato_clusterer(AutomatoConfig config) {
  return [config](const PointCloud& cloud, std::uint64_t seed) {
    AutomatoConfig run = config;
    run.seed = seed;
    return fit(cloud, run).labels();
  };
}

BenchmarkReport run_benchmark(const std::vector<Dataset>& datasets, const Clusterer& clusterer,
                              std::size_t runs, std::uint64_t base_seed) {
  if (runs < 1) throw InvalidParameter("benchmark needs at least one run");
  std::vector<const Dataset*> order;
  for (const auto& ds : datasets) order.push_back(&ds);
  std::stable_sort(order.begin(), order.end(),
                   [](const Dataset* a, const Dataset* b) { return a->name < b->name; });

  BenchmarkReport report;
  for (const Dataset* ds : order) {
    const PointCloud scaled = min_max_scale(ds->points);
    std::vector<std::vector<double>> scores(ds->truths.size());
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t r = 0; r < runs; ++r) {
      const auto labels = clusterer(scaled, base_seed + r);
      for (std::size_t t = 0; t < ds->truths.size(); ++t) {
        scores[t].push_back(fowlkes_mallows(labels, ds->truths[t].second));
      }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::size_t first = report.rows.size();
    for (std::size_t t = 0; t < ds->truths.size(); ++t) {
      double mean = 0.0;
      for (double s : scores[t]) mean += s;
      mean /= static_cast<double>(runs);
      double var = 0.0;
      for (double s : scores[t]) var += (s - mean) * (s - mean);
      var /= static_cast<double>(runs);
      report.rows.push_back({ds->name, ds->truths[t].first, mean, std::sqrt(var), runs, seconds,
                             false});
    }
    if (report.rows.size() > first) {
      auto best = std::max_element(
          report.rows.begin() + static_cast<std::ptrdiff_t>(first), report.rows.end(),
          [](const BenchmarkRow& a, const BenchmarkRow& b) { return a.mean_fm < b.mean_fm; });
      best->best = true;
    }
  }
  return report;
}

BenchmarkReport run_benchmark(const std::vector<DatasetFiles>& datasets,
                              const Clusterer& clusterer, std::size_t runs,
                              std::uint64_t base_seed) {
  std::vector<Dataset> loaded;
  loaded.reserve(datasets.size());
  for (const auto& files : datasets) loaded.push_back(load_dataset(files));
  return run_benchmark(loaded, clusterer, runs, base_seed);
}

std::string BenchmarkReport::to_csv(bool with_timing) const {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "dataset,truth,mean_fm,std_fm,runs,seconds,best\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.truth << ',' << r.mean_fm << ',' << r.std_fm << ',' << r.runs
        << ',' << (with_timing ? r.seconds : 0.0) << ',' << (r.best ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string BenchmarkReport::to_table() const {
  std::size_t wd = 7;
  std::size_t wt = 5;
  for (const auto& r : rows) {
    wd = std::max(wd, r.dataset.size());
    wt = std::max(wt, r.truth.size());
  }
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(wd)) << "dataset" << "  "
      << std::setw(static_cast<int>(wt)) << "truth" << "  " << std::right << std::setw(8)
      << "mean_fm" << "  " << std::setw(8) << "std_fm" << "  " << std::setw(4) << "runs"
      << "  " << std::setw(9) << "seconds" << "\n";
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(wd)) << r.dataset << "  "
        << std::setw(static_cast<int>(wt)) << r.truth << "  " << std::right << std::setprecision(4)
        << std::setw(8) << r.mean_fm << "  " << std::setw(8) << r.std_fm << "  " << std::setw(4)
        << r.runs << "  " << std::setprecision(3) << std::setw(9) << r.seconds
        << (r.best ? "  *" : "") << "\n";
  }
  return out.str();
}

}  // namespace automato
