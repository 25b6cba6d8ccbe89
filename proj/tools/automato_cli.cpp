#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "automato/automato.hpp"
#include "automato/errors.hpp"
#include "automato/evaluation.hpp"
#include "automato/io.hpp"
#include "automato/mapper.hpp"
#include "automato/tomato.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace automato;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitBadInput = 2;

/// Estimator and bootstrap flags shared by the subcommands. Values here are
/// only the defaults shown in --help; resolve() applies a flag only when it
/// was given on the command line.
struct EstimatorFlags {
  std::string graph = "knn";
  std::size_t k = 10;
  double delta = 0.0;
  std::string density = "log-dtm";
  std::size_t density_k = 10;
  double mass = 0.0;
  double bandwidth = 0.0;
  double alpha = 0.35;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  double outlier_threshold = kDefaultOutlierThreshold;
  bool outliers = false;
  unsigned threads = 0;
  std::string config_file;
  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& name) const {
    auto it = options.find(name);
    return it != options.end() && it->second->count() > 0;
  }
};

void add_estimator_flags(CLI::App* cmd, EstimatorFlags& f) {
  auto& o = f.options;
  o["config"] = cmd->add_option("--config", f.config_file,
                                "JSON configuration; command-line flags take precedence")
                    ->check(CLI::ExistingFile);
  o["graph"] = cmd->add_option("--graph", f.graph, "Neighbourhood graph")
                   ->check(CLI::IsMember({"knn", "rips"}));
  o["k"] = cmd->add_option("--k", f.k, "Neighbours of the k-NN graph")
               ->check(CLI::PositiveNumber);
  o["delta"] = cmd->add_option("--delta", f.delta, "Radius of the Rips graph")
                   ->check(CLI::PositiveNumber);
  o["density"] = cmd->add_option("--density", f.density, "Density estimator")
                     ->check(CLI::IsMember({"log-dtm", "dtm", "kde"}));
  o["density-k"] = cmd->add_option("--density-k", f.density_k,
                                   "Neighbours of the DTM estimator (default: the graph's k)")
                       ->check(CLI::PositiveNumber);
  o["mass"] = cmd->add_option("--mass", f.mass, "DTM mass m in (0, 1], k = ceil(m n)")
                  ->check(CLI::Range(0.0, 1.0))
                  ->excludes(o["density-k"]);
  o["bandwidth"] = cmd->add_option("--bandwidth", f.bandwidth, "Gaussian KDE bandwidth")
                       ->check(CLI::PositiveNumber);
  o["threads"] = cmd->add_option("--threads", f.threads, "Worker threads, 0 = all cores");
  for (const char* name : {"delta", "density-k", "mass", "bandwidth"}) o[name]->default_str("");
}

void add_bootstrap_flags(CLI::App* cmd, EstimatorFlags& f, bool with_seed) {
  auto& o = f.options;
  o["alpha"] = cmd->add_option("--alpha", f.alpha, "Confidence level of the bootstrap")
                   ->check(CLI::Range(0.0, 1.0));
  o["iterations"] = cmd->add_option("--iterations,-B", f.iterations, "Bootstrap iterations")
                        ->check(CLI::PositiveNumber);
  if (with_seed) {
    o["seed"] = cmd->add_option("--seed", f.seed, "Random seed (default: drawn and reported)");
  }
  o["outlier-threshold"] =
      cmd->add_option("--outlier-threshold", f.outlier_threshold,
                      "Label a point -1 when fewer than this share of its neighbours "
                      "reciprocate; implies --outliers")
          ->check(CLI::Range(0.0, 1.0));
  o["outliers"] = cmd->add_flag("--outliers", f.outliers,
                                "Switch on outlier flagging at the default threshold");
  if (with_seed) o["seed"]->default_str("");
}

json load_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

const char* density_flag_name(DensityKind k) {
  switch (k) {
    case DensityKind::dtm:
      return "dtm";
    case DensityKind::kde:
      return "kde";
    case DensityKind::log_dtm:
      break;
  }
  return "log-dtm";
}

/// Built-in defaults, overridden by the config file, overridden by flags.
AutomatoConfig resolve(const EstimatorFlags& f) {
  AutomatoConfig c;
  bool smoothing_set = false;
  if (f.given("config")) {
    const json j = load_json(f.config_file);
    c = config_from_json(j, c);
    smoothing_set = j.contains("density") && j["density"].is_object() &&
                    (j["density"].contains("k") || j["density"].contains("m"));
  }

  std::string gk = c.tomato.graph.kind == GraphKind::rips ? "rips" : "knn";
  std::size_t k = c.tomato.graph.kind == GraphKind::knn ? c.tomato.graph.k : 10;
  double delta = c.tomato.graph.delta;
  if (f.given("graph")) gk = f.graph;
  if (f.given("k")) k = f.k;
  if (f.given("delta")) delta = f.delta;
  if (gk == "rips" && !(delta > 0.0)) throw InvalidParameter("--graph rips needs --delta");
  c.tomato.graph = gk == "rips" ? GraphSpec::rips(delta) : GraphSpec::knn(k);

  std::string dk = density_flag_name(c.tomato.density.kind);
  Smoothing smoothing = c.tomato.density.smoothing;
  double bandwidth = c.tomato.density.bandwidth;
  if (f.given("density")) dk = f.density;
  if (f.given("density-k")) {
    smoothing = Smoothing::neighbors(f.density_k);
    smoothing_set = true;
  }
  if (f.given("mass")) {
    smoothing = Smoothing::mass(f.mass);
    smoothing_set = true;
  }
  if (!smoothing_set && c.tomato.graph.kind == GraphKind::knn) {
    smoothing = Smoothing::neighbors(c.tomato.graph.k);
  }
  if (f.given("bandwidth")) bandwidth = f.bandwidth;
  if (dk == "kde") {
    if (!(bandwidth > 0.0)) throw InvalidParameter("--density kde needs --bandwidth");
    c.tomato.density = DensitySpec::kde(bandwidth);
  } else if (dk == "dtm") {
    c.tomato.density = DensitySpec::dtm(smoothing);
  } else {
    c.tomato.density = DensitySpec::log_dtm(smoothing);
  }

  if (f.given("alpha")) c.alpha = f.alpha;
  if (f.given("iterations")) c.b_iterations = f.iterations;
  if (f.given("seed")) c.seed = f.seed;
  if (f.given("outliers")) c.outlier_threshold = kDefaultOutlierThreshold;
  if (f.given("outlier-threshold")) c.outlier_threshold = f.outlier_threshold;
  if (f.given("threads")) c.threads = f.threads;
  c.validate();
  return c;
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (std::uint64_t{rd()} << 32) ^ rd();
}

std::string real(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

std::string labels_text(const std::vector<int>& labels) {
  std::ostringstream out;
  write_labels(out, labels);
  return out.str();
}

// cluster ------------------------------------------------------------------

struct ClusterArgs {
  EstimatorFlags flags;
  std::string points;
  std::string output;
  std::string model;
  double tau = kInfinity;
  CLI::Option* tau_option = nullptr;
};

void run_cluster(const ClusterArgs& a) {
  const AutomatoConfig config = resolve(a.flags);
  const PointCloud cloud = read_point_cloud(a.points);

  if (a.tau_option->count() > 0) {
    TomatoParams params = config.tomato;
    params.tau = a.tau;
    const TomatoResult r = tomato_cluster(cloud, params);
    emit(a.output, labels_text(r.clustering.labels));
    if (!a.model.empty()) {
      json out = {{"format", "tomato-result"},
                  {"config", config_to_json(config)},
                  {"tau", std::isinf(a.tau) ? json("inf") : json(a.tau)},
                  {"reference_diagram", diagram_to_json(r.diagram())},
                  {"n_clusters", r.clustering.n_clusters},
                  {"labels", r.clustering.labels}};
      out["config"].erase("seed");
      write_text_file(a.model, out.dump(2) + "\n");
    }
    std::cerr << "clusters: " << r.clustering.n_clusters << "  tau: " << real(a.tau) << "\n";
    return;
  }

  AutomatoConfig seeded = config;
  if (!seeded.seed) seeded.seed = fresh_seed();
  const FittedAutomato fitted = fit(cloud, seeded);
  emit(a.output, labels_text(fitted.labels()));
  if (!a.model.empty()) write_text_file(a.model, model_to_json(fitted).dump(2) + "\n");
  std::cerr << "clusters: " << fitted.clustering.n_clusters << "  tau: " << real(fitted.tau)
            << "  q_hat: " << real(fitted.q_hat) << "  seed: " << fitted.seed << "\n";
}

// update-alpha -------------------------------------------------------------

struct UpdateArgs {
  std::string model;
  double alpha = 0.35;
  std::string output;
  std::string model_out;
};

void run_update(const UpdateArgs& a) {
  const FittedAutomato fitted = model_from_json(load_json(a.model));
  const FittedAutomato updated = update_alpha(fitted, a.alpha);
  emit(a.output, labels_text(updated.labels()));
  if (!a.model_out.empty()) {
    write_text_file(a.model_out, model_to_json(updated).dump(2) + "\n");
  }
  std::cerr << "clusters: " << updated.clustering.n_clusters << "  tau: " << real(updated.tau)
            << "  q_hat: " << real(updated.q_hat) << "  seed: " << updated.seed << "\n";
}

// benchmark ----------------------------------------------------------------

struct BenchmarkArgs {
  EstimatorFlags flags;
  std::string manifest;
  std::string points;
  std::vector<std::string> labels;
  std::string name;
  std::size_t runs = 10;
  std::uint64_t base_seed = 0;
  std::string csv;
  std::string format = "table";
  bool no_timing = false;
};

/// {"datasets": [{"name": ..., "points": ..., "labels": [...]}]}, paths
/// relative to the manifest.
std::vector<DatasetFiles> read_manifest(const fs::path& path) {
  const json j = load_json(path);
  const fs::path base = path.parent_path();
  auto resolve_path = [&](const std::string& p) {
    const fs::path q(p);
    return q.is_absolute() ? q : base / q;
  };
  std::vector<DatasetFiles> out;
  try {
    for (const auto& d : j.at("datasets")) {
      DatasetFiles files;
      files.points = resolve_path(d.at("points").get<std::string>());
      files.name = d.value("name", files.points.stem().string());
      for (const auto& l : d.at("labels")) {
        files.truths.push_back(resolve_path(l.get<std::string>()));
      }
      out.push_back(std::move(files));
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return out;
}

void run_benchmark_command(const BenchmarkArgs& a) {
  const AutomatoConfig config = resolve(a.flags);
  std::vector<DatasetFiles> datasets;
  if (!a.manifest.empty()) {
    datasets = read_manifest(a.manifest);
  } else {
    DatasetFiles files;
    files.points = a.points;
    files.name = a.name.empty() ? files.points.stem().string() : a.name;
    for (const auto& l : a.labels) files.truths.emplace_back(l);
    datasets.push_back(std::move(files));
  }
  const BenchmarkReport report =
      run_benchmark(datasets, automato_clusterer(config), a.runs, a.base_seed);
  if (!a.csv.empty()) write_text_file(a.csv, report.to_csv(!a.no_timing));
  if (a.format == "csv") {
    std::cout << report.to_csv(!a.no_timing);
  } else {
    std::cout << report.to_table();
  }
}

// diagram ------------------------------------------------------------------

struct DiagramArgs {
  EstimatorFlags flags;
  std::string points;
  std::string graph_file;
  std::string density_file;
  double tau = kInfinity;
  CLI::Option* tau_option = nullptr;
  std::string format = "text";
  std::string output;
};

void run_diagram(const DiagramArgs& a) {
  PersistenceDiagram diagram;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
  if (a.tau_option->count() > 0) tau = a.tau;

  if (!a.graph_file.empty()) {
    const std::vector<double> density = read_values(a.density_file);
    const NeighborhoodGraph graph = read_edge_list(a.graph_file, density.size());
    diagram = compute_persistence(graph, density);
  } else {
    AutomatoConfig config = resolve(a.flags);
    const PointCloud cloud = read_point_cloud(a.points);
    if (tau) {
      diagram = tomato_hierarchy(cloud, config.tomato).diagram();
    } else {
      if (!config.seed) config.seed = fresh_seed();
      const FittedAutomato fitted = fit(cloud, config);
      diagram = fitted.reference_diagram();
      tau = fitted.tau;
      seed = fitted.seed;
    }
  }

  std::ostringstream out;
  if (a.format == "json") {
    json j = {{"diagram", diagram_to_json(diagram)}};
    j["tau"] = tau ? json(*tau) : json(nullptr);
    if (seed) j["seed"] = *seed;
    out << j.dump(2) << "\n";
  } else {
    write_diagram_text(out, diagram);
    if (tau) out << "# tau " << real(*tau) << "\n";
    if (seed) out << "# seed " << *seed << "\n";
  }
  emit(a.output, out.str());
}

// mapper -------------------------------------------------------------------

struct MapperArgs {
  EstimatorFlags flags;
  std::string points;
  std::size_t filter_column = 0;
  std::string filter_file;
  std::size_t intervals = 15;
  double overlap = 0.3;
  std::string clusterer = "automato";
  std::string format = "json";
  std::string output;
};

void run_mapper(const MapperArgs& a) {
  AutomatoConfig config = resolve(a.flags);
  const PointCloud cloud = read_point_cloud(a.points);
  std::vector<double> filter;
  if (!a.filter_file.empty()) {
    filter = read_values(a.filter_file);
  } else {
    if (a.filter_column >= cloud.dim()) {
      throw InvalidParameter("--filter-column " + std::to_string(a.filter_column) +
                             " is out of range for " + std::to_string(cloud.dim()) +
                             "-dimensional points");
    }
    for (std::size_t i = 0; i < cloud.size(); ++i) filter.push_back(cloud.at(i, a.filter_column));
  }
  const IntervalCover cover = build_cover(filter, a.intervals, a.overlap);

  std::uint64_t seed = config.seed ? *config.seed : fresh_seed();
  const MapperClusterer clusterer = a.clusterer == "single"
                                        ? single_cluster_clusterer()
                                        : automato_mapper_clusterer(config, seed);
  const MapperGraph graph = mapper_graph(cloud, filter, cover, clusterer);

  if (a.format == "dot") {
    emit(a.output, graph.to_dot());
  } else {
    json j = graph.to_json();
    j["seed"] = seed;
    emit(a.output, j.dump(2) + "\n");
  }
  std::cerr << "vertices: " << graph.vertices.size() << "  edges: " << graph.edges.size()
            << "  components: " << graph.component_count()
            << "  cycle_rank: " << graph.cycle_rank() << "  seed: " << seed << "\n";
}

// score --------------------------------------------------------------------

struct ScoreArgs {
  std::string pred;
  std::string truth;
};

void run_score(const ScoreArgs& a) {
  std::cout << real(fowlkes_mallows(read_labels(a.pred), read_labels(a.truth))) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological mode-seeking clustering with automatic threshold selection"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  ClusterArgs cluster;
  auto* c = app.add_subcommand("cluster", "Cluster a point cloud (AuToMATo, or ToMATo with --tau)");
  c->add_option("points", cluster.points, "Point file, one point per line")
      ->required()
      ->check(CLI::ExistingFile);
  c->add_option("-o,--output", cluster.output, "Label file (default: stdout)");
  c->add_option("--model", cluster.model, "Write the fitted model as JSON");
  add_estimator_flags(c, cluster.flags);
  add_bootstrap_flags(c, cluster.flags, true);
  cluster.tau_option =
      c->add_option("--tau", cluster.tau, "Fixed prominence threshold; skips the bootstrap")
          ->default_str("");
  for (const char* name : {"alpha", "iterations", "seed", "outliers", "outlier-threshold"}) {
    cluster.tau_option->excludes(cluster.flags.options[name]);
  }

  UpdateArgs update;
  auto* u = app.add_subcommand("update-alpha", "Re-threshold a fitted model without resampling");
  u->add_option("model", update.model, "Model JSON written by 'cluster --model'")
      ->required()
      ->check(CLI::ExistingFile);
  u->add_option("--alpha", update.alpha, "New confidence level")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  u->add_option("-o,--output", update.output, "Label file (default: stdout)");
  u->add_option("--model-out", update.model_out, "Write the updated model as JSON");

  BenchmarkArgs bench;
  auto* b = app.add_subcommand("benchmark", "Mean and spread of Fowlkes-Mallows over seeded runs");
  auto* manifest = b->add_option("--manifest", bench.manifest, "JSON list of datasets")
                       ->check(CLI::ExistingFile);
  auto* bpoints =
      b->add_option("--points", bench.points, "Point file")->check(CLI::ExistingFile);
  b->add_option("--labels", bench.labels, "Ground-truth label files")
      ->check(CLI::ExistingFile)
      ->default_str("")
      ->needs(bpoints);
  b->add_option("--name", bench.name, "Dataset name (default: point file stem)")->needs(bpoints);
  manifest->excludes(bpoints);
  b->add_option("--runs,-r", bench.runs, "Runs per dataset")->check(CLI::PositiveNumber);
  b->add_option("--base-seed", bench.base_seed, "Seed of the first run");
  b->add_option("--csv", bench.csv, "Write the report as CSV");
  b->add_option("--format", bench.format, "Report on stdout")
      ->check(CLI::IsMember({"table", "csv"}));
  b->add_flag("--no-timing", bench.no_timing, "Write 0 in the seconds column");
  add_estimator_flags(b, bench.flags);
  add_bootstrap_flags(b, bench.flags, false);

  DiagramArgs diag;
  auto* d = app.add_subcommand("diagram", "Persistence diagram and bootstrap threshold");
  auto* dpoints =
      d->add_option("points", diag.points, "Point file")->check(CLI::ExistingFile);
  auto* gfile = d->add_option("--graph-file", diag.graph_file, "Edge list 'u v' per line")
                    ->check(CLI::ExistingFile);
  auto* dfile = d->add_option("--density-file", diag.density_file, "One density value per line")
                    ->check(CLI::ExistingFile);
  gfile->needs(dfile)->excludes(dpoints);
  dfile->needs(gfile);
  diag.tau_option = d->add_option("--tau", diag.tau, "Report this threshold; skips the bootstrap")
                        ->default_str("");
  d->add_option("--format", diag.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  d->add_option("-o,--output", diag.output, "Output file (default: stdout)");
  add_estimator_flags(d, diag.flags);
  add_bootstrap_flags(d, diag.flags, true);

  MapperArgs mapper;
  auto* m = app.add_subcommand("mapper", "Mapper graph over a one-dimensional filter");
  m->add_option("points", mapper.points, "Point file")->required()->check(CLI::ExistingFile);
  auto* column = m->add_option("--filter-column", mapper.filter_column,
                               "Use this coordinate as the filter");
  m->add_option("--filter-file", mapper.filter_file, "One filter value per point")
      ->check(CLI::ExistingFile)
      ->excludes(column);
  m->add_option("--intervals", mapper.intervals, "Cover intervals")->check(CLI::PositiveNumber);
  m->add_option("--overlap", mapper.overlap, "Overlap fraction in [0, 1)")
      ->check(CLI::Range(0.0, 1.0));
  m->add_option("--clusterer", mapper.clusterer, "Clusterer run on each preimage")
      ->check(CLI::IsMember({"automato", "single"}));
  m->add_option("--format", mapper.format, "Output format")->check(CLI::IsMember({"json", "dot"}));
  m->add_option("-o,--output", mapper.output, "Output file (default: stdout)");
  add_estimator_flags(m, mapper.flags);
  add_bootstrap_flags(m, mapper.flags, true);

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Fowlkes-Mallows score of a label file (-1 = outlier)");
  s->add_option("pred", score.pred, "Predicted labels")->required()->check(CLI::ExistingFile);
  s->add_option("truth", score.truth, "Ground truth")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitBadInput;
  }

  try {
    if (c->parsed()) {
      run_cluster(cluster);
    } else if (u->parsed()) {
      run_update(update);
    } else if (b->parsed()) {
      if (bench.manifest.empty() && bench.points.empty()) {
        throw InvalidParameter("benchmark needs --manifest or --points");
      }
      run_benchmark_command(bench);
    } else if (d->parsed()) {
      if (diag.points.empty() && diag.graph_file.empty()) {
        throw InvalidParameter("diagram needs a point file or --graph-file");
      }
      run_diagram(diag);
    } else if (m->parsed()) {
      run_mapper(mapper);
    } else if (s->parsed()) {
      run_score(score);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
