#include "automato/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "automato/errors.hpp"

namespace automato {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

double parse_real(const std::string& token, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) throw ParseError(where + ": not a number: '" + token + "'");
  return value;
}

std::string location(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

PointCloud parse_point_cloud(std::istream& in, const std::string& source) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t rows = 0;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (skippable(line)) continue;
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream fields(line);
    std::string token;
    std::size_t count = 0;
    while (fields >> token) {
      const double x = parse_real(token, location(source, lineno));
      if (!std::isfinite(x)) {
        throw ParseError(location(source, lineno) + ": non-finite coordinate");
      }
      coords.push_back(x);
      ++count;
    }
    if (rows == 0) {
      dim = count;
    } else if (count != dim) {
      throw ParseError(location(source, lineno) + ": expected " + std::to_string(dim) +
                       " columns, found " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(source + ": no data rows");
  return PointCloud(rows, dim, std::move(coords));
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_point_cloud(in, path.string());
}

std::vector<int> parse_labels(std::istream& in, const std::string& source) {
  std::vector<int> labels;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    std::string rest;
    if (used != token.size() || (fields >> rest) || value < INT32_MIN || value > INT32_MAX) {
      throw ParseError(location(source, lineno) + ": expected one integer label");
    }
    labels.push_back(static_cast<int>(value));
  }
  return labels;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_labels(in, path.string());
}

void write_labels(std::ostream& out, const std::vector<int>& labels) {
  for (int l : labels) out << l << '\n';
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ostringstream out;
  write_labels(out, labels);
  write_text_file(path, out.str());
}

std::vector<double> read_values(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    values.push_back(parse_real(token, location(path.string(), lineno)));
  }
  return values;
}

NeighborhoodGraph read_edge_list(const std::filesystem::path& path, std::size_t n_vertices) {
  auto in = open_input(path);
  std::vector<NeighborhoodGraph::Edge> edges;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (skippable(line)) continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    long long u = -1;
    long long v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw ParseError(location(path.string(), lineno) + ": expected 'u v'");
    }
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  try {
    return NeighborhoodGraph(n_vertices, edges);
  } catch (const InvalidParameter& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

json diagram_to_json(const PersistenceDiagram& diagram) {
  json out = json::array();
  for (const auto& p : diagram.points) {
    json death = p.is_infinite() ? json("-inf") : json(p.death);
    out.push_back({{"birth", p.birth}, {"death", death}, {"peak", p.peak}});
  }
  return out;
}

PersistenceDiagram diagram_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("diagram: expected an array");
  PersistenceDiagram d;
  for (const auto& p : j) {
    try {
      const auto& death = p.at("death");
      double dv = 0.0;
      if (death.is_string()) {
        if (death.get<std::string>() != "-inf") throw ParseError("diagram: bad death value");
        dv = -kInfinity;
      } else {
        dv = death.get<double>();
      }
      d.points.push_back({p.at("birth").get<double>(), dv, p.at("peak").get<std::size_t>()});
    } catch (const json::exception& e) {
      throw ParseError(std::string("diagram: ") + e.what());
    }
  }
  return d;
}

void write_diagram_text(std::ostream& out, const PersistenceDiagram& diagram) {
  const auto flags = out.flags();
  const auto precision = out.precision(17);
  for (const auto& p : diagram.points) {
    out << p.birth << ' ';
    if (p.is_infinite()) {
      out << "-inf";
    } else {
      out << p.death;
    }
    out << '\n';
  }
  out.precision(precision);
  out.flags(flags);
}

namespace {

const char* graph_kind_name(GraphKind k) {
  switch (k) {
    case GraphKind::knn:
      return "knn";
    case GraphKind::rips:
      return "rips";
    case GraphKind::custom:
      return "custom";
  }
  return "custom";
}

const char* density_kind_name(DensityKind k) {
  switch (k) {
    case DensityKind::dtm:
      return "dtm";
    case DensityKind::log_dtm:
      return "log_dtm";
    case DensityKind::kde:
      return "kde";
  }
  return "log_dtm";
}

}  // namespace

json config_to_json(const AutomatoConfig& config) {
  const auto& g = config.tomato.graph;
  const auto& d = config.tomato.density;
  json graph = {{"kind", graph_kind_name(g.kind)}};
  if (g.kind == GraphKind::knn) graph["k"] = g.k;
  if (g.kind == GraphKind::rips) graph["delta"] = g.delta;
  json density = {{"kind", density_kind_name(d.kind)}};
  if (d.kind == DensityKind::kde) {
    density["bandwidth"] = d.bandwidth;
  } else if (d.smoothing.is_mass()) {
    density["m"] = d.smoothing.value();
  } else {
    density["k"] = static_cast<std::size_t>(d.smoothing.value());
  }
  json out = {{"graph", graph},
              {"density", density},
              {"alpha", config.alpha},
              {"b_iterations", config.b_iterations}};
  out["seed"] = config.seed ? json(*config.seed) : json(nullptr);
  out["outlier_threshold"] =
      config.outlier_threshold ? json(*config.outlier_threshold) : json(nullptr);
  return out;
}

AutomatoConfig config_from_json(const json& j, AutomatoConfig base) {
  AutomatoConfig c = std::move(base);
  try {
    if (!j.is_object()) throw ParseError("config: expected an object");
    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      const auto gk = g.value("kind", std::string(graph_kind_name(c.tomato.graph.kind)));
      if (gk == "knn") {
        c.tomato.graph = GraphSpec::knn(g.value("k", c.tomato.graph.k));
      } else if (gk == "rips") {
        c.tomato.graph = GraphSpec::rips(g.value("delta", c.tomato.graph.delta));
      } else {
        throw ParseError("config: unknown graph kind '" + gk + "'");
      }
    }
    if (j.contains("density")) {
      const auto& d = j.at("density");
      const auto dk = d.value("kind", std::string(density_kind_name(c.tomato.density.kind)));
      if (dk == "kde") {
        c.tomato.density = DensitySpec::kde(d.value("bandwidth", c.tomato.density.bandwidth));
      } else if (dk == "dtm" || dk == "log_dtm") {
        Smoothing s = c.tomato.density.smoothing;
        if (d.contains("m")) s = Smoothing::mass(d.at("m").get<double>());
        if (d.contains("k")) s = Smoothing::neighbors(d.at("k").get<std::size_t>());
        c.tomato.density = dk == "dtm" ? DensitySpec::dtm(s) : DensitySpec::log_dtm(s);
      } else {
        throw ParseError("config: unknown density kind '" + dk + "'");
      }
    }
    c.alpha = j.value("alpha", c.alpha);
    c.b_iterations = j.value("b_iterations", c.b_iterations);
    if (j.contains("seed")) {
      if (j.at("seed").is_null()) {
        c.seed.reset();
      } else {
        c.seed = j.at("seed").get<std::uint64_t>();
      }
    }
    if (j.contains("outlier_threshold")) {
      if (j.at("outlier_threshold").is_null()) {
        c.outlier_threshold.reset();
      } else {
        c.outlier_threshold = j.at("outlier_threshold").get<double>();
      }
    }
    c.threads = j.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

json model_to_json(const FittedAutomato& fitted) {
  json absorber = json::array();
  for (std::size_t a : fitted.hierarchy.absorber()) {
    absorber.push_back(a == kDiagonal ? json(nullptr) : json(a));
  }
  json out = {
      {"format", "automato-model"},
      {"version", 1},
      {"n_points", fitted.n_points()},
      {"config", config_to_json(fitted.config)},
      {"seed", fitted.seed},
      {"reference_diagram", diagram_to_json(fitted.reference_diagram())},
      {"absorber", absorber},
      {"vertex_point", std::vector<std::size_t>(fitted.hierarchy.vertex_point().begin(),
                                                fitted.hierarchy.vertex_point().end())},
      {"sorted_distances", fitted.sorted_distances},
      {"q_hat", fitted.q_hat},
      {"tau", fitted.tau},
      {"n_clusters", fitted.clustering.n_clusters},
      {"labels", fitted.labels()},
  };
  if (!fitted.outliers.empty()) out["outliers"] = fitted.outliers;
  return out;
}

FittedAutomato model_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != "automato-model") {
      throw ParseError("model: not an automato model");
    }
    if (j.at("version").get<int>() != 1) throw ParseError("model: unsupported version");
    AutomatoConfig config = config_from_json(j.at("config"));
    const auto seed = j.at("seed").get<std::uint64_t>();

    std::vector<std::size_t> absorber;
    for (const auto& a : j.at("absorber")) {
      absorber.push_back(a.is_null() ? kDiagonal : a.get<std::size_t>());
    }
    ClusterHierarchy hierarchy(diagram_from_json(j.at("reference_diagram")), std::move(absorber),
                               j.at("vertex_point").get<std::vector<std::size_t>>());
    if (hierarchy.vertex_count() != j.at("n_points").get<std::size_t>()) {
      throw ParseError("model: n_points does not match the stored hierarchy");
    }
    auto distances = j.at("sorted_distances").get<std::vector<double>>();
    if (!std::is_sorted(distances.begin(), distances.end())) {
      throw ParseError("model: sorted_distances is not sorted");
    }
    FittedAutomato fitted =
        fit_from_distances(std::move(hierarchy), std::move(distances), config, seed);
    if (j.contains("outliers")) {
      fitted.outliers = j.at("outliers").get<std::vector<bool>>();
      if (fitted.outliers.size() != fitted.n_points()) {
        throw ParseError("model: outlier mask has the wrong length");
      }
    }
    return fitted;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace automato
