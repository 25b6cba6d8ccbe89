#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "automato/automato.hpp"
#include "automato/diagram.hpp"
#include "automato/geometry.hpp"

namespace automato {

/// One point per line, coordinates separated by whitespace and/or commas.
/// Blank lines and lines starting with '#' are skipped.
PointCloud parse_point_cloud(std::istream& in, const std::string& source = "<stream>");
PointCloud read_point_cloud(const std::filesystem::path& path);

/// One integer label per line.
std::vector<int> parse_labels(std::istream& in, const std::string& source = "<stream>");
std::vector<int> read_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::vector<int>& labels);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// One real value per line.
std::vector<double> read_values(const std::filesystem::path& path);

/// Edge list "u v" per line over vertices [0, n_vertices).
NeighborhoodGraph read_edge_list(const std::filesystem::path& path, std::size_t n_vertices);

/// [{"birth": b, "death": d | "-inf", "peak": v}, ...]
nlohmann::json diagram_to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const nlohmann::json& j);

/// "birth death" per line, 17 significant digits, "-inf" for essential points.
void write_diagram_text(std::ostream& out, const PersistenceDiagram& diagram);

nlohmann::json config_to_json(const AutomatoConfig& config);
/// Keys missing from `j` keep their value in `base`.
AutomatoConfig config_from_json(const nlohmann::json& j, AutomatoConfig base = {});

/// Everything update_alpha needs: configuration, seed, reference diagram with
/// its merge tree, and the sorted bootstrap distances.
nlohmann::json model_to_json(const FittedAutomato& fitted);
/// Throws ParseError on malformed or inconsistent models.
FittedAutomato model_from_json(const nlohmann::json& j);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace automato
