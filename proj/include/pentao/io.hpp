#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pentao/ising.hpp"

namespace pentao {

/// {"n": int, "couplings": [[i, j, w], ...], "fields": [[i, w], ...], "label": str}
nlohmann::json instance_to_json(const IsingInstance &inst);
IsingInstance instance_from_json(const nlohmann::json &j);

/// Dispatch on extension: .json (instance JSON), .g6 / .graph6 (first graph,
/// unit weights), anything else as an edge list.
IsingInstance read_instance_file(const std::filesystem::path &path);
void write_instance_file(const std::filesystem::path &path, const IsingInstance &inst);

std::string read_text_file(const std::filesystem::path &path);

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

} // namespace pentao
