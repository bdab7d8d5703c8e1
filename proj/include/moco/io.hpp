#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "moco/pareto.hpp"
#include "moco/problems.hpp"
#include "moco/semo.hpp"

namespace moco {

using Json = nlohmann::json;

/// {"problem", "seed", "n", "payload"}. Parsing throws std::invalid_argument
/// on malformed documents.
Json instance_to_json(const Instance& instance);
Instance instance_from_json(const Json& doc);

/// Tours and selections as flat arrays, route sets as nested arrays.
Json solution_to_json(const Solution& solution);
Solution solution_from_json(const Json& doc, Problem problem);

/// [{"objectives": [...], "solution": ...}, ...]
Json archive_to_json(const Archive& archive);
Json semo_result_to_json(const SemoResult& result);

std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& doc);
Json read_json_file(const std::filesystem::path& path);

}  // namespace moco
