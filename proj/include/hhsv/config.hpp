#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hhsv/mc_harness.hpp"
#include "hhsv/model.hpp"
#include "hhsv/statistics.hpp"

namespace hhsv {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"model": {...}, "hawkes": {...}, "jump_law": {"type": ..., ...}}; mu is a list of
/// {"t_from", "value"} breakpoints.
nlohmann::json bundle_to_json(const ModelBundle& bundle);

/// Missing sections or fields keep their defaults; unknown fields are rejected.
ModelBundle bundle_from_json(const nlohmann::json& j);

/// Reads, parses and validates a config file.
ModelBundle load_config(const std::filesystem::path& path);

nlohmann::json report_to_json(const McReport& report);
nlohmann::json suite_to_json(const SuiteResult& result);

/// Human-readable table of a suite, one line per check.
std::string suite_table(const SuiteResult& result);

/// Writes to a temporary sibling then renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace hhsv
