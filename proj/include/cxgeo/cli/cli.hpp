#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxgeo/error.hpp"
#include "cxgeo/report_io.hpp"

namespace cxgeo::cli {

enum class Format { json, csv };

/// Raised for malformed configs; the message names the offending key.
class ConfigError : public Error {
public:
  using Error::Error;
};

struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  Format format = Format::json;
  /// Empty writes to standard output.
  std::string output;
};

const std::vector<std::string>& command_names();

/// Accepts the top-level keys command, params, seed, format and output.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
Format parse_format(const std::string& name);

struct RunResult {
  /// 0 success, 1 error, 2 a check returned fails or diverged.
  int exit_code = 0;
  nlohmann::json report = nlohmann::json::object();
  std::optional<io::Table> table;
  std::string diagnostic;
};

/// Executes one command. Errors are reported through the result.
RunResult run(const RunConfig& config);

std::string render(const RunResult& result, Format format);

/// run, then write the rendered report to config.output (atomically) or
/// standard output. Diagnostics go to standard error.
int execute(const RunConfig& config);

}  // namespace cxgeo::cli
