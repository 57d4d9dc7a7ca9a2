#pragma once

// Persisted record of one CLI invocation.

#include "hardylab/json_io.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hardylab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct RunRecord {
  std::string command;
  Json parameters = Json::object();
  Json result;
  std::optional<std::uint64_t> seed;  // present for stochastic commands
  std::string tool_version = kToolVersion;
  std::string timestamp;              // UTC, e.g. 2026-10-15T08:30:12.345Z
  double wall_time_seconds = 0.0;

  bool operator==(const RunRecord&) const = default;
};

/// ISO-8601 UTC with millisecond precision.
std::string utc_timestamp(std::chrono::system_clock::time_point t);

Json to_json(const RunRecord& record);
/// Throws std::invalid_argument on a missing field or unknown schema version.
RunRecord run_record_from_json(const Json& j);

/// "<command>-<compact timestamp>-<seed or 'noseed'>.json"
std::string record_filename(const RunRecord& record);

/// Writes `content` next to `target` under a temporary name, then renames.
void write_text_atomic(const std::filesystem::path& target, const std::string& content);

/// Writes to a temporary file in `dir` and renames it into place. Creates
/// `dir` if needed; never overwrites an existing record. Returns the path.
std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir);

}  // namespace hardylab
