#include "hardylab/run_record.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace hardylab {

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count() % 1000;
  const std::time_t secs = system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

Json to_json(const RunRecord& r) {
  Json j = {{"schema_version", kSchemaVersion},
            {"command", r.command},
            {"parameters", r.parameters},
            {"result", r.result},
            {"seed", nullptr},
            {"tool_version", r.tool_version},
            {"timestamp", r.timestamp},
            {"wall_time_seconds", r.wall_time_seconds}};
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

RunRecord run_record_from_json(const Json& j) {
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported schema_version");
    }
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.parameters = j.at("parameters");
    r.result = j.at("result");
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.wall_time_seconds = j.at("wall_time_seconds").get<double>();
    return r;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed run record: ") + e.what());
  }
}

std::string record_filename(const RunRecord& r) {
  std::string compact;
  for (char c : r.timestamp) {
    if (c != '-' && c != ':') compact += c;
  }
  const std::string seed = r.seed ? std::to_string(*r.seed) : "noseed";
  return r.command + "-" + compact + "-" + seed + ".json";
}

void write_text_atomic(const std::filesystem::path& target, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
  fs::create_directories(dir);
  const fs::path tmp = dir / ("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename into " + target.string() + ": " + ec.message());
  }
}

std::filesystem::path write_record(const RunRecord& record, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const std::string name = record_filename(record);
  fs::path target = dir / name;
  for (int n = 1; fs::exists(target); ++n) {
    target = dir / (name.substr(0, name.size() - 5) + "-" + std::to_string(n) + ".json");
  }
  write_text_atomic(target, to_json(record).dump(2) + "\n");
  return target;
}

}  // namespace hardylab
