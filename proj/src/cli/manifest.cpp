#include "cli/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jury::cli {

std::string to_json(const RunManifest& m) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, setting] : m.config.all()) config[key] = setting.value;
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["config"] = config;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["outputs"] = m.outputs;
  j["output_digest"] = m.output_digest;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source + ": invalid manifest JSON: " + e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    for (const auto& [key, value] : j.at("config").items()) {
      m.config.set(key, value.get<std::string>(), source);
    }
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.output_digest = j.value("output_digest", "");
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(source + ": malformed manifest: " + e.what());
  }
  return m;
}

RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return manifest_from_json(text.str(), path);
}

std::string manifest_path_for(const std::string& output_path) {
  return output_path + ".manifest.json";
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace jury::cli
