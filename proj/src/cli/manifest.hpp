#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace jury::cli {

/// Written next to every result file as `<result>.manifest.json`.
/// Everything except the two timestamps is a pure function of the command
/// and its resolved settings.
struct RunManifest {
  std::string command;
  Settings config;
  std::uint64_t seed = 0;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
  std::string output_digest;
};

std::string to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text, const std::string& source);
RunManifest load_manifest(const std::string& path);

std::string manifest_path_for(const std::string& output_path);
std::string utc_timestamp();

}  // namespace jury::cli
