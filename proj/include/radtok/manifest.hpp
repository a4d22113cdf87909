#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

namespace radtok {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Provenance written next to CLI outputs. Contains no timestamps so that
// identical runs produce identical manifests.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::string tool_version = std::string(kToolVersion);
  std::map<std::string, std::string> input_digests;  // path -> "sha256:<hex>"
};

std::string sha256_hex(std::string_view data);
// Throws InputError when the file cannot be read.
std::string file_digest(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const RunManifest& manifest);

}  // namespace radtok
