#include "radtok/manifest.hpp"

#include <openssl/sha.h>

#include <array>
#include <fstream>
#include <iterator>

#include "radtok/error.hpp"

namespace radtok {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest.data());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * digest.size());
  for (unsigned char b : digest) {
    out += kHex[b >> 4];
    out += kHex[b & 0xF];
  }
  return out;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "' for hashing");
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  return "sha256:" + sha256_hex(content);
}

nlohmann::ordered_json to_json(const RunManifest& manifest) {
  nlohmann::ordered_json digests = nlohmann::ordered_json::object();
  for (const auto& [path, digest] : manifest.input_digests) digests[path] = digest;
  return {{"command", manifest.command},
          {"parameters", manifest.parameters},
          {"tool_version", manifest.tool_version},
          {"input_digests", digests}};
}

}  // namespace radtok
