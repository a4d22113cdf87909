#include "radtok/tokenizer_io.hpp"

#include <fstream>
#include <iterator>
#include <optional>

#include "radtok/error.hpp"

namespace radtok {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_string()) throw ParseError(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::uint64_t> optional_count(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer() || *it < 0) {
    throw ParseError(std::string("field '") + field + "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

}  // namespace

nlohmann::ordered_json tokenizer_to_json(const Tokenizer& tokenizer) {
  nlohmann::ordered_json j;
  j["version"] = kTokenizerFileVersion;
  j["normalization"] = std::string(to_string(tokenizer.normalization()));
  j["end_of_word_marker"] = tokenizer.end_of_word_marker();
  auto specials = nlohmann::ordered_json::array();
  for (const auto& s : tokenizer.vocabulary().special_tokens()) {
    specials.push_back({{"name", s.name}, {"id", s.id}});
  }
  j["special_tokens"] = specials;
  auto vocab = nlohmann::ordered_json::object();
  const auto& tokens = tokenizer.vocabulary().tokens();
  for (std::size_t id = 0; id < tokens.size(); ++id) vocab[tokens[id]] = id;
  j["vocab"] = vocab;
  auto merges = nlohmann::ordered_json::array();
  for (const auto& m : tokenizer.merges()) merges.push_back(m.left + " " + m.right);
  j["merges"] = merges;
  if (tokenizer.training().min_count) j["min_count"] = *tokenizer.training().min_count;
  if (tokenizer.training().max_vocab) j["max_vocab"] = *tokenizer.training().max_vocab;
  return j;
}

Tokenizer tokenizer_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("tokenizer file must contain a JSON object");

  const json& version = require(j, "version");
  if (!version.is_number_integer()) throw ParseError("field 'version' must be an integer");
  if (version.get<std::int64_t>() != kTokenizerFileVersion) {
    throw VersionError("unsupported tokenizer file version " + version.dump() +
                       " (expected " + std::to_string(kTokenizerFileVersion) + ")");
  }

  const Normalization normalization = parse_normalization(require_string(j, "normalization"));
  std::string marker(kDefaultEndOfWordMarker);
  if (j.contains("end_of_word_marker")) marker = require_string(j, "end_of_word_marker");

  const json& specials = require(j, "special_tokens");
  if (!specials.is_array()) throw ParseError("field 'special_tokens' must be an array");
  if (specials.size() != kSpecialTokenNames.size()) {
    throw InvariantError("expected " + std::to_string(kSpecialTokenNames.size()) +
                         " special tokens, found " + std::to_string(specials.size()));
  }
  for (std::size_t i = 0; i < specials.size(); ++i) {
    const json& s = specials[i];
    const std::string where = "special_tokens[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("name") || !s["name"].is_string() ||
        !s.contains("id") || !s["id"].is_number_integer()) {
      throw ParseError("field '" + where + "' must be {\"name\": string, \"id\": integer}");
    }
    if (s["name"].get<std::string>() != kSpecialTokenNames[i] ||
        s["id"].get<std::int64_t>() != static_cast<std::int64_t>(i)) {
      throw InvariantError(where + " must be {\"name\": \"" +
                           std::string(kSpecialTokenNames[i]) + "\", \"id\": " +
                           std::to_string(i) + "}");
    }
  }

  const json& vocab = require(j, "vocab");
  if (!vocab.is_object()) throw ParseError("field 'vocab' must be an object");
  std::vector<std::optional<std::string>> by_id(vocab.size());
  for (const auto& [token, id_json] : vocab.items()) {
    if (!id_json.is_number_integer() || id_json < 0) {
      throw ParseError("field 'vocab'['" + token + "'] must be a non-negative integer");
    }
    const auto id = id_json.get<std::uint64_t>();
    if (id >= by_id.size()) {
      throw InvariantError("token id " + std::to_string(id) + " for '" + token +
                           "' breaks contiguous ids 0.." + std::to_string(by_id.size() - 1));
    }
    if (by_id[id]) {
      throw InvariantError("duplicate token id " + std::to_string(id) + " ('" + *by_id[id] +
                           "' and '" + token + "')");
    }
    by_id[id] = token;
  }
  std::vector<std::string> tokens;
  tokens.reserve(by_id.size());
  for (auto& t : by_id) tokens.push_back(std::move(*t));

  const json& merges_json = require(j, "merges");
  if (!merges_json.is_array()) throw ParseError("field 'merges' must be an array");
  std::vector<Merge> merges;
  merges.reserve(merges_json.size());
  for (std::size_t i = 0; i < merges_json.size(); ++i) {
    const json& m = merges_json[i];
    const std::string where = "field 'merges'[" + std::to_string(i) + "]";
    if (!m.is_string()) throw ParseError(where + " must be a string");
    const auto s = m.get<std::string>();
    const auto space = s.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 == s.size() ||
        s.find(' ', space + 1) != std::string::npos) {
      throw ParseError(where + " must be two symbols separated by one space, got '" + s + "'");
    }
    merges.push_back({s.substr(0, space), s.substr(space + 1)});
  }

  TrainingRecord record;
  record.min_count = optional_count(j, "min_count");
  record.max_vocab = optional_count(j, "max_vocab");

  return Tokenizer(Vocabulary::from_tokens(std::move(tokens)), std::move(merges),
                   normalization, std::move(marker), record);
}

std::string serialize_tokenizer(const Tokenizer& tokenizer) {
  return tokenizer_to_json(tokenizer).dump(2) + "\n";
}

Tokenizer parse_tokenizer(std::string_view content) {
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, content.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (content[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed tokenizer JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + e.what());
  }
  return tokenizer_from_json(j);
}

void save_tokenizer(const Tokenizer& tokenizer, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write tokenizer file '" + path.string() + "'");
  out << serialize_tokenizer(tokenizer);
  if (!out) throw InputError("failed writing tokenizer file '" + path.string() + "'");
}

Tokenizer load_tokenizer(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open tokenizer file '" + path.string() + "'");
  const std::string content((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
  try {
    return parse_tokenizer(content);
  } catch (const VersionError& e) {
    throw VersionError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(path.string() + ": " + e.what());
  }
}

}  // namespace radtok
