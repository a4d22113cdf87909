#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "radtok/tokenizer.hpp"

namespace radtok {

inline constexpr int kTokenizerFileVersion = 1;

// {"version", "normalization", "end_of_word_marker", "special_tokens",
//  "vocab", "merges", ["min_count"], ["max_vocab"]}; vocab entries are written
// in id order and merges as "left right" in training order.
nlohmann::ordered_json tokenizer_to_json(const Tokenizer& tokenizer);

// Throws VersionError for an unsupported version, ParseError for missing or
// mistyped fields, InvariantError for structurally inconsistent content.
Tokenizer tokenizer_from_json(const nlohmann::json& j);

std::string serialize_tokenizer(const Tokenizer& tokenizer);
// As tokenizer_from_json; JSON syntax errors report line and column.
Tokenizer parse_tokenizer(std::string_view content);

void save_tokenizer(const Tokenizer& tokenizer, const std::filesystem::path& path);
Tokenizer load_tokenizer(const std::filesystem::path& path);

}  // namespace radtok
