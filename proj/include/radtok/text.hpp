#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace radtok {

// Pre-tokenization applied identically to training corpora and to encoded
// text. Both modes collapse whitespace runs and split ASCII punctuation into
// standalone words; only kLowercaseWhitespace folds case (ASCII only).
enum class Normalization { kLowercaseWhitespace, kPreserveCase };

std::string_view to_string(Normalization n);
// Throws ParseError on an unknown name.
Normalization parse_normalization(std::string_view name);

// U+FFFD, substituted for ill-formed UTF-8 sequences.
inline constexpr std::string_view kReplacementChar = "\xEF\xBF\xBD";

// Byte offset of the first ill-formed UTF-8 sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

// Splits into one string per code point. Ill-formed bytes become U+FFFD.
std::vector<std::string> split_codepoints(std::string_view text);

std::vector<std::string> normalize_words(std::string_view text, Normalization n);

// The words of normalize_words joined by single spaces.
std::string normalize_text(std::string_view text, Normalization n);

bool is_ascii_punct(char c);

// Normalized word -> frequency.
using WordCounts = std::map<std::string, std::uint64_t>;

}  // namespace radtok
