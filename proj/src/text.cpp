#include "radtok/text.hpp"

#include <cstdint>

#include "radtok/error.hpp"

namespace radtok {
namespace {

struct Decoded {
  char32_t cp = 0;
  std::size_t len = 0;  // 0 means ill-formed at this position
};

Decoded decode_one(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4, cp = b0 & 0x07, min = 0x10000;
  } else {
    return {};
  }
  if (i + len > s.size()) return {};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {};
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {};
  return {cp, len};
}

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

}  // namespace

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::kLowercaseWhitespace:
      return "lowercase_whitespace";
    case Normalization::kPreserveCase:
      return "preserve_case";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "lowercase_whitespace") return Normalization::kLowercaseWhitespace;
  if (name == "preserve_case") return Normalization::kPreserveCase;
  throw ParseError("unknown normalization '" + std::string(name) + "'");
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_one(text, i);
    if (d.len == 0) return i;
    i += d.len;
  }
  return std::nullopt;
}

std::vector<std::string> split_codepoints(std::string_view text) {
  std::vector<std::string> out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_one(text, i);
    if (d.len == 0) {
      out.emplace_back(kReplacementChar);
      ++i;
    } else {
      out.emplace_back(text.substr(i, d.len));
      i += d.len;
    }
  }
  return out;
}

std::vector<std::string> normalize_words(std::string_view text, Normalization n) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_one(text, i);
    if (d.len == 0) {
      current += kReplacementChar;
      ++i;
      continue;
    }
    if (is_unicode_space(d.cp)) {
      flush();
    } else if (d.len == 1 && is_ascii_punct(text[i])) {
      flush();
      words.emplace_back(1, text[i]);
    } else if (d.len == 1 && n == Normalization::kLowercaseWhitespace &&
               text[i] >= 'A' && text[i] <= 'Z') {
      current += static_cast<char>(text[i] - 'A' + 'a');
    } else {
      current.append(text.substr(i, d.len));
    }
    i += d.len;
  }
  flush();
  return words;
}

std::string normalize_text(std::string_view text, Normalization n) {
  std::string out;
  for (const auto& w : normalize_words(text, n)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace radtok
