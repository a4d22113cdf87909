#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "radtok/text.hpp"

namespace radtok {

class Corpus;
class Tokenizer;

struct FragmentationStats {
  double tokens_per_word_mean = 0.0;  // total_tokens / total_words
  std::uint64_t total_words = 0;
  std::uint64_t total_tokens = 0;
  std::map<std::string, std::size_t> per_word_splits;  // word -> token count
  std::map<std::size_t, std::uint64_t> histogram;      // token count -> occurrences
};

// Word-occurrence-weighted fragmentation. Throws InputError when there are no
// words.
FragmentationStats tokens_per_word(const Tokenizer& tokenizer, const WordCounts& words);
FragmentationStats tokens_per_word(const Tokenizer& tokenizer, const Corpus& corpus);

// Subwords of `word` joined by '-', end-of-word markers stripped and unknown
// characters shown as U+FFFD.
std::string split_display(const Tokenizer& tokenizer, std::string_view word);

struct FragmentationRow {
  std::string word;
  std::vector<std::string> splits;  // one per tokenizer, in input order
};

std::vector<FragmentationRow> fragmentation_table(std::span<const Tokenizer> tokenizers,
                                                  std::span<const std::string> words);

nlohmann::ordered_json to_json(const FragmentationStats& stats, bool include_words = true);

}  // namespace radtok
