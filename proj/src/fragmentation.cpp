#include "radtok/fragmentation.hpp"

#include "radtok/corpus.hpp"
#include "radtok/error.hpp"
#include "radtok/tokenizer.hpp"

namespace radtok {

FragmentationStats tokens_per_word(const Tokenizer& tokenizer, const WordCounts& words) {
  FragmentationStats stats;
  for (const auto& [word, freq] : words) {
    if (freq == 0) continue;
    const std::size_t n = tokenizer.encode_word(word).size();
    stats.per_word_splits[word] = n;
    stats.histogram[n] += freq;
    stats.total_words += freq;
    stats.total_tokens += freq * n;
  }
  if (stats.total_words == 0) throw InputError("no words to measure fragmentation on");
  stats.tokens_per_word_mean =
      static_cast<double>(stats.total_tokens) / static_cast<double>(stats.total_words);
  return stats;
}

FragmentationStats tokens_per_word(const Tokenizer& tokenizer, const Corpus& corpus) {
  if (corpus.empty()) throw InputError("fragmentation is undefined for an empty corpus");
  if (corpus.normalization() != tokenizer.normalization()) {
    return tokens_per_word(
        tokenizer, Corpus(corpus.documents(), tokenizer.normalization()).word_frequencies());
  }
  return tokens_per_word(tokenizer, corpus.word_frequencies());
}

std::string split_display(const Tokenizer& tokenizer, std::string_view word) {
  std::string out;
  for (const TokenId id : tokenizer.encode(word).ids) {
    const std::string piece = tokenizer.display_token(id);
    if (piece.empty()) continue;
    if (!out.empty()) out += '-';
    out += piece;
  }
  return out;
}

std::vector<FragmentationRow> fragmentation_table(std::span<const Tokenizer> tokenizers,
                                                  std::span<const std::string> words) {
  std::vector<FragmentationRow> rows;
  rows.reserve(words.size());
  for (const auto& word : words) {
    FragmentationRow row{word, {}};
    for (const auto& tok : tokenizers) row.splits.push_back(split_display(tok, word));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json to_json(const FragmentationStats& stats, bool include_words) {
  nlohmann::ordered_json hist = nlohmann::ordered_json::object();
  for (const auto& [n, count] : stats.histogram) hist[std::to_string(n)] = count;
  nlohmann::ordered_json j = {{"tokens_per_word_mean", stats.tokens_per_word_mean},
                              {"total_words", stats.total_words},
                              {"total_tokens", stats.total_tokens},
                              {"histogram", hist}};
  if (include_words) {
    nlohmann::ordered_json splits = nlohmann::ordered_json::object();
    for (const auto& [w, n] : stats.per_word_splits) splits[w] = n;
    j["per_word_splits"] = splits;
  }
  return j;
}

}  // namespace radtok
