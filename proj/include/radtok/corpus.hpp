#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "radtok/text.hpp"

namespace radtok {

class Tokenizer;

struct CorpusDocument {
  std::string id;
  std::string findings;
  std::string conclusion;
  friend bool operator==(const CorpusDocument&, const CorpusDocument&) = default;
};

enum class CorpusFormat { kJsonl, kPlain };
enum class Section { kFindings, kConclusion, kBoth };

CorpusFormat parse_corpus_format(std::string_view name);
Section parse_section(std::string_view name);
std::string_view to_string(Section s);

// An immutable collection of reports with word frequencies over the
// findings and conclusion of every document.
class Corpus {
 public:
  Corpus() = default;
  // Throws ParseError on duplicate document ids.
  explicit Corpus(std::vector<CorpusDocument> documents,
                  Normalization normalization = Normalization::kLowercaseWhitespace);

  const std::vector<CorpusDocument>& documents() const { return documents_; }
  const WordCounts& word_frequencies() const { return word_frequencies_; }
  Normalization normalization() const { return normalization_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

 private:
  std::vector<CorpusDocument> documents_;
  WordCounts word_frequencies_;
  Normalization normalization_ = Normalization::kLowercaseWhitespace;
};

// JSONL: one object per line with string fields "findings" and "conclusion"
// and an optional "id" (defaults to the zero-based document index). Plain:
// each non-blank line is the findings of one document. Blank lines are
// skipped in both formats. Errors carry the 1-based line number, or the byte
// offset for ill-formed UTF-8.
Corpus parse_corpus(std::string_view content, CorpusFormat format,
                    Normalization normalization = Normalization::kLowercaseWhitespace);
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   Normalization normalization = Normalization::kLowercaseWhitespace);

std::string to_jsonl(const Corpus& corpus);

struct CorpusStats {
  std::size_t n_reports = 0;
  // Absent for an empty corpus. Lengths are in normalized words; the
  // deviation is the population standard deviation.
  std::optional<double> findings_len_mean;
  std::optional<double> findings_len_std;
  std::optional<double> conclusion_len_mean;
  std::optional<double> conclusion_len_std;
  std::size_t n_unique_words = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);
// Absent moments serialize as null.
nlohmann::ordered_json to_json(const CorpusStats& stats);

// The ceil(pct * n)-th smallest value (1-based), always an observed value.
// A 1e-9 slack absorbs binary rounding of pct * n. Throws ConfigError when pct
// is outside (0, 1] and InputError when values is empty.
std::size_t nearest_rank(std::span<const std::size_t> values, double pct);

std::vector<std::size_t> document_token_lengths(const Corpus& corpus,
                                                const Tokenizer& tokenizer,
                                                Section section);

// Sequence length S covering pct of the documents under the tokenizer.
std::size_t length_percentile(const Corpus& corpus, const Tokenizer& tokenizer,
                              Section section, double pct);

}  // namespace radtok
