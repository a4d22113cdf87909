#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "radtok/corpus.hpp"
#include "radtok/memory_model.hpp"
#include "radtok/tokenizer.hpp"

namespace radtok {

struct NamedTokenizer {
  std::string name;
  Tokenizer tokenizer;
};

struct CompareOptions {
  // Architecture and fixed batch size; S and V are taken from each tokenizer.
  ModelConfig model{.batch = 32};
  MemoryOptions memory;
  double pct = 0.9;
  Section section = Section::kBoth;
  std::optional<std::uint64_t> budget_bytes;
};

struct ComparisonRow {
  std::string name;
  std::uint64_t vocab_size = 0;
  std::uint64_t seq_len = 0;
  double tokens_per_word = 0.0;
  MemoryEstimate memory;                 // at the fixed batch size
  std::optional<std::uint64_t> max_batch;  // absent when infeasible or no budget
  bool budget_feasible = true;
};

// One row per tokenizer: vocabulary size, the percentile sequence length on
// the corpus, tokens per word, memory at the fixed batch and the largest
// batch under the budget. An infeasible budget is reported in the row.
std::vector<ComparisonRow> compare_tokenizers(std::span<const NamedTokenizer> tokenizers,
                                              const Corpus& corpus,
                                              const CompareOptions& options);

nlohmann::ordered_json to_json(const ComparisonRow& row);

}  // namespace radtok
