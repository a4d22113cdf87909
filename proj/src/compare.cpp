#include "radtok/compare.hpp"

#include "radtok/error.hpp"
#include "radtok/fragmentation.hpp"

namespace radtok {

std::vector<ComparisonRow> compare_tokenizers(std::span<const NamedTokenizer> tokenizers,
                                              const Corpus& corpus,
                                              const CompareOptions& options) {
  if (tokenizers.empty()) throw ConfigError("compare needs at least one tokenizer");
  std::vector<ComparisonRow> rows;
  for (const auto& [name, tokenizer] : tokenizers) {
    ComparisonRow row;
    row.name = name;
    row.vocab_size = tokenizer.vocab_size();
    row.seq_len = length_percentile(corpus, tokenizer, options.section, options.pct);
    row.tokens_per_word = tokens_per_word(tokenizer, corpus).tokens_per_word_mean;

    ModelConfig cfg = options.model;
    cfg.seq_len = row.seq_len;
    cfg.vocab = row.vocab_size;
    row.memory = total_memory(cfg, options.memory);
    if (options.budget_bytes) {
      try {
        row.max_batch = max_batch(cfg, *options.budget_bytes, options.memory);
      } catch (const ConfigError&) {
        row.budget_feasible = false;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::ordered_json to_json(const ComparisonRow& row) {
  nlohmann::ordered_json j = {{"tokenizer", row.name},
                              {"V", row.vocab_size},
                              {"S", row.seq_len},
                              {"tokens_per_word", row.tokens_per_word},
                              {"act_elements", row.memory.act_elements},
                              {"total_bytes", row.memory.total_bytes},
                              {"memory", to_json(row.memory)}};
  j["max_batch"] = row.max_batch ? nlohmann::ordered_json(*row.max_batch) : nullptr;
  j["budget_feasible"] = row.budget_feasible;
  return j;
}

}  // namespace radtok
