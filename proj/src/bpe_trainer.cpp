#include "radtok/bpe_trainer.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "radtok/corpus.hpp"
#include "radtok/error.hpp"

namespace radtok {
namespace {

using SymbolId = std::uint32_t;
using PairKey = std::uint64_t;

PairKey make_key(SymbolId left, SymbolId right) {
  return (static_cast<PairKey>(left) << 32) | right;
}
SymbolId key_left(PairKey k) { return static_cast<SymbolId>(k >> 32); }
SymbolId key_right(PairKey k) { return static_cast<SymbolId>(k & 0xFFFFFFFFu); }

struct Word {
  std::vector<SymbolId> symbols;
  std::uint64_t freq = 0;
  bool tracked = false;  // counts toward the min_count stopping rule
};

struct Candidate {
  std::uint64_t count;
  PairKey key;
};

class Trainer {
 public:
  Trainer(const WordCounts& counts, const TrainingRegime& regime,
          const TrainingOptions& options)
      : regime_(regime), options_(options) {
    std::set<std::string> alphabet;
    std::vector<std::pair<std::vector<std::string>, std::uint64_t>> split;
    for (const auto& [word, freq] : counts) {
      if (freq == 0) continue;
      const auto normalized = normalize_words(word, options_.normalization);
      if (normalized.size() != 1 || normalized.front() != word) {
        throw ConfigError("training word '" + word +
                          "' is not a single normalized word");
      }
      auto chars = split_codepoints(word);
      alphabet.insert(chars.begin(), chars.end());
      split.emplace_back(std::move(chars), freq);
    }
    if (!split.empty()) alphabet.insert(options_.end_of_word_marker);
    for (const auto& sym : alphabet) intern(sym);
    base_size_ = names_.size();

    const auto* min_count = std::get_if<MinCount>(&regime_);
    const SymbolId marker = split.empty() ? 0 : index_.at(options_.end_of_word_marker);
    words_.reserve(split.size());
    for (auto& [chars, freq] : split) {
      Word w;
      w.freq = freq;
      for (const auto& c : chars) w.symbols.push_back(index_.at(c));
      w.symbols.push_back(marker);
      w.tracked = min_count && freq >= min_count->count;
      if (w.tracked) ++unmerged_tracked_;
      words_.push_back(std::move(w));
    }
  }

  std::uint64_t minimum_vocab_size() const {
    return kSpecialTokenNames.size() + base_size_;
  }

  Tokenizer run() {
    for (std::uint32_t wi = 0; wi < words_.size(); ++wi) add_pairs(wi);
    for (const auto& [key, count] : counts_) heap_.push({count, key});

    std::vector<Merge> merges;
    std::unordered_set<PairKey> merged;
    while (!should_stop()) {
      const auto best = pop_best();
      if (!best || best->count < threshold()) break;
      if (!merged.insert(best->key).second) {
        throw InvariantError("training selected the pair ('" + names_[key_left(best->key)] +
                             "', '" + names_[key_right(best->key)] + "') twice");
      }
      merges.push_back({names_[key_left(best->key)], names_[key_right(best->key)]});
      apply(best->key);
    }
    return build(std::move(merges));
  }

 private:
  SymbolId intern(const std::string& name) {
    auto [it, inserted] = index_.emplace(name, static_cast<SymbolId>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }

  std::uint64_t vocab_size() const { return kSpecialTokenNames.size() + names_.size(); }

  std::uint64_t threshold() const {
    if (const auto* mc = std::get_if<MinCount>(&regime_)) return mc->count;
    return 2;
  }

  bool should_stop() const {
    if (const auto* mv = std::get_if<MaxVocab>(&regime_)) return vocab_size() >= mv->size;
    return unmerged_tracked_ == 0;
  }

  // Higher count first; among equal counts the lexicographically smallest
  // (left, right) pair wins.
  bool ranks_below(const Candidate& a, const Candidate& b) const {
    if (a.count != b.count) return a.count < b.count;
    const auto& al = names_[key_left(a.key)];
    const auto& bl = names_[key_left(b.key)];
    if (al != bl) return al > bl;
    return names_[key_right(a.key)] > names_[key_right(b.key)];
  }

  std::optional<Candidate> pop_best() {
    while (!heap_.empty()) {
      const Candidate top = heap_.top();
      heap_.pop();
      auto it = counts_.find(top.key);
      if (it != counts_.end() && it->second == top.count) return top;
    }
    return std::nullopt;
  }

  void add_pairs(std::uint32_t wi) {
    const Word& w = words_[wi];
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      const auto key = make_key(w.symbols[i], w.symbols[i + 1]);
      counts_[key] += w.freq;
      occurrences_[key].push_back(wi);
      touched_.insert(key);
    }
  }

  void remove_pairs(std::uint32_t wi) {
    const Word& w = words_[wi];
    for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
      const auto key = make_key(w.symbols[i], w.symbols[i + 1]);
      counts_[key] -= w.freq;
      touched_.insert(key);
    }
  }

  void apply(PairKey key) {
    const SymbolId left = key_left(key);
    const SymbolId right = key_right(key);
    const SymbolId result = intern(names_[left] + names_[right]);

    auto owners = std::move(occurrences_[key]);
    occurrences_.erase(key);
    std::sort(owners.begin(), owners.end());
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());

    touched_.clear();
    std::vector<SymbolId> next;
    for (const auto wi : owners) {
      Word& w = words_[wi];
      bool present = false;
      for (std::size_t i = 0; i + 1 < w.symbols.size() && !present; ++i) {
        present = w.symbols[i] == left && w.symbols[i + 1] == right;
      }
      if (!present) continue;

      remove_pairs(wi);
      next.clear();
      for (std::size_t i = 0; i < w.symbols.size();) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == left && w.symbols[i + 1] == right) {
          next.push_back(result);
          i += 2;
        } else {
          next.push_back(w.symbols[i++]);
        }
      }
      const bool was_split = w.symbols.size() > 1;
      w.symbols.swap(next);
      if (w.tracked && was_split && w.symbols.size() == 1) --unmerged_tracked_;
      add_pairs(wi);
    }

    for (const auto k : touched_) {
      auto it = counts_.find(k);
      if (it == counts_.end()) continue;
      if (it->second == 0) {
        counts_.erase(it);
        occurrences_.erase(k);
      } else {
        heap_.push({it->second, k});
      }
    }
  }

  Tokenizer build(std::vector<Merge> merges) const {
    std::vector<std::string> base(names_.begin(), names_.begin() + base_size_);
    std::sort(base.begin(), base.end());
    Vocabulary vocab;
    for (const auto& b : base) vocab.add(b);
    for (const auto& m : merges) vocab.add(m.result());

    TrainingRecord record;
    if (const auto* mc = std::get_if<MinCount>(&regime_)) record.min_count = mc->count;
    if (const auto* mv = std::get_if<MaxVocab>(&regime_)) record.max_vocab = mv->size;
    return Tokenizer(std::move(vocab), std::move(merges), options_.normalization,
                     options_.end_of_word_marker, record);
  }

  TrainingRegime regime_;
  TrainingOptions options_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, SymbolId> index_;
  std::size_t base_size_ = 0;
  std::vector<Word> words_;
  std::uint64_t unmerged_tracked_ = 0;

  std::unordered_map<PairKey, std::uint64_t> counts_;
  std::unordered_map<PairKey, std::vector<std::uint32_t>> occurrences_;
  std::unordered_set<PairKey> touched_;

  struct Compare {
    const Trainer* self;
    bool operator()(const Candidate& a, const Candidate& b) const {
      return self->ranks_below(a, b);
    }
  };
  std::priority_queue<Candidate, std::vector<Candidate>, Compare> heap_{Compare{this}};
};

}  // namespace

Tokenizer train_bpe(const WordCounts& words, const TrainingRegime& regime,
                    const TrainingOptions& options) {
  if (auto problem = check_end_of_word_marker(options.end_of_word_marker)) {
    throw ConfigError(*problem);
  }
  if (const auto* mc = std::get_if<MinCount>(&regime); mc && mc->count == 0) {
    throw ConfigError("min_count must be at least 1");
  }
  if (const auto* mv = std::get_if<MaxVocab>(&regime); mv && mv->size == 0) {
    throw ConfigError("max_vocab must be positive");
  }
  Trainer trainer(words, regime, options);
  if (const auto* mv = std::get_if<MaxVocab>(&regime)) {
    if (mv->size < trainer.minimum_vocab_size()) {
      throw ConfigError("max_vocab " + std::to_string(mv->size) +
                        " is smaller than the special tokens plus base alphabet; "
                        "minimum feasible size is " +
                        std::to_string(trainer.minimum_vocab_size()));
    }
  }
  return trainer.run();
}

Tokenizer train_bpe(const Corpus& corpus, const TrainingRegime& regime,
                    std::string end_of_word_marker) {
  return train_bpe(corpus.word_frequencies(), regime,
                   TrainingOptions{corpus.normalization(), std::move(end_of_word_marker)});
}

}  // namespace radtok
