#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "radtok/tokenizer.hpp"

namespace radtok {

class Corpus;

// Fixed-size regime: merge until the vocabulary (specials included) holds
// `size` tokens or no pair occurs at least twice.
struct MaxVocab {
  std::uint64_t size = 0;
};

// Thresholded regime: pairs seen fewer than `count` times are never merged;
// training ends once every word seen at least `count` times is one token.
struct MinCount {
  std::uint64_t count = 0;
};

using TrainingRegime = std::variant<MaxVocab, MinCount>;

struct TrainingOptions {
  Normalization normalization = Normalization::kLowercaseWhitespace;
  std::string end_of_word_marker = std::string(kDefaultEndOfWordMarker);
};

// Greedy BPE: repeatedly merges the most frequent adjacent symbol pair, ties
// broken by the lexicographically smallest (left, right). Words are split into
// characters followed by a standalone end-of-word marker symbol.
//
// Throws ConfigError for a zero regime parameter, an invalid marker, or a
// max_vocab below the specials plus base alphabet (the message names the
// minimum feasible size).
Tokenizer train_bpe(const WordCounts& words, const TrainingRegime& regime,
                    const TrainingOptions& options = {});

// Trains on the corpus word frequencies with the corpus normalization.
Tokenizer train_bpe(const Corpus& corpus, const TrainingRegime& regime,
                    std::string end_of_word_marker = std::string(kDefaultEndOfWordMarker));

}  // namespace radtok
