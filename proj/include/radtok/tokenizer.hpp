#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "radtok/text.hpp"

namespace radtok {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kBosId = 2;
inline constexpr TokenId kEosId = 3;
inline constexpr std::array<std::string_view, 4> kSpecialTokenNames = {
    "<pad>", "<unk>", "<s>", "</s>"};
inline constexpr std::string_view kDefaultEndOfWordMarker = "</w>";

struct SpecialToken {
  std::string name;
  TokenId id = 0;
};

// Bidirectional token <-> id map. Ids are contiguous from 0 and the four
// special tokens always occupy ids 0..3.
class Vocabulary {
 public:
  Vocabulary();

  // Rebuilds from tokens listed in id order. Throws InvariantError on
  // duplicates or misplaced specials.
  static Vocabulary from_tokens(std::vector<std::string> tokens_by_id);

  // Returns the existing id when the token is already present.
  TokenId add(const std::string& token);

  std::optional<TokenId> find(const std::string& token) const;
  bool contains(TokenId id) const {
    return id >= 0 && static_cast<std::size_t>(id) < id_to_token_.size();
  }
  // Precondition: contains(id).
  const std::string& token(TokenId id) const { return id_to_token_[id]; }
  std::size_t size() const { return id_to_token_.size(); }
  std::vector<SpecialToken> special_tokens() const;
  static bool is_special(TokenId id) { return id >= 0 && id < 4; }

  const std::vector<std::string>& tokens() const { return id_to_token_; }

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

struct Merge {
  std::string left;
  std::string right;
  std::string result() const { return left + right; }
  friend bool operator==(const Merge&, const Merge&) = default;
};

struct TokenSequence {
  std::vector<TokenId> ids;
  std::size_t length() const { return ids.size(); }
  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// Training metadata recorded alongside the learned artifact.
struct TrainingRecord {
  std::optional<std::uint64_t> min_count;
  std::optional<std::uint64_t> max_vocab;
  friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

// A trained BPE tokenizer: vocabulary, ordered merge table and the
// normalization used to pre-tokenize text. Immutable once built; encode and
// decode are safe to call from many threads.
class Tokenizer {
 public:
  // Validates every structural invariant and throws InvariantError when one
  // fails: merge inputs must be base symbols or earlier results, results must
  // be in the vocabulary, pairs are unique, and no non-special token contains
  // a special token.
  Tokenizer(Vocabulary vocab, std::vector<Merge> merges,
            Normalization normalization,
            std::string end_of_word_marker = std::string(kDefaultEndOfWordMarker),
            TrainingRecord training = {});

  TokenSequence encode(std::string_view text) const;
  // Segments one already-normalized word, end-of-word marker included.
  std::vector<TokenId> encode_word(std::string_view word) const;
  // Throws InputError naming the offending id and the vocabulary size.
  std::string decode(const TokenSequence& seq) const;

  // Token string with the end-of-word marker removed; UNK renders as U+FFFD.
  std::string display_token(TokenId id) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<Merge>& merges() const { return merges_; }
  Normalization normalization() const { return normalization_; }
  const std::string& end_of_word_marker() const { return marker_; }
  const TrainingRecord& training() const { return training_; }
  std::size_t vocab_size() const { return vocab_.size(); }

  // The same tokenizer with its last merge dropped (and its result token, if
  // no longer produced). Used to study fragmentation monotonicity.
  Tokenizer without_last_merge() const;

 private:
  struct Rule {
    std::uint32_t rank;
    TokenId result;
  };
  static std::uint64_t pair_key(TokenId left, TokenId right) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
           static_cast<std::uint32_t>(right);
  }
  void apply_merges(std::vector<TokenId>& symbols) const;

  Vocabulary vocab_;
  std::vector<Merge> merges_;
  Normalization normalization_;
  std::string marker_;
  TrainingRecord training_;
  std::unordered_map<std::uint64_t, Rule> rules_;
};

// Requirements on a custom end-of-word marker: at least two code points and
// at least one ASCII punctuation character, so that it can never be spelled by
// the characters of a normalized word. Returns an explanation when invalid.
std::optional<std::string> check_end_of_word_marker(std::string_view marker);

}  // namespace radtok
