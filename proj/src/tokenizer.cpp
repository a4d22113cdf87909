#include "radtok/tokenizer.hpp"

#include <limits>
#include <unordered_set>
#include <utility>

#include "radtok/error.hpp"

namespace radtok {

Vocabulary::Vocabulary() {
  for (const auto name : kSpecialTokenNames) add(std::string(name));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens_by_id) {
  if (tokens_by_id.size() < kSpecialTokenNames.size()) {
    throw InvariantError("vocabulary has " + std::to_string(tokens_by_id.size()) +
                         " entries; the 4 special tokens are required");
  }
  for (std::size_t i = 0; i < kSpecialTokenNames.size(); ++i) {
    if (tokens_by_id[i] != kSpecialTokenNames[i]) {
      throw InvariantError("special token '" + std::string(kSpecialTokenNames[i]) +
                           "' must have id " + std::to_string(i));
    }
  }
  Vocabulary v;
  for (std::size_t i = kSpecialTokenNames.size(); i < tokens_by_id.size(); ++i) {
    if (v.find(tokens_by_id[i])) {
      throw InvariantError("duplicate token '" + tokens_by_id[i] + "' in vocabulary");
    }
    v.add(tokens_by_id[i]);
  }
  return v;
}

TokenId Vocabulary::add(const std::string& token) {
  if (auto it = token_to_id_.find(token); it != token_to_id_.end()) return it->second;
  if (id_to_token_.size() >= static_cast<std::size_t>(std::numeric_limits<TokenId>::max())) {
    throw OverflowError("vocabulary exceeds the token id range");
  }
  const auto id = static_cast<TokenId>(id_to_token_.size());
  id_to_token_.push_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

std::optional<TokenId> Vocabulary::find(const std::string& token) const {
  if (auto it = token_to_id_.find(token); it != token_to_id_.end()) return it->second;
  return std::nullopt;
}

std::vector<SpecialToken> Vocabulary::special_tokens() const {
  std::vector<SpecialToken> out;
  for (std::size_t i = 0; i < kSpecialTokenNames.size(); ++i) {
    out.push_back({std::string(kSpecialTokenNames[i]), static_cast<TokenId>(i)});
  }
  return out;
}

std::optional<std::string> check_end_of_word_marker(std::string_view marker) {
  if (find_invalid_utf8(marker)) return "end-of-word marker is not valid UTF-8";
  if (split_codepoints(marker).size() < 2) {
    return "end-of-word marker must span at least two characters";
  }
  bool has_punct = false;
  for (char c : marker) has_punct = has_punct || is_ascii_punct(c);
  if (!has_punct) return "end-of-word marker must contain an ASCII punctuation character";
  return std::nullopt;
}

Tokenizer::Tokenizer(Vocabulary vocab, std::vector<Merge> merges,
                     Normalization normalization, std::string end_of_word_marker,
                     TrainingRecord training)
    : vocab_(std::move(vocab)),
      merges_(std::move(merges)),
      normalization_(normalization),
      marker_(std::move(end_of_word_marker)),
      training_(training) {
  if (auto problem = check_end_of_word_marker(marker_)) throw InvariantError(*problem);

  std::unordered_set<std::string> results;
  for (const auto& m : merges_) results.insert(m.result());

  std::unordered_set<std::string> available;
  for (std::size_t id = kSpecialTokenNames.size(); id < vocab_.size(); ++id) {
    const auto& tok = vocab_.token(static_cast<TokenId>(id));
    for (const auto special : kSpecialTokenNames) {
      if (tok.find(special) != std::string::npos) {
        throw InvariantError("token '" + tok + "' contains special token '" +
                             std::string(special) + "'");
      }
    }
    if (results.contains(tok)) continue;
    if (tok != marker_ && split_codepoints(tok).size() != 1) {
      throw InvariantError("base symbol '" + tok +
                           "' is neither a single character nor the end-of-word marker");
    }
    available.insert(tok);
  }

  rules_.reserve(merges_.size());
  for (std::size_t rank = 0; rank < merges_.size(); ++rank) {
    const Merge& m = merges_[rank];
    const std::string where = "merge " + std::to_string(rank) + " ('" + m.left +
                              "' '" + m.right + "')";
    for (const auto* input : {&m.left, &m.right}) {
      if (!available.contains(*input)) {
        throw InvariantError(where + ": input '" + *input +
                             "' is neither a base symbol nor an earlier merge result");
      }
    }
    const auto result = vocab_.find(m.result());
    if (!result) throw InvariantError(where + ": result missing from vocabulary");
    const auto key = pair_key(*vocab_.find(m.left), *vocab_.find(m.right));
    if (!rules_.emplace(key, Rule{static_cast<std::uint32_t>(rank), *result}).second) {
      throw InvariantError(where + ": duplicate merge pair");
    }
    available.insert(m.result());
  }
}

void Tokenizer::apply_merges(std::vector<TokenId>& symbols) const {
  // Replays the merge table in order: each round applies the lowest-ranked
  // pair that is present and ranked after the previously applied merge.
  std::int64_t last_rank = -1;
  std::vector<TokenId> next;
  while (symbols.size() > 1) {
    std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
    std::uint64_t best_key = 0;
    TokenId best_result = kUnkId;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      const auto key = pair_key(symbols[i], symbols[i + 1]);
      auto it = rules_.find(key);
      if (it == rules_.end()) continue;
      const Rule& rule = it->second;
      if (static_cast<std::int64_t>(rule.rank) > last_rank && rule.rank < best_rank) {
        best_rank = rule.rank;
        best_key = key;
        best_result = rule.result;
      }
    }
    if (best_rank == std::numeric_limits<std::uint32_t>::max()) break;

    next.clear();
    for (std::size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && pair_key(symbols[i], symbols[i + 1]) == best_key) {
        next.push_back(best_result);
        i += 2;
      } else {
        next.push_back(symbols[i]);
        ++i;
      }
    }
    symbols.swap(next);
    last_rank = best_rank;
  }
}

std::vector<TokenId> Tokenizer::encode_word(std::string_view word) const {
  std::vector<TokenId> symbols;
  if (word.empty()) return symbols;
  for (const auto& ch : split_codepoints(word)) {
    symbols.push_back(vocab_.find(ch).value_or(kUnkId));
  }
  symbols.push_back(vocab_.find(marker_).value_or(kUnkId));
  apply_merges(symbols);
  return symbols;
}

TokenSequence Tokenizer::encode(std::string_view text) const {
  TokenSequence seq;
  for (const auto& word : normalize_words(text, normalization_)) {
    const auto ids = encode_word(word);
    seq.ids.insert(seq.ids.end(), ids.begin(), ids.end());
  }
  return seq;
}

std::string Tokenizer::display_token(TokenId id) const {
  if (id == kUnkId) return std::string(kReplacementChar);
  const std::string& tok = vocab_.token(id);
  if (tok.ends_with(marker_)) return tok.substr(0, tok.size() - marker_.size());
  return tok;
}

std::string Tokenizer::decode(const TokenSequence& seq) const {
  std::string out;
  for (const TokenId id : seq.ids) {
    if (!vocab_.contains(id)) {
      throw InputError("token id " + std::to_string(id) +
                       " is out of range for a vocabulary of size " +
                       std::to_string(vocab_.size()));
    }
    if (id == kUnkId) {
      out += kReplacementChar;
      continue;
    }
    if (Vocabulary::is_special(id)) continue;
    const std::string& tok = vocab_.token(id);
    if (tok.ends_with(marker_)) {
      out.append(tok, 0, tok.size() - marker_.size());
      out += ' ';
    } else {
      out += tok;
    }
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

Tokenizer Tokenizer::without_last_merge() const {
  if (merges_.empty()) return *this;
  std::vector<Merge> merges(merges_.begin(), merges_.end() - 1);
  const std::string dropped = merges_.back().result();
  bool still_produced = false;
  for (const auto& m : merges) still_produced = still_produced || m.result() == dropped;

  std::vector<std::string> tokens = vocab_.tokens();
  if (!still_produced && tokens.back() == dropped) tokens.pop_back();
  return Tokenizer(Vocabulary::from_tokens(std::move(tokens)), std::move(merges),
                   normalization_, marker_, training_);
}

}  // namespace radtok
