#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library code paths they check.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace radtok::oracle {

struct OracleMerge {
  std::string left;
  std::string right;
  friend bool operator==(const OracleMerge&, const OracleMerge&) = default;
};

// Brute-force greedy BPE over ASCII words: every round recounts all adjacent
// pairs from scratch. `min_count` selects the thresholded regime, otherwise
// `max_vocab` (specials included) the fixed-size one.
inline std::vector<OracleMerge> brute_force_bpe(const std::map<std::string, std::uint64_t>& words,
                                                std::optional<std::uint64_t> min_count,
                                                std::optional<std::uint64_t> max_vocab,
                                                const std::string& marker = "</w>") {
  std::vector<std::pair<std::vector<std::string>, std::uint64_t>> segs;
  std::map<std::string, bool> vocab;
  for (const auto& [w, f] : words) {
    std::vector<std::string> s;
    for (char c : w) {
      s.emplace_back(1, c);
      vocab[std::string(1, c)] = true;
    }
    s.push_back(marker);
    vocab[marker] = true;
    segs.emplace_back(std::move(s), f);
  }
  std::vector<OracleMerge> merges;
  for (;;) {
    const std::uint64_t vocab_size = 4 + vocab.size();
    if (max_vocab && vocab_size >= *max_vocab) break;
    if (min_count) {
      bool all_single = true;
      for (const auto& [s, f] : segs) {
        if (f >= *min_count && s.size() > 1) all_single = false;
      }
      if (all_single) break;
    }
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& [s, f] : segs) {
      for (std::size_t i = 0; i + 1 < s.size(); ++i) counts[{s[i], s[i + 1]}] += f;
    }
    if (counts.empty()) break;
    // std::map iterates pairs in lexicographic order, so the first maximum
    // is the tie-break winner.
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    const std::uint64_t threshold = min_count ? *min_count : 2;
    if (best->second < threshold) break;
    const auto [left, right] = best->first;
    merges.push_back({left, right});
    vocab[left + right] = true;
    for (auto& [s, f] : segs) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < s.size();) {
        if (i + 1 < s.size() && s[i] == left && s[i + 1] == right) {
          out.push_back(left + right);
          i += 2;
        } else {
          out.push_back(s[i++]);
        }
      }
      s = std::move(out);
    }
  }
  return merges;
}

// Activation elements evaluated one monomial at a time in 128-bit arithmetic.
struct ActivationTerms {
  unsigned __int128 embed_head;   // 2BSV
  unsigned __int128 hidden;       // 2BSD
  unsigned __int128 block_linear; // N * 16BSD
  unsigned __int128 block_quad;   // N * 2BS^2H
  unsigned __int128 total() const { return embed_head + hidden + block_linear + block_quad; }
};

inline ActivationTerms activation_terms(std::uint64_t B, std::uint64_t S, std::uint64_t V,
                                        std::uint64_t D, std::uint64_t H, std::uint64_t N) {
  using U = unsigned __int128;
  return {U(2) * B * S * V, U(2) * B * S * D, U(N) * 16 * B * S * D, U(N) * 2 * B * S * S * H};
}

// Longest common subsequence by enumerating every subsequence of `a`.
inline std::size_t brute_force_lcs(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) sub.push_back(a[i]);
    }
    if (sub.size() <= best) continue;
    std::size_t j = 0;
    for (std::size_t i = 0; i < b.size() && j < sub.size(); ++i) {
      if (b[i] == sub[j]) ++j;
    }
    if (j == sub.size()) best = sub.size();
  }
  return best;
}

}  // namespace radtok::oracle
