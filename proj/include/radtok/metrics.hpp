#pragma once

#include <array>
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

// A score in [0, 1]. `degenerate` marks inputs for which the metric is not
// meaningful (empty texts, missing n-gram orders); the score is then 0 unless
// smoothing supplied a value.
struct Score {
  double value = 0.0;
  bool degenerate = false;
};

inline constexpr int kMaxBleuOrder = 4;

// Clipped n-gram matches and totals per order, plus lengths. Sums across
// sentences give corpus-level BLEU.
struct BleuStats {
  std::array<std::uint64_t, kMaxBleuOrder> matches{};
  std::array<std::uint64_t, kMaxBleuOrder> totals{};
  std::uint64_t hyp_len = 0;
  std::uint64_t ref_len = 0;  // closest reference length, ties to the shorter
  BleuStats& operator+=(const BleuStats& other);
};

struct BleuOptions {
  bool smoothing = false;  // add-one on orders >= 2 (Lin and Och)
  Normalization normalization = Normalization::kLowercaseWhitespace;
};

struct BleuResult {
  std::map<int, double> scores;  // n -> BLEU-n for n in 1..max_n
  bool degenerate = false;
};

BleuStats bleu_stats(std::span<const std::string> hyp,
                     std::span<const std::vector<std::string>> refs);
BleuResult bleu_from_stats(const BleuStats& stats, int max_n, bool smoothing);

// Sentence BLEU-1..max_n: clipped modified precision, geometric mean,
// brevity penalty exp(1 - r/c) when c <= r. Throws ConfigError unless
// 1 <= max_n <= 4 and at least one reference is given.
BleuResult bleu_n(std::string_view hypothesis, std::span<const std::string> references,
                  int max_n, const BleuOptions& options = {});

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

// F1 of the longest common word subsequence.
Score rouge_l(std::string_view hypothesis, std::string_view reference,
              Normalization normalization = Normalization::kLowercaseWhitespace);

// METEOR restricted to exact unigram matches: F_mean = 10PR / (R + 9P) and a
// fragmentation penalty 0.5 (chunks / m)^3.
Score meteor_exact(std::string_view hypothesis, std::string_view reference,
                   Normalization normalization = Normalization::kLowercaseWhitespace);

struct MetricReport {
  std::map<int, double> bleu;
  double rouge_l = 0.0;
  double meteor = 0.0;
  std::size_t n_pairs = 0;
  std::size_t degenerate_pairs = 0;
};

// Corpus BLEU over aligned pairs, with ROUGE-L and METEOR averaged per pair.
// Throws InputError when the lists differ in length or are empty.
MetricReport evaluate_pairs(std::span<const std::string> hypotheses,
                            std::span<const std::string> references, int max_n = 4,
                            const BleuOptions& options = {});

nlohmann::ordered_json to_json(const MetricReport& report);

}  // namespace radtok
