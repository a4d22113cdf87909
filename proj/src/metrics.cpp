#include "radtok/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "radtok/error.hpp"

namespace radtok {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::uint64_t> count_ngrams(std::span<const std::string> words, int n) {
  std::map<Ngram, std::uint64_t> counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= words.size(); ++i) {
    ++counts[Ngram(words.begin() + i, words.begin() + i + len)];
  }
  return counts;
}

Score f1(double lcs, double hyp_len, double ref_len) {
  const double p = lcs / hyp_len;
  const double r = lcs / ref_len;
  return {2 * p * r / (p + r), false};
}

}  // namespace

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int k = 0; k < kMaxBleuOrder; ++k) {
    matches[k] += other.matches[k];
    totals[k] += other.totals[k];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats bleu_stats(std::span<const std::string> hyp,
                     std::span<const std::vector<std::string>> refs) {
  BleuStats s;
  s.hyp_len = hyp.size();
  std::size_t best = 0;
  bool first = true;
  for (const auto& ref : refs) {
    const auto diff = [&](std::size_t len) {
      return len > hyp.size() ? len - hyp.size() : hyp.size() - len;
    };
    if (first || diff(ref.size()) < diff(best) ||
        (diff(ref.size()) == diff(best) && ref.size() < best)) {
      best = ref.size();
      first = false;
    }
  }
  s.ref_len = best;

  for (int n = 1; n <= kMaxBleuOrder; ++n) {
    const auto hyp_counts = count_ngrams(hyp, n);
    std::map<Ngram, std::uint64_t> max_ref;
    for (const auto& ref : refs) {
      for (const auto& [gram, c] : count_ngrams(ref, n)) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, c);
      }
    }
    for (const auto& [gram, c] : hyp_counts) {
      auto it = max_ref.find(gram);
      s.matches[n - 1] += it == max_ref.end() ? 0 : std::min(c, it->second);
      s.totals[n - 1] += c;
    }
  }
  return s;
}

BleuResult bleu_from_stats(const BleuStats& stats, int max_n, bool smoothing) {
  if (max_n < 1 || max_n > kMaxBleuOrder) {
    throw ConfigError("BLEU order must be between 1 and 4, got " + std::to_string(max_n));
  }
  BleuResult result;
  if (stats.hyp_len == 0) {
    result.degenerate = true;
    for (int n = 1; n <= max_n; ++n) result.scores[n] = 0.0;
    return result;
  }
  const double c = static_cast<double>(stats.hyp_len);
  const double r = static_cast<double>(stats.ref_len);
  const double brevity = stats.hyp_len > stats.ref_len ? 1.0 : std::exp(1.0 - r / c);

  double log_sum = 0.0;
  bool zero = false;
  for (int n = 1; n <= max_n; ++n) {
    double m = static_cast<double>(stats.matches[n - 1]);
    double t = static_cast<double>(stats.totals[n - 1]);
    if (smoothing && n >= 2) {
      m += 1.0;
      t += 1.0;
    }
    if (t == 0.0 || m == 0.0) {
      zero = true;
      if (t == 0.0) result.degenerate = true;
    } else {
      log_sum += std::log(m / t);
    }
    result.scores[n] = zero ? 0.0 : brevity * std::exp(log_sum / n);
  }
  return result;
}

BleuResult bleu_n(std::string_view hypothesis, std::span<const std::string> references,
                  int max_n, const BleuOptions& options) {
  if (references.empty()) throw ConfigError("BLEU needs at least one reference");
  const auto hyp = normalize_words(hypothesis, options.normalization);
  std::vector<std::vector<std::string>> refs;
  for (const auto& ref : references) refs.push_back(normalize_words(ref, options.normalization));
  return bleu_from_stats(bleu_stats(hyp, refs), max_n, options.smoothing);
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Score rouge_l(std::string_view hypothesis, std::string_view reference,
              Normalization normalization) {
  const auto hyp = normalize_words(hypothesis, normalization);
  const auto ref = normalize_words(reference, normalization);
  if (hyp.empty() || ref.empty()) return {0.0, true};
  const auto lcs = lcs_length(hyp, ref);
  if (lcs == 0) return {0.0, false};
  return f1(static_cast<double>(lcs), static_cast<double>(hyp.size()),
            static_cast<double>(ref.size()));
}

Score meteor_exact(std::string_view hypothesis, std::string_view reference,
                   Normalization normalization) {
  const auto hyp = normalize_words(hypothesis, normalization);
  const auto ref = normalize_words(reference, normalization);
  if (hyp.empty() || ref.empty()) return {0.0, true};

  // Align each hypothesis word to an unused identical reference word,
  // preferring the position that extends the current chunk.
  std::vector<bool> used(ref.size(), false);
  std::vector<std::ptrdiff_t> align(hyp.size(), -1);
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (i > 0 && align[i - 1] >= 0) {
      const auto next = static_cast<std::size_t>(align[i - 1] + 1);
      if (next < ref.size() && !used[next] && ref[next] == hyp[i]) {
        align[i] = static_cast<std::ptrdiff_t>(next);
        used[next] = true;
        continue;
      }
    }
    for (std::size_t j = 0; j < ref.size(); ++j) {
      if (!used[j] && ref[j] == hyp[i]) {
        align[i] = static_cast<std::ptrdiff_t>(j);
        used[j] = true;
        break;
      }
    }
  }

  std::size_t matches = 0, chunks = 0;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (align[i] < 0) continue;
    ++matches;
    if (i == 0 || align[i - 1] < 0 || align[i] != align[i - 1] + 1) ++chunks;
  }
  if (matches == 0) return {0.0, false};

  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(hyp.size());
  const double r = m / static_cast<double>(ref.size());
  const double f_mean = 10 * p * r / (r + 9 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3);
  return {f_mean * (1 - penalty), false};
}

MetricReport evaluate_pairs(std::span<const std::string> hypotheses,
                            std::span<const std::string> references, int max_n,
                            const BleuOptions& options) {
  if (hypotheses.size() != references.size()) {
    throw InputError("hypothesis and reference counts differ (" +
                     std::to_string(hypotheses.size()) + " vs " +
                     std::to_string(references.size()) + ")");
  }
  if (hypotheses.empty()) throw InputError("no hypothesis/reference pairs to evaluate");

  MetricReport report;
  report.n_pairs = hypotheses.size();
  BleuStats total;
  double rouge_sum = 0, meteor_sum = 0;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto hyp = normalize_words(hypotheses[i], options.normalization);
    const std::vector<std::vector<std::string>> refs = {
        normalize_words(references[i], options.normalization)};
    total += bleu_stats(hyp, refs);
    const Score rl = rouge_l(hypotheses[i], references[i], options.normalization);
    const Score mt = meteor_exact(hypotheses[i], references[i], options.normalization);
    rouge_sum += rl.value;
    meteor_sum += mt.value;
    if (rl.degenerate || mt.degenerate) ++report.degenerate_pairs;
  }
  report.bleu = bleu_from_stats(total, max_n, options.smoothing).scores;
  report.rouge_l = rouge_sum / static_cast<double>(report.n_pairs);
  report.meteor = meteor_sum / static_cast<double>(report.n_pairs);
  return report;
}

nlohmann::ordered_json to_json(const MetricReport& report) {
  nlohmann::ordered_json bleu = nlohmann::ordered_json::object();
  for (const auto& [n, v] : report.bleu) bleu[std::to_string(n)] = v;
  return {{"bleu", bleu},
          {"rouge_l", report.rouge_l},
          {"meteor_exact", report.meteor},
          {"n_pairs", report.n_pairs},
          {"degenerate_pairs", report.degenerate_pairs}};
}

}  // namespace radtok
