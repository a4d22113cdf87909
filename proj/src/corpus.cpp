#include "radtok/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "radtok/error.hpp"
#include "radtok/tokenizer.hpp"

namespace radtok {
namespace {

using nlohmann::json;

std::string line_prefix(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::string string_field(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(line_prefix(line) + "missing field '" + name + "'");
  }
  if (!it->is_string()) {
    throw ParseError(line_prefix(line) + "field '" + name + "' must be a string");
  }
  return it->get<std::string>();
}

struct Moments {
  double mean;
  double std;
};

Moments population_moments(const std::vector<std::size_t>& xs) {
  double sum = 0;
  for (auto x : xs) sum += static_cast<double>(x);
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0;
  for (auto x : xs) ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::kJsonl;
  if (name == "plain") return CorpusFormat::kPlain;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

Section parse_section(std::string_view name) {
  if (name == "findings") return Section::kFindings;
  if (name == "conclusion") return Section::kConclusion;
  if (name == "both") return Section::kBoth;
  throw ConfigError("unknown section '" + std::string(name) + "'");
}

std::string_view to_string(Section s) {
  switch (s) {
    case Section::kFindings: return "findings";
    case Section::kConclusion: return "conclusion";
    case Section::kBoth: return "both";
  }
  return "unknown";
}

Corpus::Corpus(std::vector<CorpusDocument> documents, Normalization normalization)
    : documents_(std::move(documents)), normalization_(normalization) {
  std::unordered_set<std::string> ids;
  for (const auto& doc : documents_) {
    if (!ids.insert(doc.id).second) throw ParseError("duplicate document id '" + doc.id + "'");
    for (const auto* text : {&doc.findings, &doc.conclusion}) {
      for (auto& w : normalize_words(*text, normalization_)) ++word_frequencies_[std::move(w)];
    }
  }
}

Corpus parse_corpus(std::string_view content, CorpusFormat format,
                    Normalization normalization) {
  if (auto bad = find_invalid_utf8(content)) {
    throw ParseError("invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::vector<CorpusDocument> docs;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    CorpusDocument doc;
    if (format == CorpusFormat::kPlain) {
      doc.id = std::to_string(docs.size());
      doc.findings = std::string(line);
    } else {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(line_prefix(line_no) + "invalid JSON (" + e.what() + ")");
      }
      if (!obj.is_object()) throw ParseError(line_prefix(line_no) + "expected a JSON object");
      doc.findings = string_field(obj, "findings", line_no);
      doc.conclusion = string_field(obj, "conclusion", line_no);
      if (auto it = obj.find("id"); it != obj.end() && !it->is_null()) {
        if (it->is_string()) {
          doc.id = it->get<std::string>();
        } else if (it->is_number_integer()) {
          doc.id = it->dump();
        } else {
          throw ParseError(line_prefix(line_no) + "field 'id' must be a string or integer");
        }
      } else {
        doc.id = std::to_string(docs.size());
      }
    }
    if (!ids.insert(doc.id).second) {
      throw ParseError(line_prefix(line_no) + "duplicate document id '" + doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), normalization);
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   Normalization normalization) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file '" + path.string() + "'");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_corpus(content, format, normalization);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents()) {
    nlohmann::ordered_json obj;
    obj["id"] = doc.id;
    obj["findings"] = doc.findings;
    obj["conclusion"] = doc.conclusion;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.n_reports = corpus.size();
  stats.n_unique_words = corpus.word_frequencies().size();
  if (corpus.empty()) return stats;

  std::vector<std::size_t> findings, conclusions;
  for (const auto& doc : corpus.documents()) {
    findings.push_back(normalize_words(doc.findings, corpus.normalization()).size());
    conclusions.push_back(normalize_words(doc.conclusion, corpus.normalization()).size());
  }
  const auto f = population_moments(findings);
  const auto c = population_moments(conclusions);
  stats.findings_len_mean = f.mean;
  stats.findings_len_std = f.std;
  stats.conclusion_len_mean = c.mean;
  stats.conclusion_len_std = c.std;
  return stats;
}

nlohmann::ordered_json to_json(const CorpusStats& stats) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  return {{"n_reports", stats.n_reports},
          {"findings_len_mean", opt(stats.findings_len_mean)},
          {"findings_len_std", opt(stats.findings_len_std)},
          {"conclusion_len_mean", opt(stats.conclusion_len_mean)},
          {"conclusion_len_std", opt(stats.conclusion_len_std)},
          {"n_unique_words", stats.n_unique_words}};
}

std::size_t nearest_rank(std::span<const std::size_t> values, double pct) {
  if (!(pct > 0.0 && pct <= 1.0)) {
    throw ConfigError("percentile must lie in (0, 1], got " + std::to_string(pct));
  }
  if (values.empty()) throw InputError("percentile is undefined for an empty corpus");
  std::vector<std::size_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(pct * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::vector<std::size_t> document_token_lengths(const Corpus& corpus,
                                                const Tokenizer& tokenizer,
                                                Section section) {
  std::vector<std::size_t> lengths;
  lengths.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) {
    std::size_t n = 0;
    if (section != Section::kConclusion) n += tokenizer.encode(doc.findings).length();
    if (section != Section::kFindings) n += tokenizer.encode(doc.conclusion).length();
    lengths.push_back(n);
  }
  return lengths;
}

std::size_t length_percentile(const Corpus& corpus, const Tokenizer& tokenizer,
                              Section section, double pct) {
  if (!(pct > 0.0 && pct <= 1.0)) {
    throw ConfigError("percentile must lie in (0, 1], got " + std::to_string(pct));
  }
  if (corpus.empty()) throw InputError("percentile is undefined for an empty corpus");
  return nearest_rank(document_token_lengths(corpus, tokenizer, section), pct);
}

}  // namespace radtok
