#include "radtok/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "radtok/bpe_trainer.hpp"
#include "radtok/compare.hpp"
#include "radtok/corpus.hpp"
#include "radtok/error.hpp"
#include "radtok/fragmentation.hpp"
#include "radtok/manifest.hpp"
#include "radtok/memory_model.hpp"
#include "radtok/metrics.hpp"
#include "radtok/tokenizer_io.hpp"

namespace radtok::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CommonFlags {
  std::string out;
  std::string format = "json";
  std::string manifest;
  bool quiet = false;
  std::optional<std::int64_t> seed;
};

struct ModelFlags {
  std::string config;
  std::optional<std::uint64_t> batch, seq_len, vocab, hidden, heads, blocks, ffn;
  std::uint64_t bytes = 4;
  std::uint64_t moments = 2;
  bool tied = false;
};

struct CommandResult {
  std::string body;
  RunManifest manifest;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--out", flags.out, "Write the result to this file instead of stdout");
  sub->add_option("--format", flags.format, "Output format")
      ->check(CLI::IsMember({"json", "tsv"}));
  sub->add_option("--manifest", flags.manifest, "Also write the run manifest to this file");
  sub->add_flag("--quiet", flags.quiet, "Suppress progress messages");
  sub->add_option("--seed", flags.seed, "Recorded in the manifest; all commands are deterministic");
}

void add_model(CLI::App* sub, ModelFlags& flags) {
  sub->add_option("--config", flags.config, "Model config JSON {B,S,V,D,H,N,D_ff}");
  sub->add_option("-B,--batch", flags.batch, "Batch size");
  sub->add_option("-S,--seq-len", flags.seq_len, "Sequence length");
  sub->add_option("-V,--vocab", flags.vocab, "Vocabulary size");
  sub->add_option("-D,--hidden", flags.hidden, "Hidden dimension");
  sub->add_option("-H,--heads", flags.heads, "Attention heads");
  sub->add_option("-N,--blocks", flags.blocks, "Attention blocks");
  sub->add_option("--ffn", flags.ffn, "Feed-forward dimension");
  sub->add_option("--bytes", flags.bytes, "Bytes per element")->check(CLI::IsMember({1, 2, 4, 8}));
  sub->add_option("--moments", flags.moments, "Optimizer moments per parameter");
  sub->add_flag("--tied", flags.tied, "Tie input and output embeddings");
}

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + what + " '" + path.string() + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

std::vector<std::string> read_lines(const fs::path& path, const char* what) {
  const std::string content = read_file(path, what);
  if (auto bad = find_invalid_utf8(content)) {
    throw ParseError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  std::vector<std::string> lines;
  std::istringstream in(content);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Defaults, then the config file, then explicit flags.
ModelConfig resolve_model(const ModelFlags& flags, ModelConfig defaults, RunManifest& manifest) {
  ModelConfig cfg = defaults;
  if (!flags.config.empty()) {
    const std::string text = read_file(flags.config, "model config");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(flags.config + ": " + e.what());
    }
    cfg = model_config_from_json(j, cfg);
    manifest.input_digests[flags.config] = file_digest(flags.config);
  }
  if (flags.batch) cfg.batch = *flags.batch;
  if (flags.seq_len) cfg.seq_len = *flags.seq_len;
  if (flags.vocab) cfg.vocab = *flags.vocab;
  if (flags.hidden) cfg.hidden = *flags.hidden;
  if (flags.heads) cfg.heads = *flags.heads;
  if (flags.blocks) cfg.blocks = *flags.blocks;
  if (flags.ffn) cfg.ffn = *flags.ffn;
  return cfg;
}

MemoryOptions memory_options(const ModelFlags& flags) {
  return MemoryOptions{flags.bytes, flags.moments, flags.tied};
}

std::string tokenizer_name(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<NamedTokenizer> load_tokenizers(const std::vector<std::string>& paths,
                                            RunManifest& manifest) {
  std::vector<NamedTokenizer> out;
  for (const auto& p : paths) {
    out.push_back({tokenizer_name(p), load_tokenizer(p)});
    manifest.input_digests[p] = file_digest(p);
  }
  return out;
}

Json record_parameters(const CLI::App* sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    const auto& results = opt->results();
    std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (opt->get_expected_max() > 1 || results.size() > 1) {
      params[key] = results;
    } else if (!results.empty()) {
      params[key] = results.front();
    } else {
      params[key] = true;
    }
  }
  return params;
}

RunManifest make_manifest(std::string command, const CLI::App* sub) {
  RunManifest m;
  m.command = std::move(command);
  m.parameters = record_parameters(sub);
  return m;
}

std::string json_body(const Json& j) { return j.dump(2) + "\n"; }

std::string kv_tsv(const Json& j) {
  std::string out;
  for (const auto& [key, value] : j.items()) {
    out += key + "\t" + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"BPE tokenizer workbench for report corpora", "radtok"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  CommonFlags common;
  ModelFlags model;
  std::function<CommandResult()> action;

  // train
  std::string corpus_path, corpus_format = "jsonl", normalization = "lowercase_whitespace";
  std::string marker(kDefaultEndOfWordMarker);
  std::optional<std::uint64_t> min_count, max_vocab;
  auto* train = app.add_subcommand("train", "Train a BPE tokenizer on a corpus");
  train->add_option("--corpus", corpus_path, "Corpus file")->required();
  train->add_option("--corpus-format", corpus_format)->check(CLI::IsMember({"jsonl", "plain"}));
  train->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"lowercase_whitespace", "preserve_case"}));
  train->add_option("--marker", marker, "End-of-word marker");
  auto* min_opt = train->add_option("--min-count", min_count,
                                    "Thresholded regime: merge until every word seen this often is one token");
  auto* max_opt = train->add_option("--max-vocab", max_vocab, "Fixed-size regime: target vocabulary size");
  min_opt->excludes(max_opt);
  max_opt->excludes(min_opt);
  add_common(train, common);
  train->callback([&] {
    action = [&]() -> CommandResult {
      if (!min_count && !max_vocab) {
        throw ConfigError("one of --min-count or --max-vocab is required");
      }
      RunManifest manifest = make_manifest("train", train);
      const Corpus corpus = load_corpus(corpus_path, parse_corpus_format(corpus_format),
                                        parse_normalization(normalization));
      manifest.input_digests[corpus_path] = file_digest(corpus_path);
      const TrainingRegime regime =
          min_count ? TrainingRegime{MinCount{*min_count}} : TrainingRegime{MaxVocab{*max_vocab}};
      const Tokenizer tok = train_bpe(corpus, regime, marker);
      if (!common.quiet) {
        err << "trained tokenizer: " << tok.vocab_size() << " tokens, " << tok.merges().size()
            << " merges\n";
      }
      return {serialize_tokenizer(tok), std::move(manifest)};
    };
  });

  // encode
  std::string tokenizer_path, text, input_path;
  auto* encode = app.add_subcommand("encode", "Encode text to token ids");
  encode->add_option("--tokenizer", tokenizer_path)->required();
  auto* text_opt = encode->add_option("--text", text, "Text to encode");
  auto* input_opt = encode->add_option("--input", input_path, "Encode each line of this file");
  text_opt->excludes(input_opt);
  add_common(encode, common);
  encode->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("encode", encode);
      const Tokenizer tok = load_tokenizer(tokenizer_path);
      manifest.input_digests[tokenizer_path] = file_digest(tokenizer_path);
      std::vector<std::string> inputs;
      if (!input_path.empty()) {
        inputs = read_lines(input_path, "input file");
        manifest.input_digests[input_path] = file_digest(input_path);
      } else {
        inputs.push_back(text);
      }
      std::string body;
      for (const auto& line : inputs) {
        const auto ids = tok.encode(line).ids;
        if (common.format == "tsv") {
          for (std::size_t i = 0; i < ids.size(); ++i) body += (i ? "\t" : "") + std::to_string(ids[i]);
          body += "\n";
        } else {
          body += Json(ids).dump() + "\n";
        }
      }
      return {body, std::move(manifest)};
    };
  });

  // decode
  std::string ids_text;
  auto* decode = app.add_subcommand("decode", "Decode token ids to text");
  decode->add_option("--tokenizer", tokenizer_path)->required();
  decode->add_option("--ids", ids_text, "Ids as a JSON array or separated by spaces/commas")
      ->required();
  add_common(decode, common);
  decode->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("decode", decode);
      const Tokenizer tok = load_tokenizer(tokenizer_path);
      manifest.input_digests[tokenizer_path] = file_digest(tokenizer_path);
      std::string cleaned = ids_text;
      for (char& c : cleaned) {
        if (c == '[' || c == ']' || c == ',') c = ' ';
      }
      TokenSequence seq;
      std::istringstream in(cleaned);
      for (std::string item; in >> item;) {
        try {
          std::size_t used = 0;
          const long long v = std::stoll(item, &used);
          if (used != item.size()) throw std::invalid_argument(item);
          if (v < std::numeric_limits<TokenId>::min() || v > std::numeric_limits<TokenId>::max()) {
            throw InputError("token id " + item + " is out of range for a vocabulary of size " +
                             std::to_string(tok.vocab_size()));
          }
          seq.ids.push_back(static_cast<TokenId>(v));
        } catch (const std::logic_error&) {
          throw ParseError("invalid token id '" + item + "'");
        }
      }
      const std::string decoded = tok.decode(seq);
      return {common.format == "tsv" ? decoded + "\n" : Json(decoded).dump() + "\n",
              std::move(manifest)};
    };
  });

  // stats
  std::vector<std::string> tokenizer_paths;
  double pct = 0.9;
  std::string section = "both";
  auto* stats = app.add_subcommand("stats", "Corpus statistics and sequence-length percentile");
  stats->add_option("--corpus", corpus_path)->required();
  stats->add_option("--corpus-format", corpus_format)->check(CLI::IsMember({"jsonl", "plain"}));
  stats->add_option("--normalization", normalization)
      ->check(CLI::IsMember({"lowercase_whitespace", "preserve_case"}));
  stats->add_option("--tokenizer", tokenizer_paths, "Report the percentile length under these tokenizers");
  stats->add_option("--pct", pct, "Percentile as a fraction in (0, 1]");
  stats->add_option("--section", section)->check(CLI::IsMember({"findings", "conclusion", "both"}));
  add_common(stats, common);
  stats->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("stats", stats);
      const Corpus corpus = load_corpus(corpus_path, parse_corpus_format(corpus_format),
                                        parse_normalization(normalization));
      manifest.input_digests[corpus_path] = file_digest(corpus_path);
      Json j = to_json(corpus_stats(corpus));
      const auto tokenizers = load_tokenizers(tokenizer_paths, manifest);
      if (!tokenizers.empty()) {
        Json lengths = Json::array();
        for (const auto& [name, tok] : tokenizers) {
          lengths.push_back({{"tokenizer", name},
                             {"pct", pct},
                             {"section", std::string(to_string(parse_section(section)))},
                             {"S", length_percentile(corpus, tok, parse_section(section), pct)}});
        }
        j["seq_len"] = lengths;
      }
      if (common.format == "tsv") {
        Json flat = j;
        flat.erase("seq_len");
        std::string body = kv_tsv(flat);
        if (j.contains("seq_len")) {
          for (const auto& row : j["seq_len"]) {
            body += "S[" + row["tokenizer"].get<std::string>() + "]\t" + row["S"].dump() + "\n";
          }
        }
        return {body, std::move(manifest)};
      }
      return {json_body(j), std::move(manifest)};
    };
  });

  // fragmentation
  std::vector<std::string> words;
  std::string words_file;
  bool per_word = false;
  auto* frag = app.add_subcommand("fragmentation", "Tokens per word and subword splits");
  frag->add_option("--tokenizer", tokenizer_paths)->required();
  frag->add_option("--corpus", corpus_path, "Measure tokens per word on this corpus");
  frag->add_option("--corpus-format", corpus_format)->check(CLI::IsMember({"jsonl", "plain"}));
  frag->add_option("--word", words, "Word to split (repeatable)");
  frag->add_option("--words-file", words_file, "One word per line");
  frag->add_flag("--per-word", per_word, "Include per-word token counts");
  add_common(frag, common);
  frag->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("fragmentation", frag);
      const auto named = load_tokenizers(tokenizer_paths, manifest);
      std::vector<std::string> all_words = words;
      if (!words_file.empty()) {
        for (auto& w : read_lines(words_file, "words file")) {
          if (!w.empty()) all_words.push_back(std::move(w));
        }
        manifest.input_digests[words_file] = file_digest(words_file);
      }
      if (corpus_path.empty() && all_words.empty()) {
        throw ConfigError("fragmentation needs --corpus and/or --word/--words-file");
      }
      std::vector<Tokenizer> toks;
      for (const auto& n : named) toks.push_back(n.tokenizer);

      Json j = Json::object();
      std::string tsv;
      if (!corpus_path.empty()) {
        const Corpus corpus = load_corpus(corpus_path, parse_corpus_format(corpus_format));
        manifest.input_digests[corpus_path] = file_digest(corpus_path);
        Json per_tok = Json::object();
        tsv += "tokenizer\ttokens_per_word\n";
        for (const auto& [name, tok] : named) {
          const auto fs_stats = tokens_per_word(tok, corpus);
          per_tok[name] = to_json(fs_stats, per_word);
          tsv += name + "\t" + Json(fs_stats.tokens_per_word_mean).dump() + "\n";
        }
        j["tokens_per_word"] = per_tok;
      }
      if (!all_words.empty()) {
        const auto rows = fragmentation_table(toks, all_words);
        Json table = Json::array();
        if (!tsv.empty()) tsv += "\n";
        tsv += "word";
        for (const auto& n : named) tsv += "\t" + n.name;
        tsv += "\n";
        for (const auto& row : rows) {
          Json splits = Json::object();
          tsv += row.word;
          for (std::size_t i = 0; i < named.size(); ++i) {
            splits[named[i].name] = row.splits[i];
            tsv += "\t" + row.splits[i];
          }
          tsv += "\n";
          table.push_back({{"word", row.word}, {"splits", splits}});
        }
        j["table"] = table;
      }
      return {common.format == "tsv" ? tsv : json_body(j), std::move(manifest)};
    };
  });

  // memory
  std::string budget;
  bool solve_batch = false;
  auto* memory = app.add_subcommand("memory", "Training memory estimate for a model config");
  add_model(memory, model);
  memory->add_option("--budget", budget, "Memory budget, e.g. 48GiB");
  memory->add_flag("--solve-batch", solve_batch, "Report the largest batch fitting the budget");
  add_common(memory, common);
  memory->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("memory", memory);
      ModelConfig defaults{.batch = 32, .seq_len = 0, .vocab = 0};
      const ModelConfig cfg = resolve_model(model, defaults, manifest);
      if (cfg.seq_len == 0 || cfg.vocab == 0) {
        throw ConfigError("sequence length (S) and vocabulary size (V) are required");
      }
      const MemoryOptions opts = memory_options(model);
      Json j = {{"config", to_json(cfg)}, {"estimate", to_json(total_memory(cfg, opts))}};
      if (solve_batch) {
        if (budget.empty()) throw ConfigError("--solve-batch requires --budget");
        const std::uint64_t budget_bytes = parse_byte_size(budget);
        j["budget_bytes"] = budget_bytes;
        j["max_batch"] = max_batch(cfg, budget_bytes, opts);
      }
      if (common.format == "tsv") {
        Json flat = Json::object();
        for (const auto& [k, v] : j["config"].items()) flat[k] = v;
        for (const auto& [k, v] : j["estimate"].items()) flat[k] = v;
        if (j.contains("max_batch")) {
          flat["budget_bytes"] = j["budget_bytes"];
          flat["max_batch"] = j["max_batch"];
        }
        return {kv_tsv(flat), std::move(manifest)};
      }
      return {json_body(j), std::move(manifest)};
    };
  });

  // compare
  std::string compare_budget = "48GiB";
  auto* compare = app.add_subcommand("compare", "Compare tokenizers on a corpus: S, fragmentation, memory");
  compare->add_option("--tokenizer", tokenizer_paths)->required();
  compare->add_option("--corpus", corpus_path)->required();
  compare->add_option("--corpus-format", corpus_format)->check(CLI::IsMember({"jsonl", "plain"}));
  compare->add_option("--pct", pct, "Percentile for the sequence length");
  compare->add_option("--section", section)->check(CLI::IsMember({"findings", "conclusion", "both"}));
  compare->add_option("--budget", compare_budget, "Memory budget for max batch");
  add_model(compare, model);
  add_common(compare, common);
  compare->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("compare", compare);
      const auto named = load_tokenizers(tokenizer_paths, manifest);
      const Corpus corpus = load_corpus(corpus_path, parse_corpus_format(corpus_format));
      manifest.input_digests[corpus_path] = file_digest(corpus_path);
      CompareOptions opts;
      opts.model = resolve_model(model, ModelConfig{.batch = 32}, manifest);
      opts.memory = memory_options(model);
      opts.pct = pct;
      opts.section = parse_section(section);
      opts.budget_bytes = parse_byte_size(compare_budget);
      const auto rows = compare_tokenizers(named, corpus, opts);
      if (common.format == "tsv") {
        std::string body = "tokenizer\tV\tS\ttokens_per_word\tact_elements\ttotal_bytes\tmax_batch\n";
        for (const auto& r : rows) {
          body += r.name + "\t" + std::to_string(r.vocab_size) + "\t" + std::to_string(r.seq_len) +
                  "\t" + Json(r.tokens_per_word).dump() + "\t" +
                  std::to_string(r.memory.act_elements) + "\t" +
                  std::to_string(r.memory.total_bytes) + "\t" +
                  (r.max_batch ? std::to_string(*r.max_batch) : "infeasible") + "\n";
        }
        return {body, std::move(manifest)};
      }
      Json arr = Json::array();
      for (const auto& r : rows) arr.push_back(to_json(r));
      return {json_body(arr), std::move(manifest)};
    };
  });

  // eval
  std::string hyp_path, ref_path;
  int max_n = 4;
  bool smoothing = false;
  auto* eval = app.add_subcommand("eval", "BLEU, ROUGE-L and METEOR over aligned files");
  eval->add_option("--hyp", hyp_path, "Hypotheses, one per line")->required();
  eval->add_option("--ref", ref_path, "References, one per line")->required();
  eval->add_option("--max-n", max_n, "Highest BLEU order")->check(CLI::Range(1, 4));
  eval->add_flag("--smoothing", smoothing, "Add-one smoothing for BLEU orders >= 2");
  add_common(eval, common);
  eval->callback([&] {
    action = [&]() -> CommandResult {
      RunManifest manifest = make_manifest("eval", eval);
      const auto hyps = read_lines(hyp_path, "hypothesis file");
      const auto refs = read_lines(ref_path, "reference file");
      manifest.input_digests[hyp_path] = file_digest(hyp_path);
      manifest.input_digests[ref_path] = file_digest(ref_path);
      BleuOptions opts;
      opts.smoothing = smoothing;
      const Json j = to_json(evaluate_pairs(hyps, refs, max_n, opts));
      if (common.format == "tsv") {
        Json flat = Json::object();
        for (const auto& [n, v] : j["bleu"].items()) flat["bleu_" + n] = v;
        flat["rouge_l"] = j["rouge_l"];
        flat["meteor_exact"] = j["meteor_exact"];
        flat["n_pairs"] = j["n_pairs"];
        flat["degenerate_pairs"] = j["degenerate_pairs"];
        return {kv_tsv(flat), std::move(manifest)};
      }
      return {json_body(j), std::move(manifest)};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    CommandResult result = action();
    const std::string manifest_text = to_json(result.manifest).dump(2) + "\n";
    if (!common.out.empty()) {
      write_file(common.out, result.body);
      write_file(common.out + ".manifest.json", manifest_text);
    } else {
      out << result.body;
    }
    if (!common.manifest.empty()) write_file(common.manifest, manifest_text);
    return kExitOk;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace radtok::cli
