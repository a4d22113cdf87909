#include <doctest.h>

#include <random>
#include <set>
#include <thread>

#include "radtok/bpe_trainer.hpp"
#include "radtok/error.hpp"
#include "radtok/tokenizer.hpp"
#include "support/oracles.hpp"

using namespace radtok;

namespace {

Tokenizer toy() { return train_bpe(WordCounts{{"ab", 3}, {"abc", 2}}, MinCount{3}); }

TokenId id_of(const Tokenizer& t, const std::string& token) {
  auto id = t.vocabulary().find(token);
  REQUIRE(id.has_value());
  return *id;
}

std::set<std::string> non_special_tokens(const Tokenizer& t) {
  const auto& tokens = t.vocabulary().tokens();
  return {tokens.begin() + 4, tokens.end()};
}

WordCounts random_words(std::mt19937_64& rng, int max_distinct, int max_count,
                        const std::string& alphabet) {
  WordCounts words;
  const int n = std::uniform_int_distribution<int>(1, max_distinct)(rng);
  for (int i = 0; i < n; ++i) {
    const int len = std::uniform_int_distribution<int>(1, 8)(rng);
    std::string w;
    for (int k = 0; k < len; ++k) {
      w += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    words[w] = std::uniform_int_distribution<int>(1, max_count)(rng);
  }
  return words;
}

}  // namespace

TEST_CASE("thresholded training on the toy corpus") {
  const Tokenizer t = toy();
  const std::vector<Merge> expected = {{"a", "b"}, {"ab", "</w>"}};
  CHECK(t.merges() == expected);
  CHECK(non_special_tokens(t) == std::set<std::string>{"a", "b", "c", "</w>", "ab", "ab</w>"});
  CHECK(t.vocab_size() == 10);
  CHECK(t.training().min_count == 3u);
  CHECK_FALSE(t.training().max_vocab.has_value());
}

TEST_CASE("empty corpus yields specials only") {
  const Tokenizer t = train_bpe(WordCounts{}, MinCount{3});
  CHECK(t.vocab_size() == 4);
  CHECK(t.merges().empty());
  CHECK(t.encode("").length() == 0);
}

TEST_CASE("single repeated character word") {
  const Tokenizer t = train_bpe(WordCounts{{"a", 3}}, MinCount{3});
  REQUIRE(t.merges().size() == 1);
  CHECK(t.merges()[0] == Merge{"a", "</w>"});
  CHECK(t.encode("a").ids == std::vector<TokenId>{id_of(t, "a</w>")});
}

TEST_CASE("regime and marker validation") {
  const WordCounts words{{"ab", 3}, {"abc", 2}};
  CHECK_THROWS_AS(train_bpe(words, MinCount{0}), ConfigError);
  CHECK_THROWS_AS(train_bpe(words, MaxVocab{0}), ConfigError);
  // specials (4) + {a, b, c, </w>} = 8
  CHECK_THROWS_WITH_AS(train_bpe(words, MaxVocab{7}), doctest::Contains("minimum feasible size is 8"),
                       ConfigError);
  CHECK(train_bpe(words, MaxVocab{8}).merges().empty());
  CHECK_THROWS_AS(train_bpe(words, MinCount{3}, {Normalization::kLowercaseWhitespace, "w"}),
                  ConfigError);
  CHECK_THROWS_AS(train_bpe(WordCounts{{"two words", 3}}, MinCount{3}), ConfigError);
  CHECK_THROWS_AS(train_bpe(WordCounts{{"Upper", 3}}, MinCount{3}), ConfigError);
}

TEST_CASE("fixed-size regime stops at the target size or when pairs are singletons") {
  const WordCounts words{{"abab", 5}, {"abc", 4}, {"cab", 2}, {"xyz", 1}};
  const Tokenizer small = train_bpe(words, MaxVocab{12});
  CHECK(small.vocab_size() == 12);
  CHECK(small.training().max_vocab == 12u);

  const Tokenizer big = train_bpe(words, MaxVocab{1000});
  CHECK(big.vocab_size() < 1000);
  // Only the word seen once may stay fragmented.
  for (const auto& [w, f] : words) {
    if (f >= 2) CHECK(big.encode_word(w).size() == 1);
  }
  CHECK(big.encode_word("xyz").size() > 1);
}

TEST_CASE("encode worked examples") {
  const Tokenizer t = toy();
  CHECK(t.encode("ab").ids == std::vector<TokenId>{id_of(t, "ab</w>")});
  CHECK(t.encode("ab").length() == 1);
  CHECK(t.encode("abc").ids ==
        std::vector<TokenId>{id_of(t, "ab"), id_of(t, "c"), id_of(t, "</w>")});
  CHECK(t.encode("").length() == 0);
  CHECK(t.encode("   \t\n").length() == 0);
  CHECK(t.encode("AB") == t.encode("ab"));
  // 'z' is outside the alphabet.
  CHECK(t.encode("z").ids == std::vector<TokenId>{kUnkId, id_of(t, "</w>")});
}

TEST_CASE("decode worked examples and errors") {
  const Tokenizer t = toy();
  CHECK(t.decode({{id_of(t, "ab</w>")}}) == "ab");
  CHECK(t.decode({}) == "");
  CHECK(t.decode(t.encode("ab  abc\tab")) == "ab abc ab");
  CHECK(t.decode({{kBosId, id_of(t, "ab</w>"), kPadId, kEosId}}) == "ab");
  CHECK(t.decode({{kUnkId, id_of(t, "</w>")}}) == std::string(kReplacementChar));
  CHECK_THROWS_WITH_AS(t.decode({{10}}),
                       doctest::Contains("token id 10 is out of range for a vocabulary of size 10"),
                       InputError);
  CHECK_THROWS_AS(t.decode({{-1}}), InputError);
}

TEST_CASE("roundtrip on radiology text") {
  const std::string text = "Pleural effusion, opacification.";
  WordCounts words;
  for (const auto& w : normalize_words(text + " " + text + " mild", Normalization::kLowercaseWhitespace)) {
    ++words[w];
  }
  for (const auto& regime : {TrainingRegime{MinCount{3}}, TrainingRegime{MaxVocab{40}}}) {
    const Tokenizer t = train_bpe(words, regime);
    CHECK(t.decode(t.encode("pleural effusion opacification")) ==
          "pleural effusion opacification");
    CHECK(t.decode(t.encode(text)) == normalize_text(text, Normalization::kLowercaseWhitespace));
  }
}

TEST_CASE("preserve_case keeps capitals distinct") {
  const Tokenizer t = train_bpe(WordCounts{{"CT", 4}, {"ct", 4}}, MinCount{3},
                                {Normalization::kPreserveCase, "</w>"});
  CHECK(t.encode("CT") != t.encode("ct"));
  CHECK(t.decode(t.encode("CT scan")) .starts_with("CT"));
}

TEST_CASE("learned merges match the brute-force recount oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto words = random_words(rng, 20, 50, trial % 2 ? "ab" : "abcde");
    if (trial % 2) {
      const std::uint64_t k = std::uniform_int_distribution<int>(1, 6)(rng);
      const Tokenizer t = train_bpe(words, MinCount{k});
      const auto expected = oracle::brute_force_bpe(words, k, std::nullopt);
      REQUIRE(t.merges().size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(t.merges()[i].left == expected[i].left);
        CHECK(t.merges()[i].right == expected[i].right);
      }
    } else {
      std::set<char> chars;
      for (const auto& [w, f] : words) chars.insert(w.begin(), w.end());
      const std::uint64_t cap =
          4 + chars.size() + 1 + std::uniform_int_distribution<int>(0, 40)(rng);
      const Tokenizer t = train_bpe(words, MaxVocab{cap});
      const auto expected = oracle::brute_force_bpe(words, std::nullopt, cap);
      REQUIRE(t.merges().size() == expected.size());
      for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(t.merges()[i].left == expected[i].left);
        CHECK(t.merges()[i].right == expected[i].right);
      }
    }
  }
}

TEST_CASE("threshold completeness and vocabulary accounting") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto words = random_words(rng, 30, 10, "abcdefg");
    const std::uint64_t k = std::uniform_int_distribution<int>(1, 5)(rng);
    const Tokenizer t = train_bpe(words, MinCount{k});
    for (const auto& [w, f] : words) {
      if (f >= k) CHECK(t.encode_word(w).size() == 1);
    }
    std::set<char> chars;
    for (const auto& [w, f] : words) chars.insert(w.begin(), w.end());
    std::set<std::string> results;
    for (const auto& m : t.merges()) results.insert(m.result());
    CHECK(results.size() == t.merges().size());
    CHECK(t.vocab_size() == 4 + (chars.size() + 1) + t.merges().size());
  }
}

TEST_CASE("removing the final merge never reduces token counts") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto words = random_words(rng, 20, 20, "abcd");
    Tokenizer t = train_bpe(words, MinCount{2});
    while (!t.merges().empty()) {
      const Tokenizer shorter = t.without_last_merge();
      CHECK(shorter.merges().size() + 1 == t.merges().size());
      for (const auto& [w, f] : words) {
        CHECK(shorter.encode_word(w).size() >= t.encode_word(w).size());
      }
      t = shorter;
    }
  }
}

TEST_CASE("encode is deterministic and thread-safe") {
  std::mt19937_64 rng(5);
  const auto words = random_words(rng, 20, 20, "abcdef");
  const Tokenizer t = train_bpe(words, MinCount{2});
  std::string text;
  for (const auto& [w, f] : words) text += w + " ";
  const TokenSequence expected = t.encode(text);
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 0);
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&, i] {
      bool same = true;
      for (int r = 0; r < 200; ++r) same = same && t.encode(text) == expected;
      ok[i] = same;
    });
  }
  for (auto& th : threads) th.join();
  for (int v : ok) CHECK(v == 1);
}

TEST_CASE("domain tokenizer keeps a frequent medical word whole") {
  const Tokenizer domain =
      train_bpe(WordCounts{{"bronchovasculature", 3}, {"normal", 5}}, MinCount{3});
  CHECK(domain.encode("bronchovasculature").length() == 1);

  const Tokenizer general = train_bpe(
      WordCounts{{"brown", 9}, {"ocean", 7}, {"vascular", 4}, {"nature", 6}, {"chorus", 5}},
      MaxVocab{40});
  CHECK(general.encode("bronchovasculature").length() > 2);
}

TEST_CASE("tokenizer constructor rejects broken structure") {
  Vocabulary v;
  v.add("a");
  v.add("</w>");
  CHECK_THROWS_AS(Tokenizer(v, {{"a", "b"}}, Normalization::kLowercaseWhitespace), InvariantError);
  v.add("a</w>");
  CHECK_NOTHROW(Tokenizer(v, {{"a", "</w>"}}, Normalization::kLowercaseWhitespace));
  CHECK_THROWS_AS(Tokenizer(v, {{"a", "</w>"}, {"a", "</w>"}}, Normalization::kLowercaseWhitespace),
                  InvariantError);
  Vocabulary bad;
  bad.add("x<unk>");
  CHECK_THROWS_AS(Tokenizer(bad, {}, Normalization::kLowercaseWhitespace), InvariantError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"<unk>", "<pad>", "<s>", "</s>"}), InvariantError);
  CHECK_THROWS_AS(Vocabulary::from_tokens({"<pad>", "<unk>", "<s>", "</s>", "a", "a"}),
                  InvariantError);
}
