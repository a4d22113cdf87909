#include "synthetic_corpus.hpp"

#include <array>

namespace radtok::testing {
namespace {

const std::vector<std::string> kFindingTerms = {
    "consolidation", "opacification", "effusion", "pneumothorax", "atelectasis",
    "cardiomegaly", "adenopathy", "lymphadenopathy", "bronchiectasis", "emphysema",
    "granuloma", "calcification", "nodule", "mass", "lesion", "thickening",
    "hyperinflation", "edema", "infiltrate", "fibrosis", "scarring", "haziness",
    "hepatomegaly", "splenomegaly", "steatosis", "hydronephrosis", "diverticulosis",
    "spondylosis", "osteophytes", "fracture", "metastases", "uptake", "avidity"};

const std::vector<std::string> kAnatomy = {
    "lung", "lobe", "hilum", "mediastinum", "pleura", "diaphragm", "heart", "aorta",
    "trachea", "bronchus", "bronchovasculature", "thyroid", "sternomastoid", "liver",
    "spleen", "kidney", "adrenal", "pancreas", "vertebra", "rib", "clavicle", "costophrenic",
    "pericardium", "oesophagus", "gallbladder", "retroperitoneum", "axilla", "supraclavicular"};

const std::vector<std::string> kModifiers = {
    "mild", "moderate", "severe", "small", "large", "subtle", "patchy", "focal", "diffuse",
    "bilateral", "left", "right", "upper", "lower", "basal", "apical", "multinodular",
    "subsegmental", "interstitial", "perihilar", "paratracheal", "hypermetabolic", "stable",
    "new", "increased", "decreased", "unchanged", "residual", "chronic", "acute"};

const std::vector<std::string> kReportGlue = {
    "there", "is", "no", "the", "of", "in", "with", "and", "are", "seen", "noted", "within",
    "normal", "limits", "evidence", "compared", "to", "prior", "study", "suggestive",
    "consistent", "likely", "represents", "appearance", "size", "contour", "demonstrated"};

const std::vector<std::string> kGeneralWords = {
    "the", "of", "and", "to", "in", "is", "was", "for", "that", "with", "as", "on", "by",
    "at", "from", "it", "this", "which", "be", "are", "an", "or", "had", "not", "but",
    "time", "people", "year", "way", "day", "world", "life", "school", "state", "family",
    "group", "country", "problem", "hand", "part", "place", "case", "week", "company",
    "system", "program", "question", "work", "government", "number", "night", "point",
    "home", "water", "room", "mother", "area", "money", "story", "fact", "month", "lot",
    "right", "study", "book", "eye", "job", "word", "business", "issue", "side", "kind",
    "head", "house", "service", "friend", "father", "power", "hour", "game", "line", "end",
    "member", "law", "car", "city", "community", "name", "president", "team", "minute",
    "idea", "kid", "body", "information", "back", "parent", "face", "others", "level",
    "office", "door", "health", "person", "art", "war", "history", "party", "result",
    "change", "morning", "reason", "research", "girl", "guy", "moment", "air", "teacher",
    "force", "education", "music", "market", "river", "garden", "window", "summer",
    "travel", "weather", "kitchen", "station", "village", "mountain", "season"};

const std::array<const char*, 24> kGeneralSyllables = {
    "ba", "con", "ter", "ing", "ment", "ly", "pro", "re", "ver", "sta", "tion", "al",
    "ous", "der", "mar", "lin", "go", "pa", "ti", "ri", "son", "wal", "ker", "ble"};

const std::vector<std::string> kBioRoots = {
    "cardio", "hepat", "neuro", "nephr", "pulmon", "gastr", "oste", "derm", "hemat",
    "immun", "onco", "angio", "bronch", "adeno", "lymph", "myo", "arthr", "thromb",
    "cyto", "patho", "pneumo", "sterno", "vasc", "mast"};
const std::vector<std::string> kBioSuffixes = {
    "itis", "osis", "ectomy", "pathy", "genic", "logy", "megaly", "plasty", "oma",
    "emia", "cyte", "al", "ic", "ular", "oid", "ature", "ase", "in"};
const std::vector<std::string> kBioGlue = {
    "patients", "study", "results", "treatment", "clinical", "cells", "expression",
    "associated", "increased", "significant", "analysis", "protein", "disease", "risk",
    "we", "were", "was", "the", "of", "and", "in", "with", "to", "for", "by", "a", "these",
    "data", "levels", "cohort", "trial", "outcome", "response", "therapy", "tissue"};

template <typename Rng>
const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

template <typename Rng>
std::string report_sentence(Rng& rng) {
  std::uniform_int_distribution<int> form(0, 3);
  switch (form(rng)) {
    case 0:
      return "there is " + pick(kModifiers, rng) + " " + pick(kFindingTerms, rng) +
             " in the " + pick(kModifiers, rng) + " " + pick(kAnatomy, rng) + ".";
    case 1:
      return "no " + pick(kFindingTerms, rng) + " is seen.";
    case 2:
      return "the " + pick(kAnatomy, rng) + " is " + pick(kReportGlue, rng) + " " +
             pick(kReportGlue, rng) + ".";
    default:
      return pick(kModifiers, rng) + " " + pick(kFindingTerms, rng) + " of the " +
             pick(kAnatomy, rng) + ", " + pick(kReportGlue, rng) + " " +
             pick(kFindingTerms, rng) + ".";
  }
}

template <typename Rng>
std::string general_word(Rng& rng) {
  if (std::uniform_int_distribution<int>(0, 2)(rng) != 0) return pick(kGeneralWords, rng);
  std::uniform_int_distribution<std::size_t> syl(0, kGeneralSyllables.size() - 1);
  std::string w;
  const int n = std::uniform_int_distribution<int>(2, 3)(rng);
  for (int i = 0; i < n; ++i) w += kGeneralSyllables[syl(rng)];
  return w;
}

template <typename Rng>
std::string bio_word(Rng& rng) {
  const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
  if (kind < 4) return pick(kBioGlue, rng);
  if (kind < 6) return pick(kFindingTerms, rng);
  if (kind < 7) return pick(kAnatomy, rng);
  return pick(kBioRoots, rng) + pick(kBioSuffixes, rng);
}

}  // namespace

const std::vector<std::string>& radiology_terms() { return kFindingTerms; }

std::vector<CorpusDocument> synthetic_reports(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    CorpusDocument d;
    d.id = "r" + std::to_string(i);
    const int findings = std::uniform_int_distribution<int>(3, 8)(rng);
    for (int s = 0; s < findings; ++s) d.findings += (s ? " " : "") + report_sentence(rng);
    const int conclusions = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int s = 0; s < conclusions; ++s) d.conclusion += (s ? " " : "") + report_sentence(rng);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<CorpusDocument> synthetic_general_text(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    CorpusDocument d;
    d.id = "g" + std::to_string(i);
    const int len = std::uniform_int_distribution<int>(20, 60)(rng);
    for (int w = 0; w < len; ++w) d.findings += (w ? " " : "") + general_word(rng);
    d.findings += ".";
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<CorpusDocument> synthetic_biomedical_text(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusDocument> docs;
  for (std::size_t i = 0; i < n; ++i) {
    CorpusDocument d;
    d.id = "m" + std::to_string(i);
    const int len = std::uniform_int_distribution<int>(20, 60)(rng);
    for (int w = 0; w < len; ++w) d.findings += (w ? " " : "") + bio_word(rng);
    d.findings += ".";
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace radtok::testing
