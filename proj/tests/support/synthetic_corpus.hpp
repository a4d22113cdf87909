#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "radtok/corpus.hpp"

namespace radtok::testing {

// Deterministic text generators standing in for the three kinds of training
// data: radiology reports, broad general-domain prose, and biomedical
// abstracts.
std::vector<CorpusDocument> synthetic_reports(std::size_t n, std::uint64_t seed);
std::vector<CorpusDocument> synthetic_general_text(std::size_t n, std::uint64_t seed);
std::vector<CorpusDocument> synthetic_biomedical_text(std::size_t n, std::uint64_t seed);

// Radiology terms used by the report generator.
const std::vector<std::string>& radiology_terms();

}  // namespace radtok::testing
