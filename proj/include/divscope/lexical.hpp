#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "divscope/random.hpp"
#include "divscope/types.hpp"

namespace divscope::lexical {

struct LexicalConfig {
  std::vector<int> ns{1, 2, 3};
  std::size_t sample_size = 40'000;
  std::uint64_t seed = kDefaultSeed;
  bool lowercase = true;

  void validate() const;
  nlohmann::json to_json() const;
};

/// Multiset of n-token windows. Each distinct gram is interned; occurrences
/// holds one gram id per window in corpus order.
struct NGramMultiset {
  int n = 0;
  std::vector<std::vector<std::string>> grams;  // id -> tuple
  std::vector<std::uint32_t> occurrences;

  std::size_t total() const noexcept { return occurrences.size(); }
  std::size_t distinct() const noexcept { return grams.size(); }
  /// Multiplicity per gram id.
  std::vector<std::size_t> counts() const;
};

/// Alphanumeric runs and single punctuation/symbol characters; whitespace
/// separates and is dropped.
std::vector<std::string> tokenize(std::string_view text, bool lowercase);

NGramMultiset extract_ngrams(const Corpus& corpus, int n, const LexicalConfig& config);

/// Seed used for the order-n subsample draw.
std::uint64_t sample_seed(const LexicalConfig& config, int n) noexcept;

/// 100 * distinct / drawn over a seeded without-replacement subsample of
/// sample_size grams (all grams when total <= sample_size).
double unique_n(const NGramMultiset& grams, const LexicalConfig& config);

DiversityReport lexical_diversity(const Corpus& corpus, const LexicalConfig& config);

}  // namespace divscope::lexical
