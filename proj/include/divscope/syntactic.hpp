#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divscope/random.hpp"
#include "divscope/types.hpp"
#include "divscope/wl.hpp"

namespace divscope::syntactic {

struct SyntacticConfig {
  int wl_iterations = 2;
  std::size_t max_sentences = 10'000;
  std::uint64_t seed = kDefaultSeed;
  bool include_deprel = false;

  void validate() const;
  nlohmann::json to_json() const;
};

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<double> values;  // row-major n x n

  std::size_t size() const noexcept { return ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

/// Indices of the trees that enter the pair set (all of them, or a seeded
/// sorted subsample of max_sentences).
std::vector<std::size_t> select_sentences(std::size_t n, const SyntacticConfig& config);

/// Sum of wl_distance over all i < j, reduced over fixed row blocks in block
/// order so the result does not depend on the thread count.
double pairwise_distance_sum(const std::vector<wl::WLFeatureVector>& features);

DistanceMatrix distance_matrix(const std::vector<DependencyTree>& trees,
                               const SyntacticConfig& config);

DiversityReport syntactic_diversity(const std::vector<DependencyTree>& trees,
                                    const SyntacticConfig& config);

}  // namespace divscope::syntactic
