#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "divscope/error.hpp"
#include "divscope/random.hpp"
#include "divscope/types.hpp"

namespace divscope::semantic {

struct SemanticConfig {
  std::size_t max_sentences = 10'000;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
  nlohmann::json to_json() const;
};

/// (1 - cos(u, v)) / 2, clamped to [0, 1].
template <typename T>
double scaled_cosine_distance(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) throw MetricError("dimension mismatch");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i], b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw MetricError("zero-norm vector");
  const double d = (1.0 - dot / (std::sqrt(uu) * std::sqrt(vv))) / 2.0;
  return d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
}

/// Mean scaled cosine distance over all pairs of the given rows. Uses the
/// normalised-row identity sum_{i<j} |u_i - u_j|^2 = n * sum_i |u_i - m|^2
/// (m the mean unit row), so the cost is O(n * d).
double mean_scaled_cosine_distance(const EmbeddingMatrix& emb,
                                   std::span<const std::size_t> rows);

DiversityReport semantic_diversity(const EmbeddingMatrix& emb, const SemanticConfig& config);

}  // namespace divscope::semantic
