#include "divscope/semantic.hpp"

#include <algorithm>
#include <vector>

#include "divscope/parallel.hpp"

namespace divscope::semantic {

void SemanticConfig::validate() const {
  if (max_sentences < 2) throw Error("semantic: max_sentences must be >= 2");
}

nlohmann::json SemanticConfig::to_json() const {
  return {{"max_sentences", max_sentences}, {"seed", seed}};
}

double mean_scaled_cosine_distance(const EmbeddingMatrix& emb,
                                   std::span<const std::size_t> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = emb.dims;
  if (n < 2) throw MetricError("semantic: need at least 2 rows, got " + std::to_string(n));

  std::vector<double> unit(n * d);
  parallel_for(n, [&](std::size_t i) {
    const auto r = emb.row(rows[i]);
    double sq = 0.0;
    for (float f : r) sq += static_cast<double>(f) * f;
    if (sq == 0.0 || !std::isfinite(sq)) {
      throw MetricError("semantic: invalid row '" + emb.ids[rows[i]] + "'");
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t k = 0; k < d; ++k) unit[i * d + k] = r[k] * inv;
  });

  // Work relative to the first row: the scatter is shift-invariant, and
  // identical rows then cancel exactly instead of leaving rounding residue.
  const std::vector<double> anchor(unit.begin(), unit.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::size_t i = 0; i < n * d; ++i) unit[i] -= anchor[i % d];

  // Mean shifted vector, reduced over fixed blocks in block order.
  const std::size_t blocks = block_count(n);
  std::vector<double> partial(blocks * d, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    double* acc = partial.data() + b * d;
    for (std::size_t i = b * kReductionBlock; i < std::min(n, (b + 1) * kReductionBlock); ++i) {
      for (std::size_t k = 0; k < d; ++k) acc[k] += unit[i * d + k];
    }
  });
  std::vector<double> mean(d, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t k = 0; k < d; ++k) mean[k] += partial[b * d + k];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  std::vector<double> spread(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    double s = 0.0;
    for (std::size_t i = b * kReductionBlock; i < std::min(n, (b + 1) * kReductionBlock); ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double dev = unit[i * d + k] - mean[k];
        s += dev * dev;
      }
    }
    spread[b] = s;
  });
  double scatter = 0.0;
  for (double s : spread) scatter += s;

  // sum_{i<j} |u_i - u_j|^2 = n * scatter, and (1 - cos)/2 = |u_i - u_j|^2 / 4.
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double mean_distance = static_cast<double>(n) * scatter / 4.0 / pairs;
  return std::clamp(mean_distance, 0.0, 1.0);
}

DiversityReport semantic_diversity(const EmbeddingMatrix& emb, const SemanticConfig& config) {
  config.validate();
  std::vector<std::size_t> rows;
  if (emb.rows() > config.max_sentences) {
    rows = sample_sorted(emb.rows(), config.max_sentences, config.seed);
  } else {
    rows.resize(emb.rows());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  DiversityReport report;
  report.metric = Metric::kSemantic;
  report.score = 100.0 * mean_scaled_cosine_distance(emb, rows);
  report.config = config.to_json();
  report.counts = {{"rows", emb.rows()},
                   {"sampled", rows.size()},
                   {"dims", emb.dims},
                   {"pairs", rows.size() * (rows.size() - 1) / 2}};
  return report;
}

}  // namespace divscope::semantic
