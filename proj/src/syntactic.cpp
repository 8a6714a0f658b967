#include "divscope/syntactic.hpp"

#include <algorithm>

#include "divscope/error.hpp"
#include "divscope/parallel.hpp"

namespace divscope::syntactic {

void SyntacticConfig::validate() const {
  if (wl_iterations < 0) throw Error("syntactic: wl_iterations must be >= 0");
  if (max_sentences < 2) throw Error("syntactic: max_sentences must be >= 2");
}

nlohmann::json SyntacticConfig::to_json() const {
  return {{"wl_iterations", wl_iterations},
          {"max_sentences", max_sentences},
          {"seed", seed},
          {"include_deprel", include_deprel},
          {"distance", "1 - k(a,b)/sqrt(k(a,a)k(b,b))"}};
}

std::vector<std::size_t> select_sentences(std::size_t n, const SyntacticConfig& config) {
  if (n > config.max_sentences) return sample_sorted(n, config.max_sentences, config.seed);
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return all;
}

double pairwise_distance_sum(const std::vector<wl::WLFeatureVector>& features) {
  const std::size_t n = features.size();
  const std::size_t blocks = block_count(n);
  std::vector<double> partial(blocks, 0.0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += wl::wl_distance(features[i], features[j]);
    }
    partial[b] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

namespace {

struct Selection {
  std::vector<std::size_t> indices;
  std::vector<wl::WLFeatureVector> features;
  std::size_t labels = 0;
};

Selection featurize(const std::vector<DependencyTree>& trees, const SyntacticConfig& config) {
  config.validate();
  Selection sel;
  sel.indices = select_sentences(trees.size(), config);
  std::vector<const DependencyTree*> chosen;
  chosen.reserve(sel.indices.size());
  for (auto i : sel.indices) chosen.push_back(&trees[i]);
  wl::LabelDictionary dict;
  sel.features = wl::extract_features(chosen, config.wl_iterations, dict, config.include_deprel);
  sel.labels = dict.size();
  return sel;
}

}  // namespace

DistanceMatrix distance_matrix(const std::vector<DependencyTree>& trees,
                               const SyntacticConfig& config) {
  const Selection sel = featurize(trees, config);
  const std::size_t n = sel.indices.size();
  DistanceMatrix m;
  m.ids.reserve(n);
  for (auto i : sel.indices) m.ids.push_back(trees[i].sentence_id);
  m.values.assign(n * n, 0.0);
  parallel_for(block_count(n), [&](std::size_t b) {
    const std::size_t lo = b * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m.values[i * n + j] = wl::wl_distance(sel.features[i], sel.features[j]);
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) m.values[i * n + j] = m.values[j * n + i];
  }
  return m;
}

DiversityReport syntactic_diversity(const std::vector<DependencyTree>& trees,
                                    const SyntacticConfig& config) {
  const Selection sel = featurize(trees, config);
  const std::size_t n = sel.indices.size();
  if (n < 2) {
    throw MetricError("syntactic: need at least 2 trees, got " + std::to_string(n));
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  const double mean = pairwise_distance_sum(sel.features) / pairs;

  DiversityReport report;
  report.metric = Metric::kSyntactic;
  report.score = std::clamp(100.0 * mean, 0.0, 100.0);
  report.config = config.to_json();
  report.counts = {{"trees", trees.size()},
                   {"sampled", n},
                   {"pairs", n * (n - 1) / 2},
                   {"wl_labels", sel.labels}};
  return report;
}

}  // namespace divscope::syntactic
