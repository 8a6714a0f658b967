#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "divscope/random.hpp"
#include "divscope/types.hpp"

namespace divscope::compare {

struct CompareConfig {
  std::size_t pca_dims = 50;
  std::size_t k_clusters = 50;
  std::size_t min_support = 5;
  std::size_t per_side_cap = 5'000;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_iters = 100;
  int wl_iterations = 2;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
  nlohmann::json to_json() const;
};

enum class Side : std::uint8_t { kHuman = 0, kModel = 1 };

/// Joint embedding of the (subsampled) human and model trees. Rows of
/// points are the human samples followed by the model samples.
struct KernelEmbedding {
  Eigen::MatrixXd points;
  Eigen::VectorXd eigenvalues;  // descending, one per column of points
  std::vector<Side> sides;
  std::vector<std::size_t> human_indices;  // into the caller's human trees
  std::vector<std::size_t> model_indices;
  std::vector<std::string> warnings;
};

/// Cosine-normalised WL Gram matrix over a tree sequence.
Eigen::MatrixXd wl_gram(const std::vector<const DependencyTree*>& trees, int h);

/// H K H with H the centering matrix.
Eigen::MatrixXd double_center(const Eigen::MatrixXd& gram);

/// Classical MDS of a Gram matrix: the top `dims` eigenpairs with positive
/// eigenvalue, columns scaled by sqrt(eigenvalue), each column's
/// largest-magnitude entry made positive. Returns fewer columns (and a
/// warning) when the centered Gram has fewer positive eigenvalues.
/// Matrices larger than dense_limit use subspace iteration for the leading
/// eigenpairs instead of a full decomposition.
KernelEmbedding classical_mds(const Eigen::MatrixXd& gram, std::size_t dims,
                              Eigen::Index dense_limit = 2000);

KernelEmbedding kernel_embed(const std::vector<DependencyTree>& human,
                             const std::vector<DependencyTree>& model,
                             const CompareConfig& config);

struct SupportModel {
  Eigen::MatrixXd centroids;
  std::vector<std::uint32_t> assignments;
  std::vector<Side> sides;
  std::vector<std::uint32_t> human_support;  // sorted cluster ids
  std::vector<std::uint32_t> model_support;
  std::vector<std::size_t> human_counts;     // per cluster
  std::vector<std::size_t> model_counts;
  double wcss = 0.0;
  std::size_t best_restart = 0;

  bool in_human_support(std::uint32_t c) const;
  bool in_model_support(std::uint32_t c) const;
};

/// k-means++ seeding for one restart; returns k x d initial centroids.
Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& points, std::size_t k,
                                 std::uint64_t seed);

/// Seed for a given restart.
std::uint64_t restart_seed(const CompareConfig& config, std::size_t restart) noexcept;

struct KMeansResult {
  Eigen::MatrixXd centroids;
  std::vector<std::uint32_t> assignments;
  double wcss = 0.0;
};

/// Lloyd iterations from the given centroids. An empty cluster takes the
/// point farthest from its own centroid (lowest index on ties).
KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                   std::size_t max_iters);

SupportModel estimate_support(const Eigen::MatrixXd& points, const std::vector<Side>& sides,
                              const CompareConfig& config);

/// Rebuilds the support sets for a different threshold.
void apply_min_support(SupportModel& model, std::size_t min_support);

struct PRResult {
  double precision = 0.0;
  double recall = 0.0;
  CompareConfig config;
  std::vector<std::size_t> human_counts;  // per cluster
  std::vector<std::size_t> model_counts;
  std::vector<std::uint32_t> human_support;
  std::vector<std::uint32_t> model_support;

  nlohmann::json to_json() const;
};

PRResult precision_recall(const SupportModel& model, const CompareConfig& config = {});

struct PatternEntry {
  std::vector<std::string> pattern;
  std::size_t model_count = 0;
  std::size_t human_count = 0;
  double score = 0.0;  // human list: count; model list: model / (human + 1)
  std::string example;
};

struct PatternLists {
  std::map<int, std::vector<PatternEntry>> human;
  std::map<int, std::vector<PatternEntry>> model;
  std::vector<std::string> notices;

  nlohmann::json to_json() const;
};

/// POS-tag n-grams (linear order) favoured by each side. Human-favoured:
/// n-grams from human trees whose cluster is outside model_support, by
/// count. Model-favoured: by model count / (human count + 1). trees_h and
/// trees_m are the embedded samples, aligned with model.assignments.
PatternLists mine_pos_patterns(const std::vector<const DependencyTree*>& trees_h,
                               const std::vector<const DependencyTree*>& trees_m,
                               const SupportModel& model, int n_min, int n_max,
                               std::size_t top_k);

}  // namespace divscope::compare
