#include "divscope/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "divscope/error.hpp"
#include "divscope/parallel.hpp"
#include "divscope/wl.hpp"

namespace divscope::compare {

void CompareConfig::validate() const {
  if (pca_dims < 1) throw Error("compare: pca_dims must be >= 1");
  if (k_clusters < 2) throw Error("compare: k_clusters must be >= 2");
  if (min_support < 1) throw Error("compare: min_support must be >= 1");
  if (per_side_cap < k_clusters) throw Error("compare: per_side_cap must be >= k_clusters");
  if (kmeans_restarts < 1) throw Error("compare: kmeans_restarts must be >= 1");
  if (wl_iterations < 0) throw Error("compare: wl_iterations must be >= 0");
}

nlohmann::json CompareConfig::to_json() const {
  return {{"pca_dims", pca_dims},           {"k_clusters", k_clusters},
          {"min_support", min_support},     {"per_side_cap", per_side_cap},
          {"kmeans_restarts", kmeans_restarts}, {"kmeans_iters", kmeans_iters},
          {"wl_iterations", wl_iterations}, {"seed", seed}};
}

// ---------------------------------------------------------------------------
// Kernel embedding

Eigen::MatrixXd wl_gram(const std::vector<const DependencyTree*>& trees, int h) {
  wl::LabelDictionary dict;
  const auto features = wl::extract_features(trees, h, dict);
  const auto n = static_cast<Eigen::Index>(trees.size());
  Eigen::MatrixXd gram(n, n);
  parallel_for(block_count(trees.size()), [&](std::size_t b) {
    const auto lo = static_cast<Eigen::Index>(b * kReductionBlock);
    const auto hi = std::min<Eigen::Index>(n, lo + static_cast<Eigen::Index>(kReductionBlock));
    for (Eigen::Index i = lo; i < hi; ++i) {
      gram(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        gram(i, j) = wl::wl_similarity(features[i], features[j]);
      }
    }
  });
  gram.triangularView<Eigen::StrictlyLower>() = gram.transpose();
  return gram;
}

Eigen::MatrixXd double_center(const Eigen::MatrixXd& gram) {
  const Eigen::VectorXd row_mean = gram.rowwise().mean();
  const double grand = row_mean.mean();
  Eigen::MatrixXd c = gram;
  c.colwise() -= row_mean;
  c.rowwise() -= row_mean.transpose();
  c.array() += grand;
  return c;
}

namespace {

struct EigenPairs {
  Eigen::VectorXd values;  // descending
  Eigen::MatrixXd vectors;
};

EigenPairs dense_eigen(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  // Eigen returns ascending order.
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

EigenPairs leading_eigen(const Eigen::MatrixXd& m, Eigen::Index count) {
  const Eigen::Index n = m.rows();
  const Eigen::Index width = std::min<Eigen::Index>(n, count + 10);
  Rng rng(0x5eed);
  Eigen::MatrixXd q(n, width);
  for (Eigen::Index j = 0; j < width; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, j) = 2.0 * rng.unit() - 1.0;
  }
  Eigen::VectorXd previous = Eigen::VectorXd::Zero(count);
  EigenPairs ritz;
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m * q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(n, width);
    const Eigen::MatrixXd t = q.transpose() * m * q;
    ritz = dense_eigen(0.5 * (t + t.transpose()));
    const Eigen::VectorXd head = ritz.values.head(count);
    const double scale = std::max(1.0, std::abs(head(0)));
    if ((head - previous).cwiseAbs().maxCoeff() <= 1e-12 * scale) break;
    previous = head;
  }
  return {ritz.values.head(count), q * ritz.vectors.leftCols(count)};
}

}  // namespace

KernelEmbedding classical_mds(const Eigen::MatrixXd& gram, std::size_t dims, Eigen::Index dense_limit) {
  const Eigen::MatrixXd centered = double_center(gram);
  const Eigen::Index n = centered.rows();
  const auto want = std::min<Eigen::Index>(static_cast<Eigen::Index>(dims), n);
  const EigenPairs eig = n <= dense_limit ? dense_eigen(centered) : leading_eigen(centered, want);

  const double top = eig.values.size() ? std::abs(eig.values(0)) : 0.0;
  const double tol = 1e-10 * std::max(1.0, top);
  Eigen::Index positive = 0;
  while (positive < want && eig.values(positive) > tol) ++positive;

  KernelEmbedding out;
  if (positive < static_cast<Eigen::Index>(dims)) {
    out.warnings.push_back("requested " + std::to_string(dims) + " dimensions but the centered Gram matrix has " +
                           std::to_string(positive) + " positive eigenvalues; using " +
                           std::to_string(std::max<Eigen::Index>(positive, 1)));
  }
  if (positive == 0) {
    out.points = Eigen::MatrixXd::Zero(n, 1);
    out.eigenvalues = Eigen::VectorXd::Zero(1);
    return out;
  }
  out.eigenvalues = eig.values.head(positive);
  out.points.resize(n, positive);
  for (Eigen::Index c = 0; c < positive; ++c) {
    Eigen::VectorXd v = eig.vectors.col(c);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
    }
    if (v(arg) < 0) v = -v;
    out.points.col(c) = v * std::sqrt(eig.values(c));
  }
  return out;
}

KernelEmbedding kernel_embed(const std::vector<DependencyTree>& human,
                             const std::vector<DependencyTree>& model,
                             const CompareConfig& config) {
  config.validate();
  if (human.empty() || model.empty()) throw MetricError("compare: both sides need at least one tree");
  auto pick = [&](std::size_t n, std::uint64_t stream) {
    if (n > config.per_side_cap) return sample_sorted(n, config.per_side_cap, derive_seed(config.seed, stream));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  };
  const auto hi = pick(human.size(), 1);
  const auto mi = pick(model.size(), 2);

  std::vector<const DependencyTree*> joint;
  joint.reserve(hi.size() + mi.size());
  for (auto i : hi) joint.push_back(&human[i]);
  for (auto i : mi) joint.push_back(&model[i]);

  KernelEmbedding out = classical_mds(wl_gram(joint, config.wl_iterations), config.pca_dims);
  out.human_indices = hi;
  out.model_indices = mi;
  out.sides.assign(hi.size(), Side::kHuman);
  out.sides.resize(hi.size() + mi.size(), Side::kModel);
  return out;
}

// ---------------------------------------------------------------------------
// k-means

namespace {

double sq_dist(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const double d = a(i, k) - b(j, k);
    s += d * d;
  }
  return s;
}

// Nearest centroid per point, lowest index on ties. Returns true if any
// assignment changed.
bool assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
            std::vector<std::uint32_t>& assignments) {
  bool changed = false;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::uint32_t best = 0;
    double best_d = sq_dist(points, i, centroids, 0);
    for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
      const double d = sq_dist(points, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = static_cast<std::uint32_t>(c);
      }
    }
    if (assignments[i] != best) {
      assignments[i] = best;
      changed = true;
    }
  }
  return changed;
}

}  // namespace

std::uint64_t restart_seed(const CompareConfig& config, std::size_t restart) noexcept {
  return derive_seed(config.seed, 100 + restart);
}

Eigen::MatrixXd kmeans_plus_plus(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > n) throw MetricError("k-means: k must be in [1, number of points]");
  Rng rng(seed);
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<bool> chosen(n, false);
  std::size_t first = static_cast<std::size_t>(rng.below(n));
  centroids.row(0) = points.row(static_cast<Eigen::Index>(first));
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_dist(points, static_cast<Eigen::Index>(i), centroids, 0);

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : d2) total += d;
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.unit() * total;
      double cum = 0.0;
      std::size_t last_positive = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        last_positive = i;
        cum += d2[i];
        if (cum > u) {
          pick = i;
          break;
        }
      }
      if (pick == n) pick = last_positive;
    } else {
      // All remaining points coincide with a centre.
      pick = 0;
      while (chosen[pick]) ++pick;
    }
    chosen[pick] = true;
    const auto row = static_cast<Eigen::Index>(c);
    centroids.row(row) = points.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(points, static_cast<Eigen::Index>(i), centroids, row));
    }
  }
  return centroids;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, std::size_t max_iters) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centroids.rows();
  const Eigen::Index d = points.cols();
  std::vector<std::uint32_t> assignments(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    const bool changed = assign(points, centroids, assignments);
    if (iter > 0 && !changed) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    std::vector<std::size_t> sizes(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = assignments[i];
      for (Eigen::Index j = 0; j < d; ++j) sums(c, j) += points(i, j);
      ++sizes[c];
    }
    std::vector<bool> reseeded(n, false);
    for (Eigen::Index c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        for (Eigen::Index j = 0; j < d; ++j) centroids(c, j) = sums(c, j) / static_cast<double>(sizes[c]);
      }
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (sizes[c] > 0) continue;
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (reseeded[i]) continue;
        const double dist = sq_dist(points, i, centroids, assignments[i]);
        if (dist > far_d) {
          far_d = dist;
          far = i;
        }
      }
      if (far < 0) break;
      reseeded[far] = true;
      centroids.row(c) = points.row(far);
    }
  }
  assign(points, centroids, assignments);
  double wcss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) wcss += sq_dist(points, i, centroids, assignments[i]);
  return {std::move(centroids), std::move(assignments), wcss};
}

bool SupportModel::in_human_support(std::uint32_t c) const {
  return std::binary_search(human_support.begin(), human_support.end(), c);
}

bool SupportModel::in_model_support(std::uint32_t c) const {
  return std::binary_search(model_support.begin(), model_support.end(), c);
}

void apply_min_support(SupportModel& model, std::size_t min_support) {
  model.human_support.clear();
  model.model_support.clear();
  for (std::size_t c = 0; c < model.human_counts.size(); ++c) {
    if (model.human_counts[c] >= min_support) model.human_support.push_back(static_cast<std::uint32_t>(c));
    if (model.model_counts[c] >= min_support) model.model_support.push_back(static_cast<std::uint32_t>(c));
  }
}

SupportModel estimate_support(const Eigen::MatrixXd& points, const std::vector<Side>& sides,
                              const CompareConfig& config) {
  config.validate();
  if (static_cast<std::size_t>(points.rows()) != sides.size()) {
    throw Error("estimate_support: one side flag per point required");
  }
  if (config.k_clusters > sides.size()) {
    throw MetricError("estimate_support: k_clusters (" + std::to_string(config.k_clusters) +
                      ") exceeds number of points (" + std::to_string(sides.size()) + ")");
  }
  std::vector<KMeansResult> runs(config.kmeans_restarts);
  parallel_for(config.kmeans_restarts, [&](std::size_t r) {
    runs[r] = lloyd(points, kmeans_plus_plus(points, config.k_clusters, restart_seed(config, r)),
                    config.kmeans_iters);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].wcss < runs[best].wcss) best = r;
  }

  SupportModel model;
  model.centroids = std::move(runs[best].centroids);
  model.assignments = std::move(runs[best].assignments);
  model.wcss = runs[best].wcss;
  model.best_restart = best;
  model.sides = sides;
  model.human_counts.assign(config.k_clusters, 0);
  model.model_counts.assign(config.k_clusters, 0);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    auto& counts = sides[i] == Side::kHuman ? model.human_counts : model.model_counts;
    ++counts[model.assignments[i]];
  }
  apply_min_support(model, config.min_support);
  return model;
}

// ---------------------------------------------------------------------------
// Precision / recall

PRResult precision_recall(const SupportModel& model, const CompareConfig& config) {
  std::size_t h_total = 0, m_total = 0, m_in = 0, h_in = 0;
  for (std::size_t c = 0; c < model.human_counts.size(); ++c) {
    const auto cluster = static_cast<std::uint32_t>(c);
    h_total += model.human_counts[c];
    m_total += model.model_counts[c];
    if (model.in_human_support(cluster)) m_in += model.model_counts[c];
    if (model.in_model_support(cluster)) h_in += model.human_counts[c];
  }
  if (h_total == 0) throw MetricError("precision_recall: no human samples");
  if (m_total == 0) throw MetricError("precision_recall: no model samples");
  PRResult r;
  r.precision = 100.0 * static_cast<double>(m_in) / static_cast<double>(m_total);
  r.recall = 100.0 * static_cast<double>(h_in) / static_cast<double>(h_total);
  r.config = config;
  r.human_counts = model.human_counts;
  r.model_counts = model.model_counts;
  r.human_support = model.human_support;
  r.model_support = model.model_support;
  return r;
}

nlohmann::json PRResult::to_json() const {
  nlohmann::json clusters = nlohmann::json::array();
  for (std::size_t c = 0; c < human_counts.size(); ++c) {
    const auto id = static_cast<std::uint32_t>(c);
    clusters.push_back(
        {{"cluster", c},
         {"human", human_counts[c]},
         {"model", model_counts[c]},
         {"in_human_support", std::binary_search(human_support.begin(), human_support.end(), id)},
         {"in_model_support", std::binary_search(model_support.begin(), model_support.end(), id)}});
  }
  return {{"precision", precision}, {"recall", recall}, {"config", config.to_json()},
          {"clusters", clusters}};
}

// ---------------------------------------------------------------------------
// POS patterns

namespace {

struct GramStats {
  std::size_t count = 0;
  std::string example;
};

using GramTable = std::map<std::vector<std::string>, GramStats>;

void count_grams(const DependencyTree& tree, int n, GramTable& table) {
  const auto width = static_cast<std::size_t>(n);
  if (tree.size() < width) return;
  for (std::size_t i = 0; i + width <= tree.size(); ++i) {
    std::vector<std::string> key;
    key.reserve(width);
    for (std::size_t k = 0; k < width; ++k) key.push_back(tree.nodes[i + k].upos);
    auto& stats = table[key];
    if (stats.count++ == 0) {
      for (std::size_t k = 0; k < width; ++k) {
        if (k) stats.example.push_back(' ');
        stats.example += tree.nodes[i + k].form;
      }
    }
  }
}

nlohmann::json entries_json(const std::map<int, std::vector<PatternEntry>>& lists) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [n, entries] : lists) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
      arr.push_back({{"pattern", e.pattern},
                     {"model_count", e.model_count},
                     {"human_count", e.human_count},
                     {"score", e.score},
                     {"example", e.example}});
    }
    out[std::to_string(n)] = std::move(arr);
  }
  return out;
}

}  // namespace

nlohmann::json PatternLists::to_json() const {
  return {{"human_favored", entries_json(human)},
          {"model_favored", entries_json(model)},
          {"notices", notices}};
}

PatternLists mine_pos_patterns(const std::vector<const DependencyTree*>& trees_h,
                               const std::vector<const DependencyTree*>& trees_m,
                               const SupportModel& model, int n_min, int n_max,
                               std::size_t top_k) {
  if (n_min < 1 || n_max < n_min) throw Error("mine_pos_patterns: invalid n range");
  if (trees_h.size() + trees_m.size() != model.assignments.size()) {
    throw Error("mine_pos_patterns: trees are not aligned with the support model");
  }
  std::vector<const DependencyTree*> outside;
  for (std::size_t i = 0; i < trees_h.size(); ++i) {
    if (!model.in_model_support(model.assignments[i])) outside.push_back(trees_h[i]);
  }
  PatternLists lists;
  if (outside.empty()) {
    lists.notices.push_back("no human trees fall outside the model support; human-favored list is empty");
  }

  for (int n = n_min; n <= n_max; ++n) {
    GramTable out_h, all_h, all_m;
    for (const auto* t : outside) count_grams(*t, n, out_h);
    for (const auto* t : trees_h) count_grams(*t, n, all_h);
    for (const auto* t : trees_m) count_grams(*t, n, all_m);

    std::vector<PatternEntry> human;
    for (const auto& [key, stats] : out_h) {
      const auto m = all_m.find(key);
      human.push_back({key, m == all_m.end() ? 0 : m->second.count, stats.count,
                       static_cast<double>(stats.count), stats.example});
    }
    std::stable_sort(human.begin(), human.end(),
                     [](const PatternEntry& a, const PatternEntry& b) { return a.human_count > b.human_count; });
    if (human.size() > top_k) human.resize(top_k);
    lists.human[n] = std::move(human);

    std::vector<PatternEntry> favored;
    for (const auto& [key, stats] : all_m) {
      const auto h = all_h.find(key);
      const std::size_t hc = h == all_h.end() ? 0 : h->second.count;
      favored.push_back({key, stats.count, hc,
                         static_cast<double>(stats.count) / static_cast<double>(hc + 1), stats.example});
    }
    std::stable_sort(favored.begin(), favored.end(), [](const PatternEntry& a, const PatternEntry& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.model_count > b.model_count;
    });
    if (favored.size() > top_k) favored.resize(top_k);
    lists.model[n] = std::move(favored);
  }
  return lists;
}

}  // namespace divscope::compare
