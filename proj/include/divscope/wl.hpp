#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "divscope/types.hpp"

namespace divscope::wl {

/// Undirected node-labeled graph built from a dependency tree.
struct LabeledGraph {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> adjacency;
  // edge_labels[v][k] labels the edge to adjacency[v][k] (the dependent's deprel).
  std::vector<std::vector<std::string>> edge_labels;

  std::size_t node_count() const noexcept { return labels.size(); }
  std::size_t edge_count() const noexcept;
};

LabeledGraph tree_to_graph(const DependencyTree& tree);

/// Append-only interning table for canonical WL label strings. Ids are
/// assigned in first-seen order and never reused.
class LabelDictionary {
 public:
  std::uint64_t intern(const std::string& label);
  const std::string& label(std::uint64_t id) const { return labels_.at(id); }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::unordered_map<std::string, std::uint64_t> ids_;
  std::vector<std::string> labels_;
};

struct FeatureEntry {
  std::uint64_t label;
  std::uint32_t count;
  bool operator==(const FeatureEntry&) const = default;
};

/// Sparse WL subtree feature map; entries sorted by label id.
struct WLFeatureVector {
  std::vector<FeatureEntry> counts;
  std::uint64_t self_kernel = 0;

  bool operator==(const WLFeatureVector&) const = default;
};

/// Iteration 0 counts the initial labels; iteration i relabels each node by
/// "(own label id)|[sorted neighbour label ids]". Counts from iterations
/// 0..h accumulate into one vector. With include_deprel, iteration-1
/// neighbour entries are prefixed by the edge's relation.
WLFeatureVector wl_features(const LabeledGraph& graph, int h, LabelDictionary& dict,
                            bool include_deprel = false);

/// Sparse dot product of two feature vectors.
std::uint64_t wl_kernel(const WLFeatureVector& a, const WLFeatureVector& b) noexcept;

/// Cosine-normalised kernel k / sqrt(k_aa * k_bb).
double wl_similarity(const WLFeatureVector& a, const WLFeatureVector& b) noexcept;

/// 1 - wl_similarity, clamped to [0, 1].
double wl_distance(const WLFeatureVector& a, const WLFeatureVector& b) noexcept;

/// Features for a tree sequence sharing one dictionary.
std::vector<WLFeatureVector> extract_features(const std::vector<const DependencyTree*>& trees,
                                              int h, LabelDictionary& dict,
                                              bool include_deprel = false);

}  // namespace divscope::wl
