#include "divscope/wl.hpp"

#include <algorithm>
#include <cmath>

namespace divscope::wl {

std::size_t LabeledGraph::edge_count() const noexcept {
  std::size_t degree_sum = 0;
  for (const auto& nbrs : adjacency) degree_sum += nbrs.size();
  return degree_sum / 2;
}

LabeledGraph tree_to_graph(const DependencyTree& tree) {
  const std::size_t n = tree.size();
  LabeledGraph g;
  g.labels.reserve(n);
  g.adjacency.resize(n);
  g.edge_labels.resize(n);
  for (const auto& tok : tree.nodes) g.labels.push_back(tok.upos);
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = tree.heads[i];
    if (h == DependencyTree::kRoot) continue;
    const auto head = static_cast<std::uint32_t>(h);
    const auto dep = static_cast<std::uint32_t>(i);
    g.adjacency[head].push_back(dep);
    g.edge_labels[head].push_back(tree.deprels[i]);
    g.adjacency[dep].push_back(head);
    g.edge_labels[dep].push_back(tree.deprels[i]);
  }
  return g;
}

std::uint64_t LabelDictionary::intern(const std::string& label) {
  auto [it, inserted] = ids_.try_emplace(label, labels_.size());
  if (inserted) labels_.push_back(label);
  return it->second;
}

WLFeatureVector wl_features(const LabeledGraph& graph, int h, LabelDictionary& dict,
                            bool include_deprel) {
  const std::size_t n = graph.node_count();
  std::vector<std::uint64_t> current(n);
  std::vector<std::uint64_t> all_labels;
  all_labels.reserve(n * static_cast<std::size_t>(h + 1));
  for (std::size_t v = 0; v < n; ++v) {
    current[v] = dict.intern(graph.labels[v]);
    all_labels.push_back(current[v]);
  }

  std::vector<std::uint64_t> next(n);
  std::vector<std::string> neighbours;
  std::string signature;
  for (int it = 1; it <= h; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      neighbours.clear();
      const auto& adj = graph.adjacency[v];
      for (std::size_t k = 0; k < adj.size(); ++k) {
        std::string entry = std::to_string(current[adj[k]]);
        if (include_deprel && it == 1) entry = graph.edge_labels[v][k] + ":" + entry;
        neighbours.push_back(std::move(entry));
      }
      std::sort(neighbours.begin(), neighbours.end());
      signature = std::to_string(current[v]);
      signature += "|[";
      for (std::size_t k = 0; k < neighbours.size(); ++k) {
        if (k) signature.push_back(',');
        signature += neighbours[k];
      }
      signature.push_back(']');
      next[v] = dict.intern(signature);
      all_labels.push_back(next[v]);
    }
    current.swap(next);
  }

  std::sort(all_labels.begin(), all_labels.end());
  WLFeatureVector fv;
  for (std::size_t i = 0; i < all_labels.size();) {
    std::size_t j = i;
    while (j < all_labels.size() && all_labels[j] == all_labels[i]) ++j;
    const auto count = static_cast<std::uint32_t>(j - i);
    fv.counts.push_back({all_labels[i], count});
    fv.self_kernel += static_cast<std::uint64_t>(count) * count;
    i = j;
  }
  return fv;
}

std::uint64_t wl_kernel(const WLFeatureVector& a, const WLFeatureVector& b) noexcept {
  std::uint64_t k = 0;
  auto ia = a.counts.begin();
  auto ib = b.counts.begin();
  while (ia != a.counts.end() && ib != b.counts.end()) {
    if (ia->label < ib->label) {
      ++ia;
    } else if (ib->label < ia->label) {
      ++ib;
    } else {
      k += static_cast<std::uint64_t>(ia->count) * ib->count;
      ++ia;
      ++ib;
    }
  }
  return k;
}

double wl_similarity(const WLFeatureVector& a, const WLFeatureVector& b) noexcept {
  const double k = static_cast<double>(wl_kernel(a, b));
  const double norm = std::sqrt(static_cast<double>(a.self_kernel) * static_cast<double>(b.self_kernel));
  return k / norm;
}

double wl_distance(const WLFeatureVector& a, const WLFeatureVector& b) noexcept {
  const double d = 1.0 - wl_similarity(a, b);
  return d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
}

std::vector<WLFeatureVector> extract_features(const std::vector<const DependencyTree*>& trees,
                                              int h, LabelDictionary& dict, bool include_deprel) {
  // Sequential: label ids depend on first-seen order, which must not vary
  // with scheduling.
  std::vector<WLFeatureVector> out;
  out.reserve(trees.size());
  for (const auto* t : trees) out.push_back(wl_features(tree_to_graph(*t), h, dict, include_deprel));
  return out;
}

}  // namespace divscope::wl
