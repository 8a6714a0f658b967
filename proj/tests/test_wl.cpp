#include <doctest.h>

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "divscope/random.hpp"
#include "divscope/wl.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace divscope;
using namespace divscope::wl;
using divscope::testing::make_tree;

namespace {

const DependencyTree kDetNoun = make_tree("dn", {{"The", "DET", 2}, {"cat", "NOUN", 0}});
const DependencyTree kNoun = make_tree("n", {{"cats", "NOUN", 0}});

WLFeatureVector features(const DependencyTree& t, int h, LabelDictionary& dict) {
  return wl_features(tree_to_graph(t), h, dict);
}

// Canonical-string view of a feature vector, for readable assertions.
std::map<std::string, std::uint32_t> named(const WLFeatureVector& v, const LabelDictionary& dict) {
  std::map<std::string, std::uint32_t> out;
  for (const auto& e : v.counts) out[dict.label(e.label)] = e.count;
  return out;
}

// Same structure, token positions permuted by perm (new position of old i).
DependencyTree permute(const DependencyTree& t, const std::vector<std::size_t>& perm) {
  DependencyTree out = t;
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.nodes[perm[i]] = t.nodes[i];
    out.deprels[perm[i]] = t.deprels[i];
    out.heads[perm[i]] = t.heads[i] < 0 ? t.heads[i] : static_cast<std::int32_t>(perm[t.heads[i]]);
  }
  return out;
}

}  // namespace

TEST_CASE("tree_to_graph") {
  const auto g = tree_to_graph(kDetNoun);
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.labels == std::vector<std::string>{"DET", "NOUN"});
  CHECK(g.adjacency[0] == std::vector<std::uint32_t>{1});

  const auto s = tree_to_graph(kNoun);
  CHECK(s.node_count() == 1);
  CHECK(s.edge_count() == 0);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g20 = tree_to_graph(testing::random_tree(20, seed, "r"));
    std::size_t degree_sum = 0;
    for (const auto& a : g20.adjacency) degree_sum += a.size();
    CHECK(g20.edge_count() == 19);
    CHECK(degree_sum == 38);
  }
}

TEST_CASE("WL features by hand") {
  LabelDictionary dict;
  const auto dn = features(kDetNoun, 1, dict);
  const auto n = features(kNoun, 1, dict);
  const auto det = std::to_string(dict.intern("DET"));
  const auto noun = std::to_string(dict.intern("NOUN"));

  CHECK(named(dn, dict) == std::map<std::string, std::uint32_t>{
                               {"DET", 1}, {"NOUN", 1}, {det + "|[" + noun + "]", 1}, {noun + "|[" + det + "]", 1}});
  CHECK(dn.self_kernel == 4);
  CHECK(named(n, dict) == std::map<std::string, std::uint32_t>{{"NOUN", 1}, {noun + "|[]", 1}});
  CHECK(n.self_kernel == 2);

  CHECK(wl_kernel(dn, n) == 1);
  CHECK(wl_distance(dn, n) == doctest::Approx(1.0 - 1.0 / std::sqrt(8.0)).epsilon(1e-15));
  CHECK(std::abs(wl_distance(dn, n) - 0.646447) < 1e-6);
  CHECK(wl_distance(dn, dn) == 0.0);
}

TEST_CASE("h = 0 counts only the initial labels") {
  LabelDictionary dict;
  const auto v = features(make_tree("t", {{"a", "DET", 3}, {"b", "DET", 3}, {"c", "NOUN", 0}}), 0, dict);
  CHECK(named(v, dict) == std::map<std::string, std::uint32_t>{{"DET", 2}, {"NOUN", 1}});
  CHECK(v.self_kernel == 5);
}

TEST_CASE("disjoint tags give distance one") {
  LabelDictionary dict;
  const auto a = features(make_tree("a", {{"run", "VERB", 0}, {"fast", "ADV", 1}}), 2, dict);
  const auto b = features(make_tree("b", {{"the", "DET", 2}, {"dog", "NOUN", 0}}), 2, dict);
  CHECK(wl_distance(a, b) == 1.0);
}

TEST_CASE("isomorphism invariance") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto t = testing::random_tree(12, seed, "t");
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed + 100);
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    LabelDictionary dict;
    const auto a = features(t, 3, dict);
    const auto b = features(permute(t, perm), 3, dict);
    CHECK(a == b);
  }
}

TEST_CASE("interned features agree with the string-label oracle") {
  const auto trees = testing::random_trees(100, 1, 15, 314);
  for (int h : {0, 1, 2, 3}) {
    LabelDictionary dict;
    std::vector<WLFeatureVector> fv;
    for (const auto& t : trees) fv.push_back(features(t, h, dict));
    for (std::size_t p = 0; p < 50; ++p) {
      const auto i = 2 * p, j = 2 * p + 1;
      CHECK(std::abs(wl_distance(fv[i], fv[j]) - testing::brute_wl_distance(trees[i], trees[j], h)) <= 1e-12);
    }
  }
}

TEST_CASE("metric bounds and symmetry") {
  const auto trees = testing::random_trees(40, 1, 10, 55);
  LabelDictionary dict;
  std::vector<WLFeatureVector> fv;
  for (const auto& t : trees) fv.push_back(features(t, 2, dict));
  for (std::size_t i = 0; i < fv.size(); ++i) {
    CHECK(wl_distance(fv[i], fv[i]) == 0.0);
    for (std::size_t j = 0; j < fv.size(); ++j) {
      const double d = wl_distance(fv[i], fv[j]);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
      CHECK(d == wl_distance(fv[j], fv[i]));
    }
  }
}

TEST_CASE("normalized WL Gram matrix is PSD") {
  const auto trees = testing::random_trees(200, 1, 15, 2024);
  LabelDictionary dict;
  std::vector<WLFeatureVector> fv;
  for (const auto& t : trees) fv.push_back(features(t, 2, dict));
  Eigen::MatrixXd k(200, 200);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) k(i, j) = wl_similarity(fv[i], fv[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("include_deprel separates relation labels at iteration one") {
  auto a = make_tree("a", {{"x", "DET", 2}, {"y", "NOUN", 0}});
  auto b = a;
  b.deprels[0] = "nmod";
  LabelDictionary dict;
  CHECK(wl_distance(wl_features(tree_to_graph(a), 1, dict, false), wl_features(tree_to_graph(b), 1, dict, false)) == 0.0);
  CHECK(wl_distance(wl_features(tree_to_graph(a), 1, dict, true), wl_features(tree_to_graph(b), 1, dict, true)) > 0.0);
}
