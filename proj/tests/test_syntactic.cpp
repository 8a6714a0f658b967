#include <doctest.h>

#include <cmath>

#include "divscope/error.hpp"
#include "divscope/parallel.hpp"
#include "divscope/syntactic.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace divscope;
using namespace divscope::syntactic;
using divscope::testing::make_tree;

TEST_CASE("identical trees have zero diversity") {
  const auto t = make_tree("t", {{"a", "DET", 2}, {"b", "NOUN", 3}, {"c", "VERB", 0}});
  std::vector<DependencyTree> trees(10, t);
  CHECK(syntactic_diversity(trees, {}).score == 0.0);
}

TEST_CASE("single pair score") {
  std::vector<DependencyTree> trees{make_tree("dn", {{"The", "DET", 2}, {"cat", "NOUN", 0}}),
                                    make_tree("n", {{"cats", "NOUN", 0}})};
  SyntacticConfig cfg;
  cfg.wl_iterations = 1;
  const auto r = syntactic_diversity(trees, cfg);
  CHECK(r.score == doctest::Approx(100.0 * (1.0 - 1.0 / std::sqrt(8.0))).epsilon(1e-14));
  CHECK(std::abs(r.score - 64.6447) < 1e-4);
  CHECK(r.counts["pairs"] == 1);
}

TEST_CASE("fewer than two trees is an error") {
  CHECK_THROWS_AS(syntactic_diversity({}, {}), MetricError);
  CHECK_THROWS_AS(syntactic_diversity({make_tree("n", {{"x", "NOUN", 0}})}, {}), MetricError);
  SyntacticConfig bad;
  bad.max_sentences = 1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("Div_syn matches the naive pairwise oracle") {
  const auto trees = testing::random_trees(150, 1, 15, 77);
  SyntacticConfig cfg;
  CHECK(std::abs(syntactic_diversity(trees, cfg).score - testing::naive_div_syn(trees, 2)) <= 1e-9);
  cfg.wl_iterations = 3;
  CHECK(std::abs(syntactic_diversity(trees, cfg).score - testing::naive_div_syn(trees, 3)) <= 1e-9);
}

TEST_CASE("permutation invariance without subsampling") {
  auto trees = testing::random_trees(120, 2, 12, 5);
  const double base = syntactic_diversity(trees, {}).score;
  std::reverse(trees.begin(), trees.end());
  CHECK(syntactic_diversity(trees, {}).score == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("subsampling is seeded and bounded") {
  const auto trees = testing::random_trees(300, 2, 12, 6);
  SyntacticConfig cfg;
  cfg.max_sentences = 50;
  const auto a = syntactic_diversity(trees, cfg);
  CHECK(a.counts["sampled"] == 50);
  CHECK(a.score == syntactic_diversity(trees, cfg).score);
  cfg.seed += 1;
  CHECK(a.score != syntactic_diversity(trees, cfg).score);
  const auto sel = select_sentences(300, cfg);
  CHECK(std::is_sorted(sel.begin(), sel.end()));
  CHECK(std::adjacent_find(sel.begin(), sel.end()) == sel.end());
}

TEST_CASE("result does not depend on the thread count") {
  const auto trees = testing::random_trees(700, 1, 15, 8);
  set_thread_count(1);
  const double one = syntactic_diversity(trees, {}).score;
  set_thread_count(8);
  const double eight = syntactic_diversity(trees, {}).score;
  CHECK(one == eight);
}

TEST_CASE("distance matrix is symmetric with zero diagonal") {
  const auto trees = testing::random_trees(30, 1, 9, 10);
  const auto m = distance_matrix(trees, {});
  REQUIRE(m.size() == 30);
  double sum = 0.0;
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(m.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 30; ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(m.at(i, j) >= 0.0);
      CHECK(m.at(i, j) <= 1.0);
      if (i < j) sum += m.at(i, j);
    }
  }
  CHECK(100.0 * sum / (30.0 * 29.0 / 2.0) == doctest::Approx(syntactic_diversity(trees, {}).score).epsilon(1e-12));
}
