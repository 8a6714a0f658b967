// Acceptance gate. One line per criterion:
//   PASS|FAIL  <name>  <detail>
// Usage: acceptance <path to divscope CLI> <fixtures dir>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <iostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "divscope/analysis.hpp"
#include "divscope/compare.hpp"
#include "divscope/corpus_io.hpp"
#include "divscope/lexical.hpp"
#include "divscope/parallel.hpp"
#include "divscope/random.hpp"
#include "divscope/report.hpp"
#include "divscope/semantic.hpp"
#include "divscope/syntactic.hpp"
#include "divscope/wl.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace divscope;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

fs::path g_cli;
fs::path g_fixtures;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds_since(t0);
}

std::vector<const DependencyTree*> ptrs(const std::vector<DependencyTree>& trees) {
  std::vector<const DependencyTree*> out;
  for (const auto& t : trees) out.push_back(&t);
  return out;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

int cli(const std::string& args) {
  const std::string cmd = q(g_cli) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// ---------------------------------------------------------------------------

void unique_n_oracle(Outcome& o) {
  const Corpus c = testing::zipf_corpus(1000, 30, 80, 4000, 1.07, 2024);
  lexical::LexicalConfig cfg;
  cfg.sample_size = 20'000;
  DiversityReport r;
  const double secs = timed([&] { r = lexical::lexical_diversity(c, cfg); });

  double sum = 0.0;
  for (int n : cfg.ns) {
    const auto total = r.counts.at("per_n").at(std::to_string(n)).at("total").get<std::size_t>();
    std::vector<std::size_t> draw;
    if (total > cfg.sample_size) draw = sample_without_replacement(total, cfg.sample_size, lexical::sample_seed(cfg, n));
    const double want = testing::hashset_unique_n(c, n, cfg.lowercase, total > cfg.sample_size ? &draw : nullptr);
    const double got = r.counts.at("per_n").at(std::to_string(n)).at("score").get<double>();
    o.expect(got == want, "n=" + std::to_string(n) + " equals recount");
    sum += want;
  }
  o.expect(r.score == sum / 3.0, "mean over n");
  o.expect(secs < 5.0, "runtime < 5 s");
  o.detail << "score=" << r.score << " time=" << secs << "s";
}

void hand_wl_anchor(Outcome& o) {
  const auto dn = testing::make_tree("a", {{"the", "DET", 2}, {"dog", "NOUN", 0}});
  const auto n = testing::make_tree("b", {{"dog", "NOUN", 0}});
  wl::LabelDictionary dict;
  const auto fa = wl::extract_features({&dn, &n}, 1, dict);
  const double d = wl::wl_distance(fa[0], fa[1]);
  const double want = 1.0 - 1.0 / std::sqrt(8.0);
  o.expect(std::abs(d - want) <= 1e-12, "1 - 1/sqrt(8)");

  const auto t = testing::random_tree(12, 5, "t");
  const auto t2 = t;
  wl::LabelDictionary d2;
  const auto ft = wl::extract_features({&t, &t2}, 2, d2);
  o.expect(wl::wl_distance(ft[0], ft[1]) == 0.0, "identical -> 0");

  const auto x = testing::make_tree("x", {{"a", "DET", 2}, {"b", "NOUN", 0}});
  const auto y = testing::make_tree("y", {{"c", "VERB", 0}, {"d", "ADV", 1}});
  wl::LabelDictionary d3;
  const auto fx = wl::extract_features({&x, &y}, 2, d3);
  o.expect(wl::wl_distance(fx[0], fx[1]) == 1.0, "disjoint labels -> 1");
  o.detail << "d=" << format_double(d) << " expected=" << format_double(want);
}

void kernel_psd(Outcome& o) {
  const auto trees = testing::random_trees(200, 1, 15, 7);
  double min_raw = 0, min_cos = 0;
  const double secs = timed([&] {
    wl::LabelDictionary dict;
    const auto f = wl::extract_features(ptrs(trees), 2, dict);
    Eigen::MatrixXd k(200, 200);
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) k(i, j) = static_cast<double>(wl::wl_kernel(f[i], f[j]));
    }
    min_raw = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k, Eigen::EigenvaluesOnly).eigenvalues()(0);
    min_cos = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(compare::wl_gram(ptrs(trees), 2), Eigen::EigenvaluesOnly)
                  .eigenvalues()(0);
  });
  o.expect(min_raw >= -1e-8, "raw kernel min eigenvalue");
  o.expect(min_cos >= -1e-8, "normalised kernel min eigenvalue");
  o.expect(secs < 30.0, "runtime < 30 s");
  o.detail << "min_eig raw=" << min_raw << " normalised=" << min_cos << " time=" << secs << "s";
}

void pairwise_oracle(Outcome& o) {
  const auto trees = testing::random_trees(300, 1, 15, 99);
  syntactic::SyntacticConfig cfg;
  DiversityReport r;
  const double secs = timed([&] { r = syntactic::syntactic_diversity(trees, cfg); });
  const double want = testing::naive_div_syn(trees, cfg.wl_iterations);
  o.expect(std::abs(r.score - want) <= 1e-9, "|optimised - naive| <= 1e-9");
  o.expect(secs < 60.0, "runtime < 60 s");
  o.detail << "div_syn=" << r.score << " naive=" << want << " diff=" << std::abs(r.score - want)
           << " time=" << secs << "s";
}

EmbeddingMatrix matrix_of(std::vector<std::vector<float>> rows) {
  EmbeddingMatrix m;
  m.dims = static_cast<std::uint32_t>(rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    m.ids.push_back("r" + std::to_string(i));
    m.data.insert(m.data.end(), rows[i].begin(), rows[i].end());
  }
  return m;
}

void div_sem_identities(Outcome& o) {
  const double orth = semantic::semantic_diversity(matrix_of({{1, 0, 0}, {0, 1, 0}}), {}).score;
  o.expect(orth == 50.0, "orthogonal -> 50");
  const double same =
      semantic::semantic_diversity(matrix_of({{0.2f, -3, 7}, {0.2f, -3, 7}, {0.2f, -3, 7}, {0.2f, -3, 7}}), {}).score;
  o.expect(same == 0.0, "identical -> 0");
  const auto emb = testing::random_embeddings(1000, 64, 12);
  const double got = semantic::semantic_diversity(emb, {}).score;
  const double want = testing::naive_div_sem(emb);
  o.expect(std::abs(got - want) <= 1e-9, "|gram - double loop| <= 1e-9");
  o.detail << "orthogonal=" << orth << " identical=" << same << " random=" << got << " diff=" << std::abs(got - want);
}

void mds_fidelity(Outcome& o) {
  const auto human = testing::random_trees(50, 1, 12, 31, "h");
  const auto model = testing::random_trees(50, 1, 12, 32, "m");
  compare::CompareConfig cfg;
  cfg.pca_dims = 100;
  const auto emb = compare::kernel_embed(human, model, cfg);
  std::vector<DependencyTree> ordered;
  for (auto i : emb.human_indices) ordered.push_back(human[i]);
  for (auto i : emb.model_indices) ordered.push_back(model[i]);
  o.expect(ordered.size() == 100, "all 100 trees embedded");
  const auto gram = compare::wl_gram(ptrs(ordered), cfg.wl_iterations);
  double worst = 0;
  for (Eigen::Index i = 0; i < emb.points.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < emb.points.rows(); ++j) {
      const double induced = gram(i, i) + gram(j, j) - 2 * gram(i, j);
      worst = std::max(worst, std::abs((emb.points.row(i) - emb.points.row(j)).squaredNorm() - induced));
    }
  }
  o.expect(worst <= 1e-6, "max |d_mds - d_kernel| <= 1e-6");
  o.detail << "max_abs_err=" << worst << " dims=" << emb.points.cols();
}

void precision_recall_endpoints(Outcome& o) {
  compare::CompareConfig cfg;
  cfg.k_clusters = 8;
  cfg.min_support = 1;
  cfg.pca_dims = 20;

  const auto trees = testing::random_trees(120, 1, 12, 41);
  const auto self_emb = compare::kernel_embed(trees, trees, cfg);
  const auto self_pr = compare::precision_recall(compare::estimate_support(self_emb.points, self_emb.sides, cfg), cfg);
  o.expect(self_pr.precision == 100.0 && self_pr.recall == 100.0, "self comparison 100/100");

  // Disjoint labels on each side: kernel distance 1 between every cross pair.
  std::vector<DependencyTree> left, right;
  for (int i = 0; i < 40; ++i) {
    left.push_back(testing::make_tree("l" + std::to_string(i), {{"a", "DET", 2}, {"b", "NOUN", 0}}));
    right.push_back(testing::make_tree("r" + std::to_string(i), {{"c", "VERB", 0}, {"d", "ADV", 1}, {"e", "ADV", 1}}));
  }
  cfg.k_clusters = 2;
  const auto dis_emb = compare::kernel_embed(left, right, cfg);
  const auto dis_pr = compare::precision_recall(compare::estimate_support(dis_emb.points, dis_emb.sides, cfg), cfg);
  o.expect(dis_pr.precision == 0.0 && dis_pr.recall == 0.0, "disjoint support 0/0");

  // Planted trigram: ADV ADV ADP twice in each human-only tree.
  std::vector<DependencyTree> human, model;
  const char* nouns[] = {"river", "door", "hill", "market"};
  for (int i = 0; i < 30; ++i) {
    human.push_back(testing::make_tree("p" + std::to_string(i),
                                       {{"went", "VERB", 0},
                                        {"right", "ADV", 1},
                                        {"along", "ADV", 1},
                                        {"with", "ADP", 5},
                                        {nouns[i % 4], "NOUN", 1},
                                        {"and", "CCONJ", 1},
                                        {"straight", "ADV", 1},
                                        {"back", "ADV", 1},
                                        {"to", "ADP", 10},
                                        {"them", "PRON", 1}}));
  }
  for (int i = 0; i < 90; ++i) {
    auto t = testing::make_tree("s" + std::to_string(i),
                                {{"the", "DET", 2}, {"cat", "NOUN", 3}, {"sat", "VERB", 0}, {".", "PUNCT", 3}});
    (i < 30 ? human : model).push_back(std::move(t));
  }
  cfg.min_support = 5;
  const auto emb = compare::kernel_embed(human, model, cfg);
  const auto support = compare::estimate_support(emb.points, emb.sides, cfg);
  std::vector<const DependencyTree*> hs, ms;
  for (auto i : emb.human_indices) hs.push_back(&human[i]);
  for (auto i : emb.model_indices) ms.push_back(&model[i]);
  const auto lists = compare::mine_pos_patterns(hs, ms, support, 3, 6, 10);
  const auto& top = lists.human.at(3);
  const bool planted = !top.empty() && top.front().pattern == std::vector<std::string>{"ADV", "ADV", "ADP"};
  o.expect(planted, "planted trigram ranks first");
  o.detail << "self=" << self_pr.precision << "/" << self_pr.recall << " disjoint=" << dis_pr.precision << "/"
           << dis_pr.recall << " top_human_trigram=";
  if (!top.empty()) {
    for (const auto& t : top.front().pattern) o.detail << t << ' ';
    o.detail << "(count " << top.front().human_count << ")";
  }
}

void determinism(Outcome& o) {
  const auto base = testing::temp_dir("acceptance_det");
  const auto f = g_fixtures;
  const auto big = testing::temp_dir("acceptance_det_inputs");
  testing::write_corpus_files(big, "h", 1, 150);
  testing::write_corpus_files(big, "m", 2, 150);
  struct Run {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::vector<Run> runs{
      {"lexical", "lexical --corpus " + q(big / "h.jsonl") + " --sample 500 --out {}/out.json", {"out.json"}},
      {"syntactic", "syntactic --conllu " + q(big / "h.conllu") + " --max-sentences 100 --emit-distances {}/d.dvem --out {}/out.json",
       {"out.json", "d.dvem", "d.ids.jsonl"}},
      {"semantic", "semantic --embeddings " + q(big / "m.dvem") + " --max-sentences 100 --out {}/out.json", {"out.json"}},
      {"compare", "compare --human " + q(big / "h.conllu") + " --model " + q(big / "m.conllu") +
                      " --clusters 6 --min-support 3 --pca-dims 10 --cap 120 --restarts 5 --out {}/out.json",
       {"out.json"}},
      {"bench", "bench --manifest " + q(f / "manifest.json") + " --out-dir {}", {"table.json", "table.csv"}},
      {"correlate", "correlate --table {}/../bench_src/table.json --manifest " + q(f / "manifest.json") + " --out {}/corr.csv",
       {"corr.csv"}},
      {"plot-data", "plot-data --table {}/../bench_src/table.json --manifest " + q(f / "manifest.json") + " --out {}/plot.csv",
       {"plot.csv"}},
  };
  if (cli("bench --manifest " + q(f / "manifest.json") + " --out-dir " + q(base / "bench_src")) != 0) {
    o.expect(false, "bench source table");
    return;
  }
  std::size_t identical = 0;
  for (const auto& run : runs) {
    std::vector<std::string> outputs;
    int attempt = 0;
    for (int threads : {1, 8, 1, 8}) {
      const auto dir = base / (run.name + "_" + std::to_string(attempt++));
      fs::create_directories(dir);
      std::string args = run.args;
      for (auto p = args.find("{}"); p != std::string::npos; p = args.find("{}")) args.replace(p, 2, dir.string());
      const int rc = cli("--threads " + std::to_string(threads) + " " + args);
      if (rc != 0 && rc != 2) {
        o.expect(false, run.name + " exit code " + std::to_string(rc));
        break;
      }
      std::string all;
      for (const auto& file : run.files) all += read_text_file(dir / file);
      outputs.push_back(std::move(all));
    }
    bool same = outputs.size() == 4;
    for (const auto& out : outputs) same = same && out == outputs[0];
    o.expect(same, run.name + " byte-identical");
    identical += same;
  }
  o.detail << identical << "/" << runs.size() << " subcommands byte-identical at 1 and 8 threads";
}

void pearson_anchors(Outcome& o) {
  const std::vector<double> a{1, 2, 3}, b{2, 4, 6}, c{1, 3, 2};
  const double r1 = analysis::pearson(a, b), r2 = analysis::pearson(a, c);
  o.expect(std::abs(r1 - 1.0) <= 1e-12, "(1,2,3)/(2,4,6) -> 1");
  o.expect(std::abs(r2 - 0.5) <= 1e-12, "(1,2,3)/(1,3,2) -> 0.5");

  analysis::MetricTable table;
  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    for (Metric m : {Metric::kLexical, Metric::kSyntactic, Metric::kSemantic}) {
      DiversityReport r;
      r.corpus_id = "c" + std::to_string(i);
      r.metric = m;
      r.score = 100 * rng.unit();
      table.add({r.corpus_id, m, r, {}});
    }
  }
  const auto cm = analysis::correlation_matrix(table);
  bool sym = true, diag = true;
  for (std::size_t i = 0; i < cm.columns.size(); ++i) {
    diag = diag && cm.at(i, i) && *cm.at(i, i) == 1.0;
    for (std::size_t j = 0; j < cm.columns.size(); ++j) sym = sym && cm.at(i, j) == cm.at(j, i);
  }
  o.expect(sym, "symmetric");
  o.expect(diag, "unit diagonal");
  o.detail << "r1=" << r1 << " r2=" << r2;
}

void report_format(Outcome& o) {
  const auto dir = testing::temp_dir("acceptance_report");
  const int rc = cli("bench --manifest " + q(g_fixtures / "manifest.json") + " --out-dir " + q(dir));
  o.expect(rc == 0, "bench exit 0");
  if (rc != 0) return;
  const auto table = analysis::MetricTable::from_json(nlohmann::json::parse(read_text_file(dir / "table.json")));
  o.expect(table.cells().size() == 9, "9 cells");
  for (const auto& c : table.cells()) {
    o.expect(c.score() && *c.score() >= 0.0 && *c.score() <= 100.0, c.corpus_id + " score in [0,100]");
  }
  const auto csv = lines_of(read_text_file(dir / "table.csv"));
  o.expect(!csv.empty() && csv[0] == "corpus_id,lexical,syntactic,semantic", "table header");
  o.expect(csv.size() == 4, "one row per corpus");
  for (std::size_t i = 1; i < csv.size(); ++i) o.expect(parse_csv_line(csv[i]).size() == 4, "4 fields");

  const int prc = cli("plot-data --table " + q(dir / "table.json") + " --manifest " + q(g_fixtures / "manifest.json") +
                      " --out " + q(dir / "plot.csv"));
  o.expect(prc == 0, "plot-data exit 0");
  const auto plot = lines_of(read_text_file(dir / "plot.csv"));
  o.expect(!plot.empty() && plot[0] == "task,corpus_id,role,metric,score", "plot header");
  std::set<std::string> roles;
  for (std::size_t i = 1; i < plot.size(); ++i) {
    const auto f = parse_csv_line(plot[i]);
    if (f.size() == 5) roles.insert(f[2]);
  }
  o.expect(roles.count("human") && roles.count("input") && roles.count("model"), "role flags");
  o.expect(plot.size() == 10, "9 plot rows");
  o.detail << "table:";
  for (std::size_t i = 1; i < csv.size(); ++i) o.detail << " " << csv[i];
}

void throughput(Outcome& o) {
  const auto trees = testing::random_trees(10'000, 8, 22, 77);
  std::size_t nodes = 0;
  for (const auto& t : trees) nodes += t.size();
  DiversityReport r;
  const double secs = timed([&] { r = syntactic::syntactic_diversity(trees, {}); });
  o.expect(r.counts.at("sampled") == 10'000, "all 10,000 trees used");
  o.expect(secs < 600.0, "runtime < 10 min");
  o.detail << "mean_nodes=" << static_cast<double>(nodes) / 10'000.0 << " div_syn=" << r.score << " time=" << secs
           << "s threads=" << thread_count();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <divscope cli> <fixtures dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_fixtures = argv[2];

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"unique-n-oracle", unique_n_oracle},
      {"hand-wl-anchor", hand_wl_anchor},
      {"kernel-psd", kernel_psd},
      {"pairwise-oracle", pairwise_oracle},
      {"div-sem-identities", div_sem_identities},
      {"mds-fidelity", mds_fidelity},
      {"precision-recall-endpoints", precision_recall_endpoints},
      {"determinism", determinism},
      {"pearson-anchors", pearson_anchors},
      {"report-format", report_format},
      {"throughput", throughput},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "exception: " << e.what();
    }
    std::cout << (o.ok ? "PASS  " : "FAIL  ") << name << "  " << o.detail.str() << std::endl;
    failed += !o.ok;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
