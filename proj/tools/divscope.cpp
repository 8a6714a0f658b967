// divscope: lexical, syntactic and semantic diversity of text corpora.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "divscope/commands.hpp"
#include "divscope/error.hpp"
#include "divscope/parallel.hpp"

namespace {

using namespace divscope;

std::pair<int, int> parse_range(const std::string& spec) {
  const auto sep = spec.find("..");
  try {
    if (sep == std::string::npos) {
      const int n = std::stoi(spec);
      return {n, n};
    }
    return {std::stoi(spec.substr(0, sep)), std::stoi(spec.substr(sep + 2))};
  } catch (const std::exception&) {
    throw Error("bad pattern range '" + spec + "' (expected e.g. 3..6)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linguistic diversity metrics for text corpora"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  // lexical
  auto* lex = app.add_subcommand("lexical", "Unique-n lexical diversity of a JSONL corpus");
  std::string lex_corpus, lex_out;
  lexical::LexicalConfig lex_cfg;
  std::optional<std::uint64_t> lex_seed;
  bool no_lowercase = false;
  lex->add_option("--corpus", lex_corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  lex->add_option("--ns", lex_cfg.ns, "n-gram orders")->delimiter(',');
  lex->add_option("--sample", lex_cfg.sample_size, "n-grams sampled per order");
  lex->add_option("--seed", lex_seed);
  lex->add_flag("--no-lowercase", no_lowercase);
  lex->add_option("--out", lex_out, "Report JSON")->required();

  // syntactic
  auto* syn = app.add_subcommand("syntactic", "WL-kernel syntactic diversity of CoNLL-U parses");
  std::string syn_conllu, syn_out, syn_dist;
  syntactic::SyntacticConfig syn_cfg;
  std::optional<std::uint64_t> syn_seed;
  syn->add_option("--conllu", syn_conllu)->required()->check(CLI::ExistingFile);
  syn->add_option("--wl-iters", syn_cfg.wl_iterations);
  syn->add_option("--max-sentences", syn_cfg.max_sentences);
  syn->add_option("--seed", syn_seed);
  syn->add_flag("--include-deprel", syn_cfg.include_deprel);
  syn->add_option("--emit-distances", syn_dist, "Write the distance matrix as DVEM");
  syn->add_option("--out", syn_out)->required();

  // semantic
  auto* sem = app.add_subcommand("semantic", "Cosine-dispersion semantic diversity of embeddings");
  std::string sem_emb, sem_out;
  semantic::SemanticConfig sem_cfg;
  std::optional<std::uint64_t> sem_seed;
  sem->add_option("--embeddings", sem_emb)->required()->check(CLI::ExistingFile);
  sem->add_option("--max-sentences", sem_cfg.max_sentences);
  sem->add_option("--seed", sem_seed);
  sem->add_option("--out", sem_out)->required();

  // compare
  auto* cmp = app.add_subcommand("compare", "Precision/recall of human vs. model tree distributions");
  std::string cmp_h, cmp_m, cmp_out, cmp_range = "3..6";
  compare::CompareConfig cmp_cfg;
  commands::PatternOptions pat;
  std::optional<std::uint64_t> cmp_seed;
  cmp->add_option("--human", cmp_h)->required()->check(CLI::ExistingFile);
  cmp->add_option("--model", cmp_m)->required()->check(CLI::ExistingFile);
  cmp->add_option("--pca-dims", cmp_cfg.pca_dims);
  cmp->add_option("--clusters", cmp_cfg.k_clusters);
  cmp->add_option("--min-support", cmp_cfg.min_support);
  cmp->add_option("--cap", cmp_cfg.per_side_cap);
  cmp->add_option("--restarts", cmp_cfg.kmeans_restarts);
  cmp->add_option("--iters", cmp_cfg.kmeans_iters);
  cmp->add_option("--wl-iters", cmp_cfg.wl_iterations);
  cmp->add_option("--seed", cmp_seed);
  cmp->add_option("--patterns", cmp_range, "POS n-gram orders, e.g. 3..6");
  cmp->add_option("--top", pat.top_k);
  cmp->add_option("--out", cmp_out)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Run every metric for every corpus in a manifest");
  std::string bench_manifest, bench_out;
  std::optional<std::uint64_t> bench_seed;
  std::optional<std::vector<int>> bench_ns;
  std::optional<std::size_t> bench_sample, bench_syn_max, bench_sem_max;
  std::optional<int> bench_wl;
  bool bench_no_lower = false;
  bench->add_option("--manifest", bench_manifest)->required()->check(CLI::ExistingFile);
  bench->add_option("--out-dir", bench_out)->required();
  bench->add_option("--seed", bench_seed, "Overrides every metric seed");
  bench->add_option("--ns", bench_ns)->delimiter(',');
  bench->add_option("--sample", bench_sample);
  bench->add_flag("--no-lowercase", bench_no_lower);
  bench->add_option("--wl-iters", bench_wl);
  bench->add_option("--syn-max-sentences", bench_syn_max);
  bench->add_option("--sem-max-sentences", bench_sem_max);

  // correlate
  auto* corr = app.add_subcommand("correlate", "Pearson correlation between metric columns");
  std::string corr_table, corr_manifest, corr_out;
  corr->add_option("--table", corr_table)->required()->check(CLI::ExistingFile);
  corr->add_option("--manifest", corr_manifest, "Manifest with quality score files")->check(CLI::ExistingFile);
  corr->add_option("--out", corr_out, "CSV, or JSON when the name ends in .json")->required();

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Long-format CSV for diversity plots");
  std::string plot_table, plot_manifest, plot_out;
  plot->add_option("--table", plot_table)->required()->check(CLI::ExistingFile);
  plot->add_option("--manifest", plot_manifest)->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : commands::kExitValidation;
  }
  if (threads > 0) set_thread_count(threads);

  try {
    if (*lex) {
      lex_cfg.seed = commands::resolve_seed(lex_seed);
      lex_cfg.lowercase = !no_lowercase;
      return commands::run_lexical(lex_corpus, lex_cfg, lex_out);
    }
    if (*syn) {
      syn_cfg.seed = commands::resolve_seed(syn_seed);
      std::optional<std::filesystem::path> dist;
      if (!syn_dist.empty()) dist = syn_dist;
      return commands::run_syntactic(syn_conllu, syn_cfg, syn_out, dist);
    }
    if (*sem) {
      sem_cfg.seed = commands::resolve_seed(sem_seed);
      return commands::run_semantic(sem_emb, sem_cfg, sem_out);
    }
    if (*cmp) {
      cmp_cfg.seed = commands::resolve_seed(cmp_seed);
      std::tie(pat.n_min, pat.n_max) = parse_range(cmp_range);
      return commands::run_compare(cmp_h, cmp_m, cmp_cfg, pat, cmp_out);
    }
    if (*bench) {
      auto manifest = analysis::load_manifest(bench_manifest);
      if (bench_seed) manifest.lexical.seed = manifest.syntactic.seed = manifest.semantic.seed = *bench_seed;
      if (bench_ns) manifest.lexical.ns = *bench_ns;
      if (bench_sample) manifest.lexical.sample_size = *bench_sample;
      if (bench_no_lower) manifest.lexical.lowercase = false;
      if (bench_wl) manifest.syntactic.wl_iterations = *bench_wl;
      if (bench_syn_max) manifest.syntactic.max_sentences = *bench_syn_max;
      if (bench_sem_max) manifest.semantic.max_sentences = *bench_sem_max;
      return commands::run_bench(manifest, bench_out);
    }
    if (*corr) {
      std::optional<std::filesystem::path> m;
      if (!corr_manifest.empty()) m = corr_manifest;
      return commands::run_correlate(corr_table, m, corr_out);
    }
    if (*plot) return commands::run_plot_data(plot_table, plot_manifest, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return commands::kExitValidation;
  }
  return commands::kExitOk;
}
