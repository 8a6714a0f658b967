#include "divscope/commands.hpp"

#include <cstdlib>
#include <iostream>

#include "divscope/corpus_io.hpp"
#include "divscope/error.hpp"
#include "divscope/report.hpp"

namespace divscope::commands {

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* v = std::getenv("DIVSCOPE_SEED"); v && *v) {
    char* end = nullptr;
    const auto seed = std::strtoull(v, &end, 10);
    if (*end != '\0') throw Error("DIVSCOPE_SEED is not an unsigned integer");
    return seed;
  }
  return kDefaultSeed;
}

std::string default_corpus_id(const std::filesystem::path& path) {
  std::string name = path.filename().string();
  const auto dot = name.find('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

namespace {

void print_warnings(const Diagnostics& diag) {
  for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

std::vector<DependencyTree> read_trees(const std::filesystem::path& path) {
  Diagnostics diag;
  auto trees = load_conllu(path, &diag);
  print_warnings(diag);
  return trees;
}

}  // namespace

int run_lexical(const std::filesystem::path& corpus, const lexical::LexicalConfig& config,
                const std::filesystem::path& out) {
  const Corpus c = load_corpus(corpus);
  write_report(out, lexical::lexical_diversity(c, config));
  return kExitOk;
}

int run_syntactic(const std::filesystem::path& conllu, const syntactic::SyntacticConfig& config,
                  const std::filesystem::path& out,
                  const std::optional<std::filesystem::path>& emit_distances) {
  const auto trees = read_trees(conllu);
  DiversityReport report = syntactic::syntactic_diversity(trees, config);
  report.corpus_id = default_corpus_id(conllu);
  write_report(out, report);
  if (emit_distances) {
    const auto m = syntactic::distance_matrix(trees, config);
    std::vector<float> data(m.values.begin(), m.values.end());
    const auto n = static_cast<std::uint32_t>(m.size());
    write_dvem(*emit_distances, n, n, data);
    write_ids_sidecar(ids_sidecar_path(*emit_distances), m.ids);
  }
  return kExitOk;
}

int run_semantic(const std::filesystem::path& embeddings, const semantic::SemanticConfig& config,
                 const std::filesystem::path& out) {
  DiversityReport report = semantic::semantic_diversity(load_embeddings(embeddings), config);
  report.corpus_id = default_corpus_id(embeddings);
  write_report(out, report);
  return kExitOk;
}

int run_compare(const std::filesystem::path& human, const std::filesystem::path& model,
                const compare::CompareConfig& config, const PatternOptions& patterns,
                const std::filesystem::path& out) {
  const auto trees_h = read_trees(human);
  const auto trees_m = read_trees(model);
  const auto emb = compare::kernel_embed(trees_h, trees_m, config);
  for (const auto& w : emb.warnings) std::cerr << "warning: " << w << '\n';
  const auto support = compare::estimate_support(emb.points, emb.sides, config);
  const auto pr = compare::precision_recall(support, config);

  std::vector<const DependencyTree*> sel_h, sel_m;
  for (auto i : emb.human_indices) sel_h.push_back(&trees_h[i]);
  for (auto i : emb.model_indices) sel_m.push_back(&trees_m[i]);
  const auto lists = compare::mine_pos_patterns(sel_h, sel_m, support, patterns.n_min,
                                                patterns.n_max, patterns.top_k);

  nlohmann::json j = pr.to_json();
  j["human_id"] = default_corpus_id(human);
  j["model_id"] = default_corpus_id(model);
  j["samples"] = {{"human", sel_h.size()}, {"model", sel_m.size()}};
  j["embedding"] = {{"dims", emb.points.cols()},
                    {"eigenvalues", std::vector<double>(emb.eigenvalues.begin(), emb.eigenvalues.end())},
                    {"warnings", emb.warnings}};
  j["kmeans"] = {{"wcss", support.wcss}, {"best_restart", support.best_restart}};
  j["patterns"] = lists.to_json();
  j["patterns"]["n_range"] = {patterns.n_min, patterns.n_max};
  j["patterns"]["top_k"] = patterns.top_k;
  write_text_file(out, dump_json(j));
  return kExitOk;
}

int run_bench(const analysis::RunManifest& manifest, const std::filesystem::path& out_dir) {
  analysis::validate_manifest(manifest);
  const auto table = analysis::run_benchmark(manifest);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "table.json", dump_json(table.to_json()));
  write_text_file(out_dir / "table.csv", table.to_csv());
  for (const auto& c : table.cells()) {
    if (!c.report) {
      std::cerr << "error: " << c.corpus_id << "/" << metric_name(c.metric) << ": " << c.error << '\n';
    }
  }
  return table.has_holes() ? kExitPartial : kExitOk;
}

namespace {

analysis::MetricTable read_table(const std::filesystem::path& path) {
  try {
    return analysis::MetricTable::from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string(), 0, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

int run_correlate(const std::filesystem::path& table,
                  const std::optional<std::filesystem::path>& manifest,
                  const std::filesystem::path& out) {
  const auto t = read_table(table);
  analysis::ScoreColumns quality;
  if (manifest) quality = analysis::load_quality(analysis::load_manifest(*manifest));
  const auto corr = analysis::correlation_matrix(t, quality);
  if (out.extension() == ".json") {
    write_text_file(out, dump_json(corr.to_json()));
  } else {
    write_text_file(out, corr.to_csv());
  }
  for (std::size_t i = 0; i < corr.values.size(); ++i) {
    if (!corr.values[i]) return kExitPartial;
  }
  return kExitOk;
}

int run_plot_data(const std::filesystem::path& table, const std::filesystem::path& manifest,
                  const std::filesystem::path& out) {
  const auto t = read_table(table);
  const auto m = analysis::load_manifest(manifest);
  write_text_file(out, analysis::emit_plot_data(t, m));
  return kExitOk;
}

}  // namespace divscope::commands
