#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "divscope/analysis.hpp"
#include "divscope/compare.hpp"
#include "divscope/lexical.hpp"
#include "divscope/semantic.hpp"
#include "divscope/syntactic.hpp"

// File-to-file entry points behind each CLI subcommand. Each returns the
// process exit code: 0 success, 1 validation failure, 2 partial failure.
namespace divscope::commands {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitPartial = 2;

/// Seed resolution: explicit flag, then DIVSCOPE_SEED, then kDefaultSeed.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

/// Corpus id used when none is given: the file name up to its first dot.
std::string default_corpus_id(const std::filesystem::path& path);

int run_lexical(const std::filesystem::path& corpus, const lexical::LexicalConfig& config,
                const std::filesystem::path& out);

int run_syntactic(const std::filesystem::path& conllu, const syntactic::SyntacticConfig& config,
                  const std::filesystem::path& out,
                  const std::optional<std::filesystem::path>& emit_distances);

int run_semantic(const std::filesystem::path& embeddings, const semantic::SemanticConfig& config,
                 const std::filesystem::path& out);

struct PatternOptions {
  int n_min = 3;
  int n_max = 6;
  std::size_t top_k = 20;
};

int run_compare(const std::filesystem::path& human, const std::filesystem::path& model,
                const compare::CompareConfig& config, const PatternOptions& patterns,
                const std::filesystem::path& out);

/// Writes table.json and table.csv into out_dir.
int run_bench(const analysis::RunManifest& manifest, const std::filesystem::path& out_dir);

int run_correlate(const std::filesystem::path& table,
                  const std::optional<std::filesystem::path>& manifest,
                  const std::filesystem::path& out);

int run_plot_data(const std::filesystem::path& table, const std::filesystem::path& manifest,
                  const std::filesystem::path& out);

}  // namespace divscope::commands
