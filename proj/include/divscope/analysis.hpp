#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "divscope/lexical.hpp"
#include "divscope/semantic.hpp"
#include "divscope/syntactic.hpp"
#include "divscope/types.hpp"

namespace divscope::analysis {

enum class Role { kHuman, kModel, kInput };

std::string_view role_name(Role r);
Role parse_role(std::string_view name);

struct ManifestEntry {
  std::string corpus_id;
  Role role = Role::kModel;
  std::string task;
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> conllu;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> quality;
};

struct RunManifest {
  std::vector<ManifestEntry> entries;
  std::vector<Metric> metrics{Metric::kLexical, Metric::kSyntactic, Metric::kSemantic};
  lexical::LexicalConfig lexical;
  syntactic::SyntacticConfig syntactic;
  semantic::SemanticConfig semantic;

  /// Metrics computed for this entry: requested metrics whose input is set.
  std::vector<Metric> metrics_for(const ManifestEntry& entry) const;
};

/// Parses a JSON manifest. Relative paths resolve against base_dir. Seeds
/// fall back from the per-metric block to the top-level "seed", then to
/// DIVSCOPE_SEED, then to kDefaultSeed.
RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& path);

/// Throws Error naming the offending entry on duplicate/empty ids or
/// missing files.
void validate_manifest(const RunManifest& manifest);

struct MetricCell {
  std::string corpus_id;
  Metric metric = Metric::kLexical;
  std::optional<DiversityReport> report;
  std::string error;  // set iff report is empty

  std::optional<double> score() const {
    return report ? std::optional<double>(report->score) : std::nullopt;
  }
};

/// Corpus x metric result grid; cells ordered by (entry order, metric order).
class MetricTable {
 public:
  void add(MetricCell cell);
  const std::vector<MetricCell>& cells() const noexcept { return cells_; }
  const MetricCell* find(const std::string& corpus_id, Metric metric) const;
  std::vector<std::string> corpus_ids() const;
  std::vector<Metric> metrics() const;
  bool has_holes() const;

  nlohmann::json to_json() const;
  static MetricTable from_json(const nlohmann::json& j);
  /// corpus_id,lexical,syntactic,semantic with empty fields for holes.
  std::string to_csv() const;

 private:
  std::vector<MetricCell> cells_;
};

MetricTable run_benchmark(const RunManifest& manifest);

/// Product-moment correlation; throws MetricError on length mismatch,
/// length < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> columns;
  std::vector<std::optional<double>> values;  // row-major, nullopt = undefined

  std::optional<double> at(std::size_t i, std::size_t j) const {
    return values[i * columns.size() + j];
  }
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Named per-corpus score columns, e.g. quality metrics.
using ScoreColumns = std::map<std::string, std::map<std::string, double>>;

/// Reads each entry's quality file ({"name": number, ...}) into columns.
ScoreColumns load_quality(const RunManifest& manifest);

/// Pearson over every pair of metric columns (then quality columns) using
/// the corpus ids both columns define. Undefined cells stay empty.
CorrelationMatrix correlation_matrix(const MetricTable& table,
                                     const ScoreColumns& quality = {});

/// Long-format CSV: task,corpus_id,role,metric,score.
std::string emit_plot_data(const MetricTable& table, const RunManifest& manifest);

}  // namespace divscope::analysis
