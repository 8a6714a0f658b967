#include "divscope/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <unordered_set>

#include "divscope/corpus_io.hpp"
#include "divscope/error.hpp"
#include "divscope/parallel.hpp"
#include "divscope/report.hpp"

namespace divscope::analysis {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::kHuman: return "human";
    case Role::kModel: return "model";
    case Role::kInput: return "input";
  }
  return "model";
}

Role parse_role(std::string_view name) {
  if (name == "human") return Role::kHuman;
  if (name == "model") return Role::kModel;
  if (name == "input") return Role::kInput;
  throw Error("unknown role '" + std::string(name) + "' (expected human, model or input)");
}

std::vector<Metric> RunManifest::metrics_for(const ManifestEntry& entry) const {
  std::vector<Metric> out;
  for (Metric m : metrics) {
    const bool has_input = (m == Metric::kLexical && entry.corpus) ||
                           (m == Metric::kSyntactic && entry.conllu) ||
                           (m == Metric::kSemantic && entry.embeddings);
    if (has_input) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifest

namespace {

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("DIVSCOPE_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const auto seed = std::strtoull(v, &end, 10);
  if (*end != '\0') throw Error("DIVSCOPE_SEED is not an unsigned integer");
  return seed;
}

template <typename T>
void read_opt(const nlohmann::json& block, const char* key, T& field) {
  if (block.contains(key)) field = block.at(key).get<T>();
}

}  // namespace

RunManifest parse_manifest(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  RunManifest m;
  try {
    std::uint64_t seed = kDefaultSeed;
    if (const auto e = env_seed()) seed = *e;
    read_opt(j, "seed", seed);
    m.lexical.seed = m.syntactic.seed = m.semantic.seed = seed;

    if (j.contains("metrics")) {
      m.metrics.clear();
      for (const auto& name : j.at("metrics")) m.metrics.push_back(parse_metric(name.get<std::string>()));
    }
    if (j.contains("lexical")) {
      const auto& b = j.at("lexical");
      read_opt(b, "ns", m.lexical.ns);
      read_opt(b, "sample_size", m.lexical.sample_size);
      read_opt(b, "seed", m.lexical.seed);
      read_opt(b, "lowercase", m.lexical.lowercase);
    }
    if (j.contains("syntactic")) {
      const auto& b = j.at("syntactic");
      read_opt(b, "wl_iterations", m.syntactic.wl_iterations);
      read_opt(b, "max_sentences", m.syntactic.max_sentences);
      read_opt(b, "seed", m.syntactic.seed);
      read_opt(b, "include_deprel", m.syntactic.include_deprel);
    }
    if (j.contains("semantic")) {
      const auto& b = j.at("semantic");
      read_opt(b, "max_sentences", m.semantic.max_sentences);
      read_opt(b, "seed", m.semantic.seed);
    }
    auto path_of = [&](const nlohmann::json& e, const char* key) -> std::optional<std::filesystem::path> {
      if (!e.contains(key) || e.at(key).is_null()) return std::nullopt;
      std::filesystem::path p = e.at(key).get<std::string>();
      return p.is_absolute() ? p : base_dir / p;
    };
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.corpus_id = e.at("id").get<std::string>();
      entry.role = parse_role(e.value("role", std::string("model")));
      entry.task = e.value("task", std::string());
      entry.corpus = path_of(e, "corpus");
      entry.conllu = path_of(e, "conllu");
      entry.embeddings = path_of(e, "embeddings");
      entry.quality = path_of(e, "quality");
      m.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid manifest: ") + e.what());
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string(), 0, std::string("malformed JSON: ") + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

void validate_manifest(const RunManifest& manifest) {
  manifest.lexical.validate();
  manifest.syntactic.validate();
  manifest.semantic.validate();
  if (manifest.entries.empty()) throw Error("manifest has no entries");
  std::unordered_set<std::string> ids;
  for (const auto& e : manifest.entries) {
    if (e.corpus_id.empty()) throw Error("manifest entry with empty id");
    if (!ids.insert(e.corpus_id).second) throw Error("manifest entry '" + e.corpus_id + "': duplicate id");
    auto check = [&](const std::optional<std::filesystem::path>& p, const char* what) {
      if (p && !std::filesystem::is_regular_file(*p)) {
        throw Error("manifest entry '" + e.corpus_id + "': " + what + " path '" + p->string() +
                    "' does not exist");
      }
    };
    check(e.corpus, "corpus");
    check(e.conllu, "conllu");
    check(e.embeddings, "embeddings");
    if (e.embeddings) check(ids_sidecar_path(*e.embeddings), "embeddings ids sidecar");
    check(e.quality, "quality");
  }
}

// ---------------------------------------------------------------------------
// MetricTable

void MetricTable::add(MetricCell cell) {
  if (find(cell.corpus_id, cell.metric)) {
    throw Error("duplicate cell (" + cell.corpus_id + ", " + std::string(metric_name(cell.metric)) + ")");
  }
  cells_.push_back(std::move(cell));
}

const MetricCell* MetricTable::find(const std::string& corpus_id, Metric metric) const {
  for (const auto& c : cells_) {
    if (c.corpus_id == corpus_id && c.metric == metric) return &c;
  }
  return nullptr;
}

std::vector<std::string> MetricTable::corpus_ids() const {
  std::vector<std::string> ids;
  for (const auto& c : cells_) {
    if (std::find(ids.begin(), ids.end(), c.corpus_id) == ids.end()) ids.push_back(c.corpus_id);
  }
  return ids;
}

std::vector<Metric> MetricTable::metrics() const {
  std::set<Metric> seen;
  for (const auto& c : cells_) seen.insert(c.metric);
  return {seen.begin(), seen.end()};
}

bool MetricTable::has_holes() const {
  return std::any_of(cells_.begin(), cells_.end(), [](const MetricCell& c) { return !c.report; });
}

nlohmann::json MetricTable::to_json() const {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : cells_) {
    nlohmann::json cell = {{"corpus_id", c.corpus_id}, {"metric", metric_name(c.metric)}};
    if (c.report) {
      cell["score"] = c.report->score;
      cell["report"] = report_to_json(*c.report);
    } else {
      cell["score"] = nullptr;
      cell["error"] = c.error;
    }
    cells.push_back(std::move(cell));
  }
  return {{"cells", cells}};
}

MetricTable MetricTable::from_json(const nlohmann::json& j) {
  MetricTable t;
  try {
    for (const auto& c : j.at("cells")) {
      MetricCell cell;
      cell.corpus_id = c.at("corpus_id").get<std::string>();
      cell.metric = parse_metric(c.at("metric").get<std::string>());
      if (c.contains("report")) {
        cell.report = report_from_json(c.at("report"));
      } else {
        cell.error = c.value("error", std::string("missing"));
      }
      t.add(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid metric table: ") + e.what());
  }
  return t;
}

std::string MetricTable::to_csv() const {
  std::string out = "corpus_id,lexical,syntactic,semantic\n";
  for (const auto& id : corpus_ids()) {
    out += csv_field(id);
    for (Metric m : {Metric::kLexical, Metric::kSyntactic, Metric::kSemantic}) {
      out.push_back(',');
      const auto* c = find(id, m);
      if (c && c->report) out += format_double(c->report->score);
    }
    out.push_back('\n');
  }
  return out;
}

MetricTable run_benchmark(const RunManifest& manifest) {
  validate_manifest(manifest);
  struct Job {
    const ManifestEntry* entry;
    Metric metric;
  };
  std::vector<Job> jobs;
  for (const auto& e : manifest.entries) {
    for (Metric m : manifest.metrics_for(e)) jobs.push_back({&e, m});
  }
  std::vector<MetricCell> cells(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& [entry, metric] = jobs[i];
    MetricCell& cell = cells[i];
    cell.corpus_id = entry->corpus_id;
    cell.metric = metric;
    try {
      DiversityReport r;
      switch (metric) {
        case Metric::kLexical: {
          Corpus corpus = load_corpus(*entry->corpus);
          corpus.id = entry->corpus_id;
          r = lexical::lexical_diversity(corpus, manifest.lexical);
          break;
        }
        case Metric::kSyntactic:
          r = syntactic::syntactic_diversity(load_conllu(*entry->conllu), manifest.syntactic);
          break;
        case Metric::kSemantic:
          r = semantic::semantic_diversity(load_embeddings(*entry->embeddings), manifest.semantic);
          break;
      }
      r.corpus_id = entry->corpus_id;
      cell.report = std::move(r);
    } catch (const std::exception& ex) {
      cell.error = ex.what();
    }
  });
  MetricTable table;
  for (auto& c : cells) table.add(std::move(c));
  return table;
}

// ---------------------------------------------------------------------------
// Correlation

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError("pearson: length mismatch");
  if (x.size() < 2) throw MetricError("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ScoreColumns load_quality(const RunManifest& manifest) {
  ScoreColumns cols;
  for (const auto& e : manifest.entries) {
    if (!e.quality) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(*e.quality));
    } catch (const nlohmann::json::parse_error& ex) {
      throw FormatError(e.quality->string(), 0, std::string("malformed JSON: ") + ex.what());
    }
    if (!j.is_object()) throw FormatError(e.quality->string(), 0, "expected an object of scores");
    for (const auto& [name, value] : j.items()) {
      if (!value.is_number()) {
        throw FormatError(e.quality->string(), 0, "score '" + name + "' is not a number");
      }
      cols[name][e.corpus_id] = value.get<double>();
    }
  }
  return cols;
}

CorrelationMatrix correlation_matrix(const MetricTable& table, const ScoreColumns& quality) {
  std::vector<std::pair<std::string, std::map<std::string, double>>> columns;
  for (Metric m : table.metrics()) {
    std::map<std::string, double> col;
    for (const auto& c : table.cells()) {
      if (c.metric == m && c.report) col[c.corpus_id] = c.report->score;
    }
    columns.emplace_back(std::string(metric_name(m)), std::move(col));
  }
  for (const auto& [name, col] : quality) columns.emplace_back(name, col);

  CorrelationMatrix out;
  const std::size_t k = columns.size();
  for (const auto& c : columns) out.columns.push_back(c.first);
  out.values.assign(k * k, std::nullopt);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      std::vector<double> x, y;
      for (const auto& [id, v] : columns[a].second) {
        const auto it = columns[b].second.find(id);
        if (it == columns[b].second.end()) continue;
        x.push_back(v);
        y.push_back(it->second);
      }
      std::optional<double> r;
      try {
        r = pearson(x, y);
        if (a == b) r = 1.0;
      } catch (const MetricError&) {
      }
      out.values[a * k + b] = r;
      out.values[b * k + a] = r;
    }
  }
  return out;
}

std::string CorrelationMatrix::to_csv() const {
  std::string out;
  for (const auto& c : columns) out += "," + csv_field(c);
  out.push_back('\n');
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out += csv_field(columns[i]);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const auto v = at(i, j);
      out += "," + (v ? format_double(*v) : std::string("NA"));
    }
    out.push_back('\n');
  }
  return out;
}

nlohmann::json CorrelationMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const auto v = at(i, j);
      row.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  return {{"columns", columns}, {"values", rows}};
}

// ---------------------------------------------------------------------------
// Plot data

std::string emit_plot_data(const MetricTable& table, const RunManifest& manifest) {
  std::string out = "task,corpus_id,role,metric,score\n";
  for (const auto& c : table.cells()) {
    if (!c.report) continue;
    const auto it = std::find_if(manifest.entries.begin(), manifest.entries.end(),
                                 [&](const ManifestEntry& e) { return e.corpus_id == c.corpus_id; });
    if (it == manifest.entries.end()) {
      throw Error("plot-data: corpus '" + c.corpus_id + "' is not in the manifest");
    }
    out += csv_field(it->task) + "," + csv_field(c.corpus_id) + "," + std::string(role_name(it->role)) +
           "," + std::string(metric_name(c.metric)) + "," + format_double(c.report->score) + "\n";
  }
  return out;
}

}  // namespace divscope::analysis
