#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace divscope {

struct Token {
  std::string form;
  std::string upos;

  bool operator==(const Token&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<std::vector<Token>> tokens;

  bool operator==(const Document&) const = default;
};

/// Ordered document collection; order is load order.
struct Corpus {
  std::string id;
  std::vector<Document> docs;
};

/// One sentence's basic-dependency parse. heads[i] is the 0-based index of
/// token i's parent, or kRoot for the single root.
struct DependencyTree {
  static constexpr std::int32_t kRoot = -1;

  std::string sentence_id;
  std::vector<Token> nodes;
  std::vector<std::int32_t> heads;
  std::vector<std::string> deprels;

  std::size_t size() const noexcept { return nodes.size(); }
  bool operator==(const DependencyTree&) const = default;
};

/// Row-per-sentence float32 embeddings.
struct EmbeddingMatrix {
  std::vector<std::string> ids;
  std::uint32_t dims = 0;
  std::vector<float> data;

  std::size_t rows() const noexcept { return ids.size(); }
  std::span<const float> row(std::size_t i) const {
    return {data.data() + i * dims, dims};
  }
};

enum class Metric { kLexical, kSyntactic, kSemantic };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

/// One metric score for one corpus on the 0-100 scale, plus everything
/// needed to reproduce it.
struct DiversityReport {
  std::string corpus_id;
  Metric metric = Metric::kLexical;
  double score = 0.0;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
};

// Closed UD v2 UPOS inventory.
inline constexpr std::string_view kUposTags[] = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

bool is_upos(std::string_view tag) noexcept;

}  // namespace divscope
