#include "divscope/lexical.hpp"

#include <unordered_map>

#include "divscope/error.hpp"
#include "divscope/text.hpp"

namespace divscope::lexical {

void LexicalConfig::validate() const {
  if (sample_size == 0) throw Error("lexical: sample_size must be positive");
  if (ns.empty()) throw Error("lexical: ns must not be empty");
  for (int n : ns) {
    if (n < 1) throw Error("lexical: every n must be >= 1");
  }
}

nlohmann::json LexicalConfig::to_json() const {
  return {{"ns", ns}, {"sample_size", sample_size}, {"seed", seed}, {"lowercase", lowercase}};
}

std::vector<std::size_t> NGramMultiset::counts() const {
  std::vector<std::size_t> c(grams.size(), 0);
  for (auto id : occurrences) ++c[id];
  return c;
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      tokens.push_back(std::move(word));
      word.clear();
    }
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = text::next_code_point(text, pos);
    if (text::is_space(cp)) {
      flush();
    } else if (text::is_alnum(cp)) {
      if (lowercase) {
        text::append_utf8(word, text::to_lower(cp));
      } else {
        word.append(text.substr(start, pos - start));
      }
    } else {
      flush();
      tokens.emplace_back(text.substr(start, pos - start));
    }
  }
  flush();
  return tokens;
}

NGramMultiset extract_ngrams(const Corpus& corpus, int n, const LexicalConfig& config) {
  if (n < 1) throw Error("extract_ngrams: n must be >= 1");
  NGramMultiset out;
  out.n = n;
  std::unordered_map<std::string, std::uint32_t> index;
  std::string key;
  const auto width = static_cast<std::size_t>(n);
  for (const auto& doc : corpus.docs) {
    const auto tokens = tokenize(doc.text, config.lowercase);
    if (tokens.size() < width) continue;
    for (std::size_t i = 0; i + width <= tokens.size(); ++i) {
      key.clear();
      for (std::size_t k = 0; k < width; ++k) {
        if (k) key.push_back('\x1f');
        key += tokens[i + k];
      }
      auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(out.grams.size()));
      if (inserted) out.grams.emplace_back(tokens.begin() + i, tokens.begin() + i + width);
      out.occurrences.push_back(it->second);
    }
  }
  return out;
}

std::uint64_t sample_seed(const LexicalConfig& config, int n) noexcept {
  return derive_seed(config.seed, static_cast<std::uint64_t>(n));
}

double unique_n(const NGramMultiset& grams, const LexicalConfig& config) {
  const std::size_t total = grams.total();
  if (total == 0) throw MetricError("no n-grams of order " + std::to_string(grams.n));
  std::vector<bool> seen(grams.distinct(), false);
  std::size_t distinct = 0;
  auto visit = [&](std::uint32_t id) {
    if (!seen[id]) {
      seen[id] = true;
      ++distinct;
    }
  };
  std::size_t drawn = total;
  if (total > config.sample_size) {
    drawn = config.sample_size;
    for (auto i : sample_without_replacement(total, drawn, sample_seed(config, grams.n))) {
      visit(grams.occurrences[i]);
    }
  } else {
    for (auto id : grams.occurrences) visit(id);
  }
  return 100.0 * static_cast<double>(distinct) / static_cast<double>(drawn);
}

DiversityReport lexical_diversity(const Corpus& corpus, const LexicalConfig& config) {
  config.validate();
  if (corpus.docs.empty()) throw MetricError("lexical: corpus '" + corpus.id + "' is empty");
  DiversityReport report;
  report.corpus_id = corpus.id;
  report.metric = Metric::kLexical;
  report.config = config.to_json();

  nlohmann::json per_n = nlohmann::json::object();
  double sum = 0.0;
  for (int n : config.ns) {
    const auto grams = extract_ngrams(corpus, n, config);
    double score = 0.0;
    try {
      score = unique_n(grams, config);
    } catch (const MetricError& e) {
      throw MetricError("lexical: n=" + std::to_string(n) + ": " + e.what());
    }
    sum += score;
    per_n[std::to_string(n)] = {
        {"score", score},
        {"total", grams.total()},
        {"distinct", grams.distinct()},
        {"sampled", std::min(grams.total(), config.sample_size)},
        {"sample_seed", grams.total() > config.sample_size ? nlohmann::json(sample_seed(config, n))
                                                           : nlohmann::json(nullptr)}};
  }
  report.score = sum / static_cast<double>(config.ns.size());
  report.counts = {{"documents", corpus.docs.size()}, {"per_n", per_n}};
  return report;
}

}  // namespace divscope::lexical
