#include "divscope/corpus_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "divscope/error.hpp"
#include "divscope/text.hpp"

namespace divscope {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kLexical: return "lexical";
    case Metric::kSyntactic: return "syntactic";
    case Metric::kSemantic: return "semantic";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  if (name == "lexical") return Metric::kLexical;
  if (name == "syntactic") return Metric::kSyntactic;
  if (name == "semantic") return Metric::kSemantic;
  throw Error("unknown metric '" + std::string(name) + "'");
}

bool is_upos(std::string_view tag) noexcept {
  return std::find(std::begin(kUposTags), std::end(kUposTags), tag) != std::end(kUposTags);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, bool binary = false) {
  std::ofstream out(path, binary ? (std::ios::binary | std::ios::trunc) : std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool parse_int(std::string_view s, long& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string corpus_id_from_path(const std::filesystem::path& path) {
  std::string name = path.filename().string();
  const auto dot = name.find('.');
  return dot == std::string::npos || dot == 0 ? name : name.substr(0, dot);
}

}  // namespace

// ---------------------------------------------------------------------------
// Corpus JSONL

Corpus parse_corpus(std::istream& in, std::string corpus_id, const std::string& source) {
  Corpus corpus;
  corpus.id = std::move(corpus_id);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(source, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object()) throw FormatError(source, lineno, "record is not a JSON object");
    const auto id = rec.find("id");
    const auto txt = rec.find("text");
    if (id == rec.end() || !id->is_string()) {
      throw FormatError(source, lineno, "missing string field \"id\"");
    }
    if (txt == rec.end() || !txt->is_string()) {
      throw FormatError(source, lineno, "missing string field \"text\"");
    }
    Document doc{id->get<std::string>(), txt->get<std::string>(), std::nullopt};
    if (text::trim(doc.text).empty()) {
      throw FormatError(source, lineno, "empty text for id '" + doc.id + "'");
    }
    if (!seen.insert(doc.id).second) {
      throw FormatError(source, lineno, "duplicate id '" + doc.id + "'");
    }
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in, corpus_id_from_path(path), path.string());
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_output(path);
  for (const auto& doc : corpus.docs) {
    out << nlohmann::json{{"id", doc.id}, {"text", doc.text}}.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// CoNLL-U

void validate_tree(const DependencyTree& tree, const std::string& source, std::size_t line) {
  const std::size_t n = tree.nodes.size();
  if (n == 0) throw FormatError(source, line, "empty sentence");
  if (tree.heads.size() != n || tree.deprels.size() != n) {
    throw FormatError(source, line, "heads/deprels length does not match token count");
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = tree.heads[i];
    if (h == DependencyTree::kRoot) {
      ++roots;
    } else if (h < 0 || static_cast<std::size_t>(h) >= n) {
      throw FormatError(source, line, "head index out of range for token " + std::to_string(i + 1));
    } else if (static_cast<std::size_t>(h) == i) {
      throw FormatError(source, line, "cyclic heads: token " + std::to_string(i + 1) + " heads itself");
    }
  }

  // 0 = unvisited, 1 = on current path, 2 = reaches the root.
  std::vector<std::uint8_t> state(n, 0);
  std::vector<std::size_t> path;
  for (std::size_t start = 0; start < n; ++start) {
    path.clear();
    std::size_t v = start;
    while (true) {
      if (state[v] == 2) break;
      if (state[v] == 1) {
        throw FormatError(source, line, "cyclic heads involving token " + std::to_string(v + 1));
      }
      state[v] = 1;
      path.push_back(v);
      if (tree.heads[v] == DependencyTree::kRoot) break;
      v = static_cast<std::size_t>(tree.heads[v]);
    }
    for (auto p : path) state[p] = 2;
  }
  if (roots == 0) throw FormatError(source, line, "no root");
  if (roots > 1) throw FormatError(source, line, "multiple roots (" + std::to_string(roots) + ")");
}

std::vector<DependencyTree> parse_conllu(std::istream& in, const std::string& source,
                                         Diagnostics* diag) {
  std::vector<DependencyTree> trees;
  DependencyTree cur;
  std::vector<long> raw_heads;
  std::optional<std::string> sent_id;
  std::size_t block_line = 0;
  std::size_t lineno = 0;

  auto finish = [&]() {
    if (!sent_id && cur.nodes.empty()) return;
    if (!sent_id) throw FormatError(source, block_line, "sentence without '# sent_id' comment");
    if (cur.nodes.empty()) throw FormatError(source, block_line, "sentence without tokens");
    const long n = static_cast<long>(cur.nodes.size());
    cur.heads.clear();
    for (std::size_t i = 0; i < raw_heads.size(); ++i) {
      const long h = raw_heads[i];
      if (h < 0 || h > n) {
        throw FormatError(source, block_line,
                          "head index " + std::to_string(h) + " out of range for token " +
                              std::to_string(i + 1));
      }
      cur.heads.push_back(static_cast<std::int32_t>(h - 1));
    }
    cur.sentence_id = *sent_id;
    validate_tree(cur, source, block_line);
    trees.push_back(std::move(cur));
    cur = DependencyTree{};
    raw_heads.clear();
    sent_id.reset();
    block_line = 0;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      finish();
      continue;
    }
    if (block_line == 0) block_line = lineno;
    if (line[0] == '#') {
      std::string_view body = text::trim(std::string_view(line).substr(1));
      if (body.starts_with("sent_id")) {
        body.remove_prefix(7);
        body = text::trim(body);
        if (!body.starts_with('=')) continue;
        body.remove_prefix(1);
        sent_id = std::string(text::trim(body));
      }
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != 10) {
      throw FormatError(source, lineno,
                        "expected 10 columns, found " + std::to_string(fields.size()));
    }
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      continue;
    }
    long index = 0;
    if (!parse_int(id, index)) throw FormatError(source, lineno, "bad token id '" + std::string(id) + "'");
    if (index != static_cast<long>(cur.nodes.size()) + 1) {
      throw FormatError(source, lineno, "token id " + std::string(id) + " out of sequence");
    }
    long head = 0;
    if (!parse_int(fields[6], head)) {
      throw FormatError(source, lineno, "bad head '" + std::string(fields[6]) + "'");
    }
    if (fields[1].empty()) throw FormatError(source, lineno, "empty FORM");
    Token tok{std::string(fields[1]), std::string(fields[3])};
    if (!is_upos(tok.upos)) {
      if (diag) {
        diag->warn(source + ":" + std::to_string(lineno) + ": unknown UPOS '" + tok.upos +
                   "' mapped to X");
      }
      tok.upos = "X";
    }
    cur.nodes.push_back(std::move(tok));
    cur.deprels.emplace_back(fields[7]);
    raw_heads.push_back(head);
  }
  finish();
  return trees;
}

std::vector<DependencyTree> load_conllu(const std::filesystem::path& path, Diagnostics* diag) {
  auto in = open_input(path);
  return parse_conllu(in, path.string(), diag);
}

void write_conllu(std::ostream& out, const std::vector<DependencyTree>& trees) {
  for (const auto& t : trees) {
    out << "# sent_id = " << t.sentence_id << '\n';
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& deprel = t.deprels[i];
      out << (i + 1) << '\t' << t.nodes[i].form << "\t_\t" << t.nodes[i].upos << "\t_\t_\t"
          << (t.heads[i] + 1) << '\t' << (deprel.empty() ? std::string("_") : deprel)
          << "\t_\t_\n";
    }
    out << '\n';
  }
}

void write_conllu(const std::filesystem::path& path, const std::vector<DependencyTree>& trees) {
  auto out = open_output(path);
  write_conllu(out, trees);
}

// ---------------------------------------------------------------------------
// DVEM

namespace {

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

constexpr std::size_t kDvemHeader = 16;

}  // namespace

std::filesystem::path ids_sidecar_path(const std::filesystem::path& matrix_path) {
  auto p = matrix_path;
  p.replace_extension(".ids.jsonl");
  return p;
}

RawMatrix read_dvem(const std::filesystem::path& path) {
  auto in = open_input(path, true);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto src = path.string();
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kDvemMagic, 4) != 0) {
    throw FormatError(src, 0, "bad magic (expected \"DVEM\")");
  }
  if (bytes.size() < kDvemHeader) {
    throw FormatError(src, 0, "truncated header: expected " + std::to_string(kDvemHeader) +
                                  " bytes, got " + std::to_string(bytes.size()));
  }
  const auto* u = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t version = read_u32_le(u + 4);
  if (version != kDvemVersion) {
    throw FormatError(src, 0, "unsupported format version " + std::to_string(version));
  }
  RawMatrix m;
  m.rows = read_u32_le(u + 8);
  m.dims = read_u32_le(u + 12);
  const std::uint64_t expected =
      kDvemHeader + static_cast<std::uint64_t>(m.rows) * m.dims * sizeof(float);
  if (bytes.size() != expected) {
    throw FormatError(src, 0,
                      std::string(bytes.size() < expected ? "truncated payload" : "trailing bytes") +
                          ": expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
  }
  m.data.resize(static_cast<std::size_t>(m.rows) * m.dims);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    const std::uint32_t bits = read_u32_le(u + kDvemHeader + 4 * i);
    m.data[i] = std::bit_cast<float>(bits);
  }
  return m;
}

void write_dvem(const std::filesystem::path& path, std::uint32_t rows, std::uint32_t dims,
                std::span<const float> data) {
  if (data.size() != static_cast<std::size_t>(rows) * dims) {
    throw Error("write_dvem: payload size does not match rows x dims");
  }
  std::string bytes(kDvemMagic, 4);
  put_u32_le(bytes, kDvemVersion);
  put_u32_le(bytes, rows);
  put_u32_le(bytes, dims);
  bytes.reserve(kDvemHeader + 4 * data.size());
  for (float f : data) put_u32_le(bytes, std::bit_cast<std::uint32_t>(f));
  auto out = open_output(path, true);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::string> read_ids_sidecar(const std::filesystem::path& path) {
  auto in = open_input(path);
  const auto src = path.string();
  std::vector<std::optional<std::string>> by_row;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(src, lineno, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("row") || !rec["row"].is_number_unsigned() ||
        !rec.contains("id") || !rec["id"].is_string()) {
      throw FormatError(src, lineno, "expected {\"row\": int, \"id\": string}");
    }
    const auto row = rec["row"].get<std::size_t>();
    if (row >= by_row.size()) by_row.resize(row + 1);
    if (by_row[row]) throw FormatError(src, lineno, "duplicate row " + std::to_string(row));
    by_row[row] = rec["id"].get<std::string>();
  }
  std::vector<std::string> ids;
  ids.reserve(by_row.size());
  for (std::size_t r = 0; r < by_row.size(); ++r) {
    if (!by_row[r]) throw FormatError(src, 0, "missing row " + std::to_string(r));
    ids.push_back(std::move(*by_row[r]));
  }
  return ids;
}

void write_ids_sidecar(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  auto out = open_output(path);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    out << nlohmann::json{{"id", ids[r]}, {"row", r}}.dump() << '\n';
  }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  RawMatrix raw = read_dvem(path);
  const auto src = path.string();
  EmbeddingMatrix emb;
  emb.ids = read_ids_sidecar(ids_sidecar_path(path));
  if (emb.ids.size() != raw.rows) {
    throw FormatError(src, 0, "ids count " + std::to_string(emb.ids.size()) +
                                  " does not match rows " + std::to_string(raw.rows));
  }
  if (raw.dims == 0) throw FormatError(src, 0, "dims must be positive");
  emb.dims = raw.dims;
  emb.data = std::move(raw.data);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < emb.rows(); ++r) {
    if (!seen.insert(emb.ids[r]).second) {
      throw FormatError(src, 0, "duplicate id '" + emb.ids[r] + "'");
    }
    bool nonzero = false;
    for (float f : emb.row(r)) {
      if (!std::isfinite(f)) {
        throw FormatError(src, 0, "non-finite value in row " + std::to_string(r));
      }
      nonzero = nonzero || f != 0.0f;
    }
    if (!nonzero) throw FormatError(src, 0, "zero row " + std::to_string(r));
  }
  return emb;
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& emb) {
  write_dvem(path, static_cast<std::uint32_t>(emb.rows()), emb.dims, emb.data);
  write_ids_sidecar(ids_sidecar_path(path), emb.ids);
}

}  // namespace divscope
