#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "divscope/types.hpp"

namespace divscope {

/// Non-fatal findings collected while loading (e.g. unknown UPOS tags).
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

// Corpus JSONL: one {"id": string, "text": string[, "meta": {...}]} per line.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in, std::string corpus_id, const std::string& source);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);

// CoNLL-U. Multiword-token ranges and empty nodes are skipped; every
// sentence needs a "# sent_id = ..." comment.
std::vector<DependencyTree> load_conllu(const std::filesystem::path& path,
                                        Diagnostics* diag = nullptr);
std::vector<DependencyTree> parse_conllu(std::istream& in, const std::string& source,
                                         Diagnostics* diag = nullptr);
void write_conllu(std::ostream& out, const std::vector<DependencyTree>& trees);
void write_conllu(const std::filesystem::path& path, const std::vector<DependencyTree>& trees);

/// Throws FormatError unless heads describe a single-rooted tree.
void validate_tree(const DependencyTree& tree, const std::string& source = "tree",
                   std::size_t line = 0);

// DVEM binary matrix: "DVEM", u32 version=1, u32 rows, u32 dims, then
// rows*dims little-endian float32, row-major. Ids live in the sidecar
// "<stem>.ids.jsonl" next to the matrix file.
inline constexpr char kDvemMagic[4] = {'D', 'V', 'E', 'M'};
inline constexpr std::uint32_t kDvemVersion = 1;

std::filesystem::path ids_sidecar_path(const std::filesystem::path& matrix_path);

struct RawMatrix {
  std::uint32_t rows = 0;
  std::uint32_t dims = 0;
  std::vector<float> data;
};

RawMatrix read_dvem(const std::filesystem::path& path);
void write_dvem(const std::filesystem::path& path, std::uint32_t rows, std::uint32_t dims,
                std::span<const float> data);

std::vector<std::string> read_ids_sidecar(const std::filesystem::path& path);
void write_ids_sidecar(const std::filesystem::path& path, const std::vector<std::string>& ids);

/// Reads a DVEM file plus sidecar and enforces the embedding invariants
/// (finite entries, no zero rows, unique ids, ids count == rows).
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& emb);

}  // namespace divscope
