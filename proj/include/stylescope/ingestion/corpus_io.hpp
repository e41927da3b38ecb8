#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylescope/core/record.hpp"
#include "stylescope/core/schema.hpp"

namespace stylescope {

// Corpus = newline-delimited JSON metadata (one record per line) plus an
// embedding blob: 8-byte header (u32 record count, u32 dimension), then
// count*dimension little-endian float32 values, row-major, in metadata order.
//
//   {"id":"p1","lat":40.7128,"lon":-74.006,"ts":1400000000,"country":"US",
//    "scores":{"wearing_hat":[0.9,0.1]}}

inline constexpr std::size_t embedding_header_bytes = 8;

struct EmbeddingHeader {
  std::uint32_t count = 0;
  std::uint32_t dim = 0;
};

/// Canonical one-line JSON form (no trailing newline). Score attributes are
/// written in name order, so rewriting a parsed canonical line is byte-identical.
std::string record_to_json_line(const PersonRecord& record);
/// Parses metadata fields only; the embedding is left empty. Throws ValidationError.
PersonRecord record_from_json_line(std::string_view line);

struct CorpusReadOptions {
  /// Skip malformed or invalid metadata lines instead of failing.
  bool lenient = false;
  /// Required blob dimension, when the caller knows it.
  std::optional<std::size_t> expected_dim;
};

struct SkippedLine {
  std::size_t line = 0;
  std::string reason;
};

/// Streaming reader: holds one record at a time regardless of corpus size.
class CorpusReader {
 public:
  /// Without an embedding blob, records come back with empty embeddings
  /// (metadata-only pass).
  CorpusReader(const std::filesystem::path& metadata, std::optional<std::filesystem::path> embeddings,
               AttributeSchema schema, CorpusReadOptions options = {});

  /// Next valid record in file order, or nullopt at end of corpus.
  std::optional<PersonRecord> next();

  bool has_embeddings() const noexcept { return blob_.is_open(); }
  std::size_t dim() const noexcept { return header_.dim; }
  const std::vector<SkippedLine>& skipped() const noexcept { return skipped_; }
  std::size_t lines_read() const noexcept { return line_no_; }

 private:
  void read_row(std::vector<float>& out);

  std::filesystem::path metadata_path_;
  std::ifstream metadata_;
  std::ifstream blob_;
  EmbeddingHeader header_;
  AttributeSchema schema_;
  CorpusReadOptions options_;
  std::size_t line_no_ = 0;
  std::size_t rows_consumed_ = 0;
  std::vector<SkippedLine> skipped_;
  std::vector<char> row_buffer_;
};

std::vector<PersonRecord> read_corpus(const std::filesystem::path& metadata,
                                      std::optional<std::filesystem::path> embeddings,
                                      const AttributeSchema& schema, CorpusReadOptions options = {});

/// Writes the two corpus files; the blob header count is patched by finish().
class CorpusWriter {
 public:
  CorpusWriter(const std::filesystem::path& metadata, const std::filesystem::path& embeddings, std::size_t dim);
  CorpusWriter(const CorpusWriter&) = delete;
  CorpusWriter& operator=(const CorpusWriter&) = delete;
  ~CorpusWriter();

  void write(const PersonRecord& record);
  void finish();
  std::size_t count() const noexcept { return count_; }

 private:
  std::filesystem::path metadata_path_;
  std::filesystem::path blob_path_;
  std::ofstream metadata_;
  std::ofstream blob_;
  std::size_t dim_;
  std::size_t count_ = 0;
  bool finished_ = false;
};

EmbeddingHeader read_embedding_header(const std::filesystem::path& blob);

}  // namespace stylescope
