#include "stylescope/ingestion/corpus_io.hpp"

#include <bit>
#include <cstring>
#include <limits>

#include "json.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

using ordered_json = nlohmann::ordered_json;

namespace {

void put_u32(char* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
}

std::uint32_t get_u32(const char* in) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[i])) << (8 * i);
  return v;
}

double number_field(const ordered_json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
  if (!it->is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

std::string record_to_json_line(const PersonRecord& r) {
  ordered_json j;
  j["id"] = r.record_id;
  j["lat"] = r.latitude;
  j["lon"] = r.longitude;
  j["ts"] = r.timestamp;
  if (r.country) j["country"] = *r.country;
  ordered_json scores = ordered_json::object();
  for (const auto& [name, values] : r.scores) scores[name] = values;
  j["scores"] = std::move(scores);
  return j.dump();
}

PersonRecord record_from_json_line(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("record line must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "id" && key != "lat" && key != "lon" && key != "ts" && key != "country" && key != "scores") {
      throw ValidationError("unknown field '" + key + "'");
    }
  }
  PersonRecord r;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw ValidationError("field 'id' must be a string");
  r.record_id = id->get<std::string>();
  r.latitude = number_field(j, "lat");
  r.longitude = number_field(j, "lon");
  const auto ts = j.find("ts");
  if (ts == j.end() || !ts->is_number_integer()) throw ValidationError("field 'ts' must be an integer");
  r.timestamp = ts->get<std::int64_t>();
  if (const auto c = j.find("country"); c != j.end() && !c->is_null()) {
    if (!c->is_string()) throw ValidationError("field 'country' must be a string");
    r.country = c->get<std::string>();
  }
  if (const auto s = j.find("scores"); s != j.end()) {
    if (!s->is_object()) throw ValidationError("field 'scores' must be an object");
    for (const auto& [name, arr] : s->items()) {
      if (!arr.is_array()) throw ValidationError("scores for '" + name + "' must be an array");
      std::vector<double> values;
      values.reserve(arr.size());
      for (const auto& v : arr) {
        if (!v.is_number()) throw ValidationError("scores for '" + name + "' must be numbers");
        values.push_back(v.get<double>());
      }
      r.scores.emplace(name, std::move(values));
    }
  }
  return r;
}

EmbeddingHeader read_embedding_header(const std::filesystem::path& blob) {
  std::ifstream in(blob, std::ios::binary);
  if (!in) throw_io_error("cannot open embedding blob", blob.string());
  char buf[embedding_header_bytes];
  if (!in.read(buf, sizeof buf)) throw ValidationError("embedding blob shorter than its header: " + blob.string());
  return {get_u32(buf), get_u32(buf + 4)};
}

CorpusReader::CorpusReader(const std::filesystem::path& metadata, std::optional<std::filesystem::path> embeddings,
                           AttributeSchema schema, CorpusReadOptions options)
    : metadata_path_(metadata),
      metadata_(metadata, std::ios::binary),
      schema_(std::move(schema)),
      options_(options) {
  if (!metadata_) throw_io_error("cannot open corpus metadata", metadata.string());
  if (!embeddings) return;

  header_ = read_embedding_header(*embeddings);
  std::error_code ec;
  const auto size = std::filesystem::file_size(*embeddings, ec);
  if (ec) throw_io_error("cannot stat embedding blob", embeddings->string());
  const std::uint64_t expected =
      embedding_header_bytes + std::uint64_t{header_.count} * header_.dim * sizeof(float);
  if (size != expected) {
    throw ValidationError("embedding blob length mismatch: " + embeddings->string() + " has " +
                          std::to_string(size) + " bytes, header implies " + std::to_string(expected));
  }
  if (options_.expected_dim && *options_.expected_dim != header_.dim) {
    throw ValidationError("embedding dimension mismatch: blob header says " + std::to_string(header_.dim) +
                          ", expected " + std::to_string(*options_.expected_dim));
  }
  blob_.open(*embeddings, std::ios::binary);
  blob_.seekg(embedding_header_bytes);
  row_buffer_.resize(std::size_t{header_.dim} * sizeof(float));
}

void CorpusReader::read_row(std::vector<float>& out) {
  if (rows_consumed_ >= header_.count) {
    throw ValidationError(metadata_path_.string() + ": more metadata lines than the blob header count (" +
                          std::to_string(header_.count) + ")");
  }
  if (!blob_.read(row_buffer_.data(), static_cast<std::streamsize>(row_buffer_.size()))) {
    throw ValidationError("embedding blob truncated at row " + std::to_string(rows_consumed_));
  }
  ++rows_consumed_;
  out.resize(header_.dim);
  for (std::size_t i = 0; i < header_.dim; ++i) {
    out[i] = std::bit_cast<float>(get_u32(row_buffer_.data() + 4 * i));
  }
}

std::optional<PersonRecord> CorpusReader::next() {
  std::string line;
  while (std::getline(metadata_, line)) {
    ++line_no_;
    if (trim(line).empty()) continue;
    std::vector<float> embedding;
    if (has_embeddings()) read_row(embedding);
    try {
      PersonRecord r = record_from_json_line(line);
      r.embedding = std::move(embedding);
      validate_record(r, schema_, has_embeddings() ? header_.dim : 0);
      return r;
    } catch (const ValidationError& e) {
      const std::string where = metadata_path_.string() + ":" + std::to_string(line_no_);
      if (!options_.lenient) throw ValidationError(where + ": " + e.what());
      skipped_.push_back({line_no_, e.what()});
    }
  }
  if (has_embeddings() && rows_consumed_ != header_.count) {
    throw ValidationError(metadata_path_.string() + ": " + std::to_string(rows_consumed_) +
                          " metadata records but the blob header declares " + std::to_string(header_.count));
  }
  return std::nullopt;
}

std::vector<PersonRecord> read_corpus(const std::filesystem::path& metadata,
                                      std::optional<std::filesystem::path> embeddings,
                                      const AttributeSchema& schema, CorpusReadOptions options) {
  CorpusReader reader(metadata, std::move(embeddings), schema, options);
  std::vector<PersonRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

CorpusWriter::CorpusWriter(const std::filesystem::path& metadata, const std::filesystem::path& embeddings,
                           std::size_t dim)
    : metadata_path_(metadata),
      blob_path_(embeddings),
      metadata_(metadata, std::ios::binary | std::ios::trunc),
      blob_(embeddings, std::ios::binary | std::ios::trunc),
      dim_(dim) {
  if (!metadata_) throw_io_error("cannot write corpus metadata", metadata.string());
  if (!blob_) throw_io_error("cannot write embedding blob", embeddings.string());
  if (dim > std::numeric_limits<std::uint32_t>::max()) throw ValidationError("embedding dimension too large");
  char header[embedding_header_bytes];
  put_u32(header, 0);
  put_u32(header + 4, static_cast<std::uint32_t>(dim));
  blob_.write(header, sizeof header);
}

CorpusWriter::~CorpusWriter() {
  try {
    finish();
  } catch (...) {
  }
}

void CorpusWriter::write(const PersonRecord& r) {
  if (finished_) throw ValidationError("corpus writer already finished");
  if (r.embedding.size() != dim_) {
    throw ValidationError("record '" + r.record_id + "': dimension mismatch (expected " + std::to_string(dim_) +
                          ", got " + std::to_string(r.embedding.size()) + ")");
  }
  const std::string line = record_to_json_line(r);
  metadata_.write(line.data(), static_cast<std::streamsize>(line.size()));
  metadata_.put('\n');
  std::vector<char> row(dim_ * sizeof(float));
  for (std::size_t i = 0; i < dim_; ++i) put_u32(row.data() + 4 * i, std::bit_cast<std::uint32_t>(r.embedding[i]));
  blob_.write(row.data(), static_cast<std::streamsize>(row.size()));
  ++count_;
}

void CorpusWriter::finish() {
  if (finished_) return;
  finished_ = true;
  char count[4];
  put_u32(count, static_cast<std::uint32_t>(count_));
  blob_.seekp(0);
  blob_.write(count, sizeof count);
  blob_.close();
  metadata_.close();
  if (!blob_ || !metadata_) throw ValidationError("failed writing corpus files " + metadata_path_.string());
}

}  // namespace stylescope
