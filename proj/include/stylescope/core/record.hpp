#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stylescope/core/schema.hpp"

namespace stylescope {

inline constexpr std::size_t default_embedding_dim = 1024;
inline constexpr double score_sum_tolerance = 1e-6;

/// One detected person. Scores are full per-class probability vectors keyed by
/// attribute name; an attribute may be absent.
struct PersonRecord {
  std::string record_id;
  double latitude = 0.0;
  double longitude = 0.0;
  std::int64_t timestamp = 0;  // seconds since Unix epoch, UTC
  std::optional<std::string> country;
  std::vector<float> embedding;
  std::map<std::string, std::vector<double>, std::less<>> scores;

  const std::vector<double>* scores_for(std::string_view attribute) const;

  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

/// Checks a record against the schema and the corpus embedding dimension.
/// `expected_dim == 0` skips the embedding check (metadata-only passes).
/// Throws ValidationError whose message names the violated field
/// ("latitude range", "score normalization", "dimension mismatch", ...).
void validate_record(const PersonRecord& record, const AttributeSchema& schema, std::size_t expected_dim);

}  // namespace stylescope
