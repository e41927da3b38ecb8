#include "stylescope/core/record.hpp"

#include <cmath>

#include "stylescope/core/error.hpp"

namespace stylescope {

const std::vector<double>* PersonRecord::scores_for(std::string_view attribute) const {
  const auto it = scores.find(attribute);
  return it == scores.end() ? nullptr : &it->second;
}

namespace {

[[noreturn]] void fail(const PersonRecord& r, const std::string& what) {
  throw ValidationError("record '" + r.record_id + "': " + what);
}

}  // namespace

void validate_record(const PersonRecord& r, const AttributeSchema& schema, std::size_t expected_dim) {
  if (r.record_id.empty()) throw ValidationError("record with empty id");
  if (!std::isfinite(r.latitude) || r.latitude < -90.0 || r.latitude > 90.0) fail(r, "latitude range");
  if (!std::isfinite(r.longitude) || r.longitude < -180.0 || r.longitude > 180.0) fail(r, "longitude range");
  if (r.country && r.country->size() != 2) fail(r, "country code must be ISO-3166 alpha-2");
  if (expected_dim != 0) {
    if (r.embedding.size() != expected_dim) {
      fail(r, "dimension mismatch (expected " + std::to_string(expected_dim) + ", got " +
                  std::to_string(r.embedding.size()) + ")");
    }
    for (float v : r.embedding) {
      if (!std::isfinite(v)) fail(r, "embedding contains a non-finite value");
    }
  }
  for (const auto& [name, values] : r.scores) {
    const auto* attr = schema.find(name);
    if (!attr) fail(r, "unknown attribute '" + name + "'");
    if (values.size() != attr->class_count()) {
      fail(r, "score length for '" + name + "' is " + std::to_string(values.size()) + ", expected " +
                  std::to_string(attr->class_count()));
    }
    double sum = 0.0;
    for (double v : values) {
      if (!std::isfinite(v) || v < 0.0) fail(r, "negative or non-finite score for '" + name + "'");
      sum += v;
    }
    if (std::abs(sum - 1.0) > score_sum_tolerance) fail(r, "score normalization for '" + name + "'");
  }
}

}  // namespace stylescope
