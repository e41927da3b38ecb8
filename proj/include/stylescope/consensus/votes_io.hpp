#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylescope/consensus/consensus.hpp"
#include "stylescope/core/schema.hpp"

namespace stylescope {

// Votes file: one tab-separated vote per line, in submission order:
//   worker_id  record_id  attribute  label  is_sentinel(0|1)  sentinel_truth
// `label` is "!faulty" for a faulty-detection flag; sentinel_truth is empty for
// ordinary votes. Lines starting with '#' are comments.

std::vector<Vote> parse_votes(std::string_view text, std::string_view source = "<votes>");
std::vector<Vote> read_votes(const std::filesystem::path& path);
std::string format_votes(std::span<const Vote> votes);

/// Throws ValidationError when a vote names an unknown attribute or class.
void validate_votes(std::span<const Vote> votes, const AttributeSchema& schema);

// Labeled examples file: record_id  attribute  class_label (tab-separated).
std::vector<LabeledExample> parse_labels(std::string_view text, std::string_view source = "<labels>");
std::vector<LabeledExample> read_labels(const std::filesystem::path& path);
std::string format_labels(std::span<const LabeledExample> examples);

}  // namespace stylescope
