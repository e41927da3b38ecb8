#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stylescope/analytics/ranking.hpp"
#include "stylescope/calibration/calibration.hpp"
#include "stylescope/clustering/pca.hpp"
#include "stylescope/consensus/consensus.hpp"
#include "stylescope/core/kv_config.hpp"

namespace stylescope {

/// An (attribute, class) pair to report trends for, written `attribute/class`.
struct TrendTarget {
  std::string attribute;
  std::string class_label;

  friend bool operator==(const TrendTarget&, const TrendTarget&) = default;
};

TrendTarget parse_trend_target(std::string_view text);

/// Every knob of a pipeline run. Files use the sectioned key-value format:
///
///   [paths]
///   corpus = data/corpus.ndjson
///   [clustering]
///   k = 8
///
/// Relative paths resolve against the config file's directory; flag
/// overrides (`section.key=value`) resolve against the working directory.
struct PipelineConfig {
  // [paths]
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> votes;
  std::optional<std::filesystem::path> schema;
  std::optional<std::filesystem::path> cities;
  std::optional<std::filesystem::path> countries;
  std::optional<std::filesystem::path> external_series;
  std::filesystem::path output = "stylescope-out";

  // [run]
  std::optional<std::size_t> threads;

  // [ingest]
  std::int64_t epoch = 1370044800;
  bool lenient = false;

  // [consensus]
  ConsensusPolicy consensus;
  GatePolicy gate;

  // [calibration]
  CalibrationMethod calibration_method = CalibrationMethod::isotonic;
  std::uint64_t split_seed = 0;
  bool fit_on_all_labels = false;  // default: validation slice only
  std::size_t reliability_bins = 10;

  // [clustering]
  double retain = 0.90;
  std::size_t k = 400;
  std::size_t cap = 4000;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 200;
  double tolerance = 1e-4;
  double variance_floor = 1e-6;
  PcaSolver solver = PcaSolver::exact;
  std::size_t exemplars = 10;

  // [analytics]
  std::size_t min_n = 50;
  double alpha = 1.0;
  std::size_t min_country_photos = 1000;
  CountNormalization normalization = CountNormalization::raw;
  std::vector<TrendTarget> trends;  // empty: the "Yes" class of every two-class attribute

  /// Applies one key. Throws UsageError for unknown keys or out-of-range values.
  void set(std::string_view section, std::string_view key, std::string_view value,
           const std::filesystem::path& base_dir = {});
  /// Applies every entry of a document, in order.
  void apply(const KvDocument& document, const std::filesystem::path& base_dir = {});
  /// `section.key=value`.
  void apply_override(std::string_view assignment);

  /// Canonical key-value form, every knob in a fixed order.
  KvDocument to_document(bool include_paths = true) const;
};

/// Defaults, then the file (if any), then overrides.
PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file,
                                    const std::vector<std::string>& overrides = {});

}  // namespace stylescope
