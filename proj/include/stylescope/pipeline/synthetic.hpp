#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "stylescope/consensus/consensus.hpp"
#include "stylescope/core/cities.hpp"
#include "stylescope/core/kv_config.hpp"
#include "stylescope/core/record.hpp"
#include "stylescope/core/schema.hpp"

namespace stylescope {

/// A planted style cluster. Empty affinity vectors mean uniform.
struct PlantedCluster {
  double weight = 1.0;                 // relative; normalized over clusters
  std::vector<double> city_affinity;   // over SyntheticSpec::cities
  std::vector<double> month_affinity;  // over calendar months of the window
};

struct SyntheticSpec {
  std::size_t records = 1000;
  std::uint64_t seed = 0;
  std::size_t dim = 64;
  std::vector<City> cities;  // empty: a fixed mix of northern and southern cities
  std::int64_t start = 1370044800;
  std::size_t weeks = 104;
  std::vector<PlantedCluster> clusters;  // empty: one cluster per city, 60% in its home city
  double separation = 10.0;              // norm of each cluster mean
  double noise = 0.1;                    // per-dimension embedding noise sd

  /// Class distribution per attribute; missing attributes use the reference
  /// annotation counts.
  std::map<std::string, std::vector<double>> prevalence;
  /// Per country code, per attribute class distribution overriding `prevalence`.
  std::map<std::string, std::map<std::string, std::vector<double>>> country_prevalence;
  /// Two-class attributes only: P(class 1) += amplitude * cos(2 pi week / 52),
  /// with the sign flipped for southern-hemisphere cities.
  std::map<std::string, double> seasonal_amplitude;
  /// Row = true class, column = predicted class. Missing attributes get a
  /// matrix with the reference accuracy on the diagonal.
  std::map<std::string, std::vector<std::vector<double>>> confusion;

  std::size_t labeled = 0;  // the first `labeled` records get sidecar labels
  bool votes = false;       // also simulate crowd votes for the labeled records
};

/// Reads `[synth]`, `[cluster.<n>]`, `[prevalence]`, `[seasonal]`,
/// `[country.<CC>]` and `[confusion]` sections.
SyntheticSpec load_synthetic_spec(const KvDocument& document);

/// Throws ValidationError naming the first invalid probability vector or knob.
void validate_synthetic_spec(const SyntheticSpec& spec, const AttributeSchema& schema);

struct SyntheticCorpus {
  std::vector<City> cities;
  std::vector<PersonRecord> records;
  std::vector<std::size_t> cluster;               // planted cluster per record
  std::vector<std::vector<std::size_t>> truth;    // per record, class index per schema attribute
  std::vector<LabeledExample> labels;
  std::vector<Vote> votes;
};

/// Deterministic for a given spec: each record draws from its own stream, so
/// `threads` does not change the output.
SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, const AttributeSchema& schema, std::size_t threads = 1);

struct SyntheticFiles {
  std::filesystem::path corpus;      // corpus.ndjson
  std::filesystem::path embeddings;  // embeddings.bin
  std::filesystem::path labels;      // labels.tsv
  std::filesystem::path truth;       // truth.tsv
  std::filesystem::path summary;     // truth.json
  std::filesystem::path votes;       // votes.tsv (only written when simulated)
};

SyntheticFiles write_synthetic(const SyntheticCorpus& corpus, const SyntheticSpec& spec,
                               const AttributeSchema& schema, const std::filesystem::path& directory);

}  // namespace stylescope
