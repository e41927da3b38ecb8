#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylescope/core/schema.hpp"

namespace stylescope {

/// One worker answer for one (record, attribute). A "faulty detection" flag
/// takes the place of a class label and counts as its own answer.
struct Vote {
  std::string worker_id;
  std::string record_id;
  std::string attribute;
  std::string label;  // ignored when faulty_detection is set
  bool faulty_detection = false;
  bool is_sentinel = false;
  std::optional<std::string> sentinel_truth;

  /// The answer as compared for agreement.
  std::string answer() const;

  friend bool operator==(const Vote&, const Vote&) = default;
};

inline constexpr const char* faulty_answer = "!faulty";

struct WorkerStats {
  std::string worker_id;
  std::size_t sentinels_seen = 0;
  std::size_t sentinels_failed = 0;

  double failure_rate() const noexcept {
    return sentinels_seen == 0 ? 0.0 : static_cast<double>(sentinels_failed) / static_cast<double>(sentinels_seen);
  }
};

struct GatePolicy {
  std::size_t min_failures = 5;
  double max_failure_rate = 0.20;  // banned only when strictly above
};

enum class GateDecision { allowed, banned };

GateDecision gate_worker(const WorkerStats& stats, const GatePolicy& policy = {});

struct ConsensusPolicy {
  std::size_t quorum = 5;
  std::size_t threshold = 3;  // must exceed quorum / 2 so at most one answer can win
};

enum class ConsensusStatus { accepted, no_majority, under_quorum };

const char* to_string(ConsensusStatus status);

struct ConsensusOutcome {
  ConsensusStatus status = ConsensusStatus::no_majority;
  std::optional<std::string> label;  // set when accepted
  bool faulty_detection = false;     // accepted answer was the faulty flag
  std::size_t top_count = 0;
};

/// Consensus over the votes for one (record, attribute), given in submission
/// order. Only the earliest `quorum` votes are considered.
ConsensusOutcome consense(std::span<const Vote> votes, const ConsensusPolicy& policy = {});

struct AttributeAudit {
  std::size_t accepted = 0;
  std::size_t faulty = 0;  // accepted as "faulty detection"; not emitted as examples
  std::size_t no_majority = 0;
  std::size_t under_quorum = 0;
};

struct WorkerAudit {
  WorkerStats stats;
  GateDecision decision = GateDecision::allowed;
  std::size_t votes_removed = 0;  // non-sentinel votes dropped from consensus
};

struct AuditReport {
  std::map<std::string, AttributeAudit> attributes;
  std::vector<WorkerAudit> workers;  // sorted by worker id
  std::size_t total_votes = 0;
  std::size_t sentinel_votes = 0;

  std::vector<std::string> banned_workers() const;
  std::string to_json() const;
};

struct ConsensusDataset {
  std::vector<LabeledExample> examples;  // in order of first vote per (record, attribute)
  AuditReport audit;
};

/// Sentinel tallies per worker; a sentinel fails unless the answer equals its truth.
std::vector<WorkerStats> worker_stats(std::span<const Vote> votes);

/// Gate workers on sentinels, drop every vote of banned workers, then run
/// consensus per (record, attribute) over the non-sentinel votes.
ConsensusDataset build_dataset(std::span<const Vote> votes, const ConsensusPolicy& consensus = {},
                               const GatePolicy& gate = {});

}  // namespace stylescope
