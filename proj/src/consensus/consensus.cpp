#include "stylescope/consensus/consensus.hpp"

#include <algorithm>

#include "json.hpp"
#include "stylescope/core/error.hpp"

namespace stylescope {

std::string Vote::answer() const { return faulty_detection ? std::string(faulty_answer) : label; }

GateDecision gate_worker(const WorkerStats& stats, const GatePolicy& policy) {
  if (stats.sentinels_failed > stats.sentinels_seen) {
    throw ValidationError("worker '" + stats.worker_id + "': more sentinel failures than sentinels seen");
  }
  const bool enough_failures = stats.sentinels_failed >= policy.min_failures;
  // Compare failed/seen > rate without division so 5/25 against 0.20 is exact.
  const bool rate_exceeded = static_cast<double>(stats.sentinels_failed) >
                             policy.max_failure_rate * static_cast<double>(stats.sentinels_seen);
  return enough_failures && rate_exceeded ? GateDecision::banned : GateDecision::allowed;
}

const char* to_string(ConsensusStatus status) {
  switch (status) {
    case ConsensusStatus::accepted: return "accepted";
    case ConsensusStatus::no_majority: return "no-majority";
    case ConsensusStatus::under_quorum: return "under-quorum";
  }
  return "?";
}

ConsensusOutcome consense(std::span<const Vote> votes, const ConsensusPolicy& policy) {
  if (policy.quorum == 0 || 2 * policy.threshold <= policy.quorum || policy.threshold > policy.quorum) {
    throw UsageError("consensus policy needs quorum/2 < threshold <= quorum");
  }
  ConsensusOutcome out;
  if (votes.size() < policy.quorum) {
    out.status = ConsensusStatus::under_quorum;
    return out;
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& v : votes.first(policy.quorum)) ++counts[v.answer()];
  const auto best = std::max_element(counts.begin(), counts.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  out.top_count = best->second;
  if (best->second < policy.threshold) {
    out.status = ConsensusStatus::no_majority;
    return out;
  }
  out.status = ConsensusStatus::accepted;
  out.label = best->first;
  out.faulty_detection = best->first == faulty_answer;
  return out;
}

std::vector<WorkerStats> worker_stats(std::span<const Vote> votes) {
  std::map<std::string, WorkerStats> by_worker;
  for (const auto& v : votes) {
    auto& s = by_worker[v.worker_id];
    s.worker_id = v.worker_id;
    if (!v.is_sentinel) continue;
    ++s.sentinels_seen;
    if (v.faulty_detection || !v.sentinel_truth || v.label != *v.sentinel_truth) ++s.sentinels_failed;
  }
  std::vector<WorkerStats> out;
  for (auto& [id, s] : by_worker) out.push_back(std::move(s));
  return out;
}

std::vector<std::string> AuditReport::banned_workers() const {
  std::vector<std::string> out;
  for (const auto& w : workers) {
    if (w.decision == GateDecision::banned) out.push_back(w.stats.worker_id);
  }
  return out;
}

std::string AuditReport::to_json() const {
  nlohmann::ordered_json j;
  j["total_votes"] = total_votes;
  j["sentinel_votes"] = sentinel_votes;
  auto& attrs = j["attributes"] = nlohmann::ordered_json::object();
  for (const auto& [name, a] : attributes) {
    attrs[name] = {{"accepted", a.accepted},
                   {"faulty", a.faulty},
                   {"no_majority", a.no_majority},
                   {"under_quorum", a.under_quorum}};
  }
  auto& ws = j["workers"] = nlohmann::ordered_json::array();
  for (const auto& w : workers) {
    ws.push_back({{"worker_id", w.stats.worker_id},
                  {"sentinels_seen", w.stats.sentinels_seen},
                  {"sentinels_failed", w.stats.sentinels_failed},
                  {"decision", w.decision == GateDecision::banned ? "banned" : "allowed"},
                  {"votes_removed", w.votes_removed}});
  }
  return j.dump(2) + "\n";
}

ConsensusDataset build_dataset(std::span<const Vote> votes, const ConsensusPolicy& consensus,
                               const GatePolicy& gate) {
  for (const auto& v : votes) {
    if (v.is_sentinel != v.sentinel_truth.has_value()) {
      throw ValidationError("vote by '" + v.worker_id + "' on '" + v.record_id +
                            "': sentinel truth must be present exactly for sentinel votes");
    }
  }

  ConsensusDataset out;
  out.audit.total_votes = votes.size();

  // Phase 1: gating over each worker's whole history.
  std::map<std::string, std::size_t, std::less<>> banned;  // worker id -> index in audit.workers
  for (auto& stats : worker_stats(votes)) {
    WorkerAudit wa{std::move(stats), GateDecision::allowed, 0};
    wa.decision = gate_worker(wa.stats, gate);
    if (wa.decision == GateDecision::banned) banned.emplace(wa.stats.worker_id, out.audit.workers.size());
    out.audit.workers.push_back(std::move(wa));
  }

  // Phase 2: consensus per (record, attribute) over surviving non-sentinel votes.
  using GroupKey = std::pair<std::string, std::string>;
  std::map<GroupKey, std::vector<Vote>> groups;
  std::vector<GroupKey> order;
  for (const auto& v : votes) {
    if (v.is_sentinel) {
      ++out.audit.sentinel_votes;
      continue;
    }
    GroupKey key{v.record_id, v.attribute};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    if (const auto b = banned.find(v.worker_id); b != banned.end()) {
      ++out.audit.workers[b->second].votes_removed;
      continue;
    }
    it->second.push_back(v);
  }

  for (const auto& key : order) {
    const auto& group = groups.at(key);
    auto& audit = out.audit.attributes[key.second];
    const auto outcome = consense(group, consensus);
    switch (outcome.status) {
      case ConsensusStatus::accepted:
        if (outcome.faulty_detection) {
          ++audit.faulty;
        } else {
          ++audit.accepted;
          out.examples.push_back({key.first, key.second, *outcome.label});
        }
        break;
      case ConsensusStatus::no_majority: ++audit.no_majority; break;
      case ConsensusStatus::under_quorum: ++audit.under_quorum; break;
    }
  }
  return out;
}

}  // namespace stylescope
