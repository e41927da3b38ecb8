#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "stylescope/pipeline/config.hpp"

namespace stylescope {

enum class StageStatus { ran, cached, skipped };
const char* to_string(StageStatus status);

struct StageReport {
  std::string name;
  StageStatus status = StageStatus::ran;
  std::string key;  // content hash of the stage inputs; empty when skipped
};

struct PipelineResult {
  std::vector<StageReport> stages;
  std::filesystem::path report;  // <output>/report.json
};

/// ingest -> consensus -> calibrate -> embed-cluster -> analytics -> report.
///
/// Each stage writes under `<output>/<stage>/` and records its input hash in
/// `<output>/.stages/<stage>.key` once it has finished; a later run with the
/// same hash reuses the outputs. A failing stage throws with the stage name
/// prefixed and leaves earlier outputs in place. Report files never contain
/// paths, timings or cache status, so identical inputs give identical bytes.
/// Progress lines go to `log` when given.
PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log = nullptr);

}  // namespace stylescope
