#pragma once

#include <span>
#include <string>
#include <vector>

#include "stylescope/calibration/reliability.hpp"
#include "stylescope/core/record.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

/// Columns: record_id, city (empty when unassigned), week_index, month_index, country.
std::string format_bins(std::span<const PersonRecord> records, std::span<const BinKey> bins);

struct BinRow {
  std::string record_id;
  BinKey bin;
  std::string country;
};

std::vector<BinRow> parse_bins(std::string_view text, std::string_view source = "<bins>");

/// One reliability curve as rows of: attribute, class, curve, lower, upper,
/// mean_predicted, fraction_positive, count.
std::string format_reliability_rows(std::string_view attribute, std::string_view class_label, std::string_view curve,
                                    const ReliabilityCurve& reliability);
inline constexpr const char* reliability_header =
    "attribute\tclass\tcurve\tlower\tupper\tmean_predicted\tfraction_positive\tcount\n";

}  // namespace stylescope
