#include "stylescope/pipeline/tables.hpp"

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

std::string format_bins(std::span<const PersonRecord> records, std::span<const BinKey> bins) {
  if (records.size() != bins.size()) throw ValidationError("bins table: records and bins differ in length");
  std::string out = "record_id\tcity\tweek_index\tmonth_index\tcountry\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out += records[i].record_id + '\t' + bins[i].city.value_or("") + '\t' + std::to_string(bins[i].week_index) + '\t' +
           std::to_string(bins[i].month_index) + '\t' + records[i].country.value_or("") + '\n';
  }
  return out;
}

std::vector<BinRow> parse_bins(std::string_view text, std::string_view source) {
  std::vector<BinRow> out;
  std::size_t line_no = 0;
  for (const auto& line : split(text, '\n')) {
    ++line_no;
    if (line.empty() || line.rfind("record_id\t", 0) == 0) continue;
    const auto f = split(line, '\t');
    if (f.size() != 5) {
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": expected 5 tab-separated fields");
    }
    BinRow row;
    row.record_id = f[0];
    if (!f[1].empty()) row.bin.city = f[1];
    row.bin.week_index = parse_int(f[2], "week_index");
    row.bin.month_index = parse_int(f[3], "month_index");
    row.country = f[4];
    out.push_back(std::move(row));
  }
  return out;
}

std::string format_reliability_rows(std::string_view attribute, std::string_view class_label, std::string_view curve,
                                    const ReliabilityCurve& reliability) {
  std::string out;
  const std::string prefix = std::string(attribute) + '\t' + std::string(class_label) + '\t' + std::string(curve) + '\t';
  for (const auto& b : reliability.bins) {
    out += prefix + format_fixed(b.lower, 3) + '\t' + format_fixed(b.upper, 3) + '\t' + format_fixed(b.mean_predicted, 6) +
           '\t' + format_fixed(b.fraction_positive, 6) + '\t' + std::to_string(b.count) + '\n';
  }
  return out;
}

}  // namespace stylescope
