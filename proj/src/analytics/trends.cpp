#include "stylescope/analytics/trends.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stylescope/core/error.hpp"
#include "stylescope/core/parallel.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

MeanInterval mean_interval(std::span<const double> values) {
  if (values.empty()) throw ValidationError("confidence interval of an empty bin");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  const double half = z_95 * sd / std::sqrt(n);
  return {mean, std::clamp(mean - half, 0.0, 1.0), std::clamp(mean + half, 0.0, 1.0)};
}

std::vector<TrendPoint> weekly_points(std::span<const Observation> observations, std::size_t min_n) {
  std::map<std::int64_t, std::vector<double>> weeks;
  for (const auto& o : observations) weeks[o.week_index].push_back(o.value);
  std::vector<TrendPoint> points;
  for (const auto& [week, values] : weeks) {
    if (values.size() < min_n || values.empty()) continue;
    const auto ci = mean_interval(values);
    points.push_back({week, ci.mean, ci.low, ci.high, values.size()});
  }
  return points;
}

std::string RegionFilter::describe() const {
  if (city) return "city:" + *city;
  if (country) return "country:" + *country;
  return "all";
}

TrendSeries weekly_series(std::span<const PersonRecord> records, std::span<const BinKey> bins,
                          std::string_view attribute, std::string_view class_label, const CalibrationModel& model,
                          const RegionFilter& filter, std::size_t min_n, std::size_t threads) {
  if (bins.size() != records.size()) throw ValidationError("weekly series: records and bins differ in length");
  if (!model.covers(attribute, class_label)) {
    throw ValidationError("calibration model does not cover " + std::string(attribute) + "/" +
                          std::string(class_label));
  }
  const auto& maps = model.attribute(attribute);
  const auto class_index = static_cast<std::size_t>(
      std::find(maps.classes.begin(), maps.classes.end(), class_label) - maps.classes.begin());

  std::vector<std::optional<double>> probability(records.size());
  parallel_for(records.size(), threads, [&](std::size_t i) {
    const auto& r = records[i];
    if (filter.city && bins[i].city != filter.city) return;
    if (filter.country && r.country != filter.country) return;
    probability[i] = calibrated_probability(r, attribute, class_index, model);
  });

  std::vector<Observation> observations;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (probability[i]) observations.push_back({bins[i].week_index, *probability[i]});
  }
  if (observations.empty()) {
    throw ValidationError("no records with " + std::string(attribute) + " scores match region " + filter.describe());
  }
  return {std::string(attribute), std::string(class_label), filter.describe(), weekly_points(observations, min_n)};
}

std::string format_series(const TrendSeries& series) {
  std::string out = "# attribute=" + series.attribute + " class=" + series.class_label + " region=" + series.region +
                    "\nweek_index\tmean\tci_low\tci_high\tn\n";
  for (const auto& p : series.points) {
    out += std::to_string(p.week_index) + '\t' + format_fixed(p.mean, 6) + '\t' + format_fixed(p.ci_low, 6) + '\t' +
           format_fixed(p.ci_high, 6) + '\t' + std::to_string(p.n) + '\n';
  }
  return out;
}

CountryAggregate country_aggregate(std::span<const PersonRecord> records, std::string_view attribute,
                                   std::string_view class_label, const CalibrationModel& model,
                                   std::size_t min_photos) {
  if (!model.covers(attribute, class_label)) {
    throw ValidationError("calibration model does not cover " + std::string(attribute) + "/" +
                          std::string(class_label));
  }
  const auto& maps = model.attribute(attribute);
  const auto class_index = static_cast<std::size_t>(
      std::find(maps.classes.begin(), maps.classes.end(), class_label) - maps.classes.begin());

  struct Sum {
    double total = 0.0;
    std::size_t n = 0;
  };
  std::map<std::string, Sum> by_country;
  bool any_country = false;
  for (const auto& r : records) {
    if (!r.country) continue;
    any_country = true;
    const auto p = calibrated_probability(r, attribute, class_index, model);
    if (!p) continue;
    auto& s = by_country[*r.country];
    s.total += *p;
    ++s.n;
  }
  if (!any_country) throw ValidationError("no records carry a country code");

  CountryAggregate out;
  for (const auto& [country, s] : by_country) {
    CountryMean m{country, s.total / static_cast<double>(s.n), s.n};
    (s.n >= min_photos ? out.included : out.excluded).push_back(std::move(m));
  }
  return out;
}

std::string format_country_aggregate(const CountryAggregate& aggregate) {
  std::string out = "country\tmean\tn\tincluded\n";
  for (const auto& m : aggregate.included) {
    out += m.country + '\t' + format_fixed(m.mean, 6) + '\t' + std::to_string(m.n) + "\t1\n";
  }
  for (const auto& m : aggregate.excluded) {
    out += m.country + '\t' + format_fixed(m.mean, 6) + '\t' + std::to_string(m.n) + "\t0\n";
  }
  return out;
}

}  // namespace stylescope
