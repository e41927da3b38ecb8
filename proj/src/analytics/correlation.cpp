#include "stylescope/analytics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

WeeklyValues weekly_values(const TrendSeries& series) {
  WeeklyValues out;
  for (const auto& p : series.points) out.emplace(p.week_index, p.mean);
  return out;
}

OverlapCorrelation overlap_correlation(const WeeklyValues& a, const WeeklyValues& b, std::size_t min_overlap) {
  std::vector<double> x, y;
  for (const auto& [week, value] : a) {
    if (auto it = b.find(week); it != b.end()) {
      x.push_back(value);
      y.push_back(it->second);
    }
  }
  OverlapCorrelation out;
  out.overlap = x.size();
  if (x.size() >= std::max<std::size_t>(min_overlap, 2)) out.r = pearson(x, y);
  return out;
}

CorrelationMatrix city_correlation(std::span<const CitySeries> series, std::size_t min_overlap) {
  if (series.size() < 2) throw ValidationError("city correlation needs at least two cities");
  std::vector<std::size_t> order(series.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (series[a].latitude != series[b].latitude) return series[a].latitude > series[b].latitude;
    return series[a].city < series[b].city;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (series[order[i]].city == series[order[i - 1]].city) {
      throw ValidationError("city correlation: duplicate city '" + series[order[i]].city + "'");
    }
  }

  const std::size_t m = series.size();
  CorrelationMatrix out;
  out.r.assign(m, std::vector<std::optional<double>>(m));
  out.overlap.assign(m, std::vector<std::size_t>(m, 0));
  for (std::size_t i = 0; i < m; ++i) {
    out.cities.push_back(series[order[i]].city);
    out.latitudes.push_back(series[order[i]].latitude);
  }
  for (std::size_t i = 0; i < m; ++i) {
    out.r[i][i] = 1.0;
    out.overlap[i][i] = series[order[i]].values.size();
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto c = overlap_correlation(series[order[i]].values, series[order[j]].values, min_overlap);
      out.r[i][j] = out.r[j][i] = c.r;
      out.overlap[i][j] = out.overlap[j][i] = c.overlap;
    }
  }
  return out;
}

std::string format_correlation(const CorrelationMatrix& matrix) {
  std::string out = "city";
  for (const auto& c : matrix.cities) out += '\t' + c;
  out += '\n';
  for (std::size_t i = 0; i < matrix.cities.size(); ++i) {
    out += matrix.cities[i];
    for (const auto& cell : matrix.r[i]) out += '\t' + (cell ? format_fixed(*cell, 6) : std::string("NA"));
    out += '\n';
  }
  return out;
}

WeeklyValues parse_external_series(std::string_view text, std::int64_t epoch, std::string_view source) {
  WeeklyValues out;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_trimmed(line, '\t');
    if (fields.size() == 1) fields = split_trimmed(line, ',');
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    if (fields.size() != 2) throw ValidationError(where + ": expected `week<TAB>value`");
    std::int64_t week = 0;
    try {
      week = fields[0].find('-', 1) != std::string::npos ? week_index(parse_iso8601(fields[0]), epoch)
                                                         : parse_int(fields[0], "week");
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    const double value = parse_double(fields[1], "value");
    if (!out.emplace(week, value).second) throw ValidationError(where + ": duplicate week " + std::to_string(week));
  }
  return out;
}

}  // namespace stylescope
