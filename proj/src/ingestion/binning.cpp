#include "stylescope/ingestion/binning.hpp"

#include <chrono>
#include <cstdio>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

namespace chr = std::chrono;

namespace {

chr::year_month_day civil_date(std::int64_t t) {
  const auto days = chr::floor<chr::days>(chr::sys_seconds{chr::seconds{t}});
  return chr::year_month_day{days};
}

int digits(std::string_view s, std::size_t pos, std::size_t n, std::string_view text) {
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (i >= s.size() || s[i] < '0' || s[i] > '9') {
      throw ValidationError("invalid ISO-8601 timestamp '" + std::string(text) + "'");
    }
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view text) {
  const auto s = trim(text);
  auto bad = [&]() { return ValidationError("invalid ISO-8601 timestamp '" + std::string(text) + "'"); };
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') throw bad();
  const chr::year_month_day ymd{chr::year{digits(s, 0, 4, text)},
                                chr::month{static_cast<unsigned>(digits(s, 5, 2, text))},
                                chr::day{static_cast<unsigned>(digits(s, 8, 2, text))}};
  if (!ymd.ok()) throw bad();
  std::int64_t seconds = chr::sys_days{ymd}.time_since_epoch() / chr::seconds{1};
  if (s.size() == 10) return seconds;
  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') throw bad();
  const int hh = digits(s, 11, 2, text), mm = digits(s, 14, 2, text), ss = digits(s, 17, 2, text);
  if (hh > 23 || mm > 59 || ss > 60) throw bad();
  seconds += hh * 3600 + mm * 60 + ss;
  const auto zone = s.substr(19);
  if (zone.empty() || zone == "Z") return seconds;
  if (zone.size() != 6 || (zone[0] != '+' && zone[0] != '-') || zone[3] != ':') throw bad();
  const int offset = digits(zone, 1, 2, text) * 3600 + digits(zone, 4, 2, text) * 60;
  return zone[0] == '+' ? seconds - offset : seconds + offset;
}

std::string format_iso8601(std::int64_t t) {
  const auto tp = chr::sys_seconds{chr::seconds{t}};
  const auto days = chr::floor<chr::days>(tp);
  const chr::year_month_day ymd{days};
  const chr::hh_mm_ss hms{tp - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::int64_t week_index(std::int64_t timestamp, std::int64_t epoch) {
  const std::int64_t delta = timestamp - epoch;
  // floor division for completeness; callers reject negative deltas
  return delta >= 0 ? delta / seconds_per_week : -((-delta + seconds_per_week - 1) / seconds_per_week);
}

std::int64_t month_index(std::int64_t timestamp, std::int64_t epoch) {
  const auto a = civil_date(epoch);
  const auto b = civil_date(timestamp);
  return (static_cast<int>(b.year()) - static_cast<int>(a.year())) * 12 +
         (static_cast<int>(static_cast<unsigned>(b.month())) - static_cast<int>(static_cast<unsigned>(a.month())));
}

BinKey assign_bins(const PersonRecord& record, const CityTable& cities, std::int64_t epoch) {
  if (record.timestamp < epoch) {
    throw ValidationError("record '" + record.record_id + "': timestamp " + format_iso8601(record.timestamp) +
                          " is before the epoch " + format_iso8601(epoch));
  }
  BinKey key;
  if (const auto i = nearest_city(cities, record.latitude, record.longitude)) key.city = cities.entries()[*i].name;
  key.week_index = week_index(record.timestamp, epoch);
  key.month_index = month_index(record.timestamp, epoch);
  return key;
}

}  // namespace stylescope
