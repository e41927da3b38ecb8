#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "stylescope/analytics/correlation.hpp"
#include "stylescope/analytics/ranking.hpp"
#include "stylescope/analytics/trends.hpp"
#include "stylescope/calibration/calibration.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/random.hpp"
#include "stylescope/ingestion/binning.hpp"

using namespace stylescope;

namespace {

CalibrationModel identity_model(const std::string& attribute = "wearing_hat") {
  CalibrationModel m;
  const MonotoneStepFunction id({0.0, 1.0}, {0.0, 1.0});
  m.set_attribute(attribute, {{"No", "Yes"}, {id, id}});
  return m;
}

PersonRecord with_p(const std::string& id, double p, std::optional<std::string> country = std::nullopt) {
  PersonRecord r;
  r.record_id = id;
  r.country = std::move(country);
  r.scores["wearing_hat"] = {1.0 - p, p};
  return r;
}

BinKey key(std::optional<std::string> city, std::int64_t week, std::int64_t month = 0) {
  BinKey k;
  k.city = std::move(city);
  k.week_index = week;
  k.month_index = month;
  return k;
}

WeeklyValues sinusoid(double phase_weeks, std::size_t weeks, Rng* noise = nullptr) {
  WeeklyValues v;
  for (std::size_t w = 0; w < weeks; ++w) {
    const double t = static_cast<double>(w) + phase_weeks;
    v[static_cast<std::int64_t>(w)] =
        0.3 + 0.2 * std::cos(2.0 * std::numbers::pi * t / 52.0) + (noise ? 0.02 * noise->normal() : 0.0);
  }
  return v;
}

// Records and bins for a planted assignment: (cluster, city, month) triples.
struct Planted {
  std::vector<ClusterAssignment> assignments;
  std::vector<BinKey> bins;
  void add(std::size_t cluster, const std::string& city, std::int64_t month, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      assignments.push_back({"r" + std::to_string(assignments.size()), cluster, 0.0});
      bins.push_back(key(city, month * 4, month));
    }
  }
};

}  // namespace

TEST_CASE("entropy examples") {
  CHECK(entropy(std::vector<double>{1, 1, 1, 1}) == doctest::Approx(std::log(4.0)));
  CHECK(entropy(std::vector<double>{10, 0, 0, 0}) == 0.0);
  CHECK(entropy(std::vector<double>{3, 1}) == doctest::Approx(0.5623).epsilon(1e-4));
  CHECK(entropy(std::vector<double>{3, 1}) == doctest::Approx(oracle::direct_entropy(std::vector<double>{3, 1})));
  CHECK_THROWS_AS(entropy(std::vector<double>{0, 0}), ValidationError);
  CHECK_THROWS_AS(entropy(std::vector<double>{1, -1}), ValidationError);
  CHECK_THROWS_AS(entropy(std::vector<double>{}), ValidationError);
}

TEST_CASE("entropy properties") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(1 + rng.uniform_index(20));
    for (auto& v : c) v = std::floor(rng.uniform(0, 10));
    c[0] += 1;
    const double h = entropy(c);
    CHECK(h >= 0.0);
    CHECK(h <= std::log(static_cast<double>(c.size())) + 1e-12);
    CHECK(h == doctest::Approx(oracle::direct_entropy(c)).epsilon(1e-12));
    auto scaled = c;
    for (auto& v : scaled) v *= 7.5;
    CHECK(entropy(scaled) == doctest::Approx(h).epsilon(1e-12));
    auto permuted = c;
    std::reverse(permuted.begin(), permuted.end());
    CHECK(entropy(permuted) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("mean interval") {
  std::vector<double> half(100, 0.5);
  const auto a = mean_interval(half);
  CHECK(a.mean == 0.5);
  CHECK(a.low == 0.5);
  CHECK(a.high == 0.5);

  std::vector<double> v{0.2, 0.4, 0.6};
  const auto b = mean_interval(v);
  const double half_width = z_95 * 0.2 / std::sqrt(3.0);
  CHECK(b.mean == doctest::Approx(0.4));
  CHECK(b.low == doctest::Approx(0.4 - half_width));
  CHECK(b.high == doctest::Approx(0.4 + half_width));

  std::vector<double> wide{0.0, 1.0};
  const auto c = mean_interval(wide);
  CHECK(c.low == 0.0);
  CHECK(c.high == 1.0);

  std::vector<double> one{0.7};
  CHECK(mean_interval(one).low == 0.7);
  CHECK_THROWS(mean_interval(std::span<const double>{}));
}

TEST_CASE("weekly points drop thin weeks") {
  std::vector<Observation> obs;
  for (int i = 0; i < 60; ++i) obs.push_back({3, 0.25});
  for (int i = 0; i < 49; ++i) obs.push_back({1, 0.75});
  for (int i = 0; i < 50; ++i) obs.push_back({0, i % 2 ? 1.0 : 0.0});
  const auto pts = weekly_points(obs, 50);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].week_index == 0);
  CHECK(pts[0].n == 50);
  CHECK(pts[0].mean == doctest::Approx(0.5));
  CHECK(pts[1] == TrendPoint{3, 0.25, 0.25, 0.25, 60});
  CHECK(weekly_points(obs, 1).size() == 3);
}

TEST_CASE("interval width shrinks as one over root n") {
  Rng rng(2);
  std::vector<double> log_n, log_w;
  for (std::size_t n : {100u, 400u, 1600u, 6400u, 25600u}) {
    double width = 0;
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.bernoulli(0.3) ? 1.0 : 0.0;
      const auto ci = mean_interval(v);
      width += ci.high - ci.low;
    }
    log_n.push_back(std::log(static_cast<double>(n)));
    log_w.push_back(std::log(width / 20.0));
  }
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / 5.0;
  const double my = std::accumulate(log_w.begin(), log_w.end(), 0.0) / 5.0;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 5; ++i) {
    sxy += (log_n[i] - mx) * (log_w[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  CHECK(std::abs(sxy / sxx + 0.5) < 0.05);
}

TEST_CASE("weekly series tracks a planted seasonal signal") {
  Rng rng(3);
  std::vector<PersonRecord> records;
  std::vector<BinKey> bins;
  std::vector<double> planted;
  for (std::int64_t w = 0; w < 104; ++w) {
    const double p = 0.3 + 0.2 * std::sin(2.0 * std::numbers::pi * static_cast<double>(w) / 52.0);
    planted.push_back(p);
    for (int i = 0; i < 100; ++i) {
      const double s = std::clamp(p + rng.uniform(-0.2, 0.2), 0.0, 1.0);
      records.push_back(with_p("w" + std::to_string(w) + "_" + std::to_string(i), s, "US"));
      bins.push_back(key(i % 2 ? std::optional<std::string>("Paris") : std::nullopt, w));
    }
  }
  const auto model = identity_model();
  const auto series = weekly_series(records, bins, "wearing_hat", "Yes", model, {}, 50, 3);
  REQUIRE(series.points.size() == 104);
  CHECK(series.region == "all");
  std::vector<double> recovered;
  for (const auto& p : series.points) {
    recovered.push_back(p.mean);
    CHECK((p.mean >= 0.0 && p.mean <= 1.0));
    CHECK(p.ci_low <= p.mean);
    CHECK(p.ci_high >= p.mean);
  }
  CHECK(*pearson(recovered, planted) > 0.95);
  CHECK(oracle::direct_pearson(recovered, planted) == doctest::Approx(*pearson(recovered, planted)));

  const auto single = weekly_series(records, bins, "wearing_hat", "Yes", model, {}, 50, 1);
  CHECK(single.points == series.points);

  // 50 Paris records per week survive the default floor; a higher floor drops them all.
  RegionFilter paris{std::string("Paris"), std::nullopt};
  CHECK(weekly_series(records, bins, "wearing_hat", "Yes", model, paris).points.size() == 104);
  CHECK(weekly_series(records, bins, "wearing_hat", "Yes", model, paris, 51).points.empty());
  CHECK(paris.describe() == "city:Paris");
  CHECK(RegionFilter{std::nullopt, std::string("US")}.describe() == "country:US");

  CHECK_THROWS_AS(weekly_series(records, bins, "wearing_hat", "Yes", model, {std::string("Oslo"), std::nullopt}),
                  ValidationError);
  CHECK_THROWS_AS(weekly_series(records, bins, "wearing_hat", "Maybe", model), ValidationError);
  CHECK_THROWS_AS(weekly_series(records, bins, "wearing_scarf", "Yes", model), ValidationError);

  const auto text = format_series(series);
  CHECK(text.rfind("# attribute=wearing_hat class=Yes region=all\n", 0) == 0);
  CHECK(text.find("week_index\tmean\tci_low\tci_high\tn\n") != std::string::npos);
}

TEST_CASE("pearson") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{2, 4, 6, 8, 10};
  std::vector<double> z{5, 4, 3, 2, 1};
  CHECK(*pearson(x, y) == doctest::Approx(1.0));
  CHECK(*pearson(x, z) == doctest::Approx(-1.0));
  std::vector<double> flat{1, 1, 1, 1, 1};
  CHECK_FALSE(pearson(x, flat));
  CHECK_FALSE(pearson(std::vector<double>{1}, std::vector<double>{2}));
  CHECK_THROWS(pearson(x, std::vector<double>{1, 2}));
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(3 + rng.uniform_index(40)), b(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = rng.normal();
      b[i] = 0.5 * a[i] + rng.normal();
    }
    const auto r = *pearson(a, b);
    CHECK(r == doctest::Approx(oracle::direct_pearson(a, b)).epsilon(1e-12));
    CHECK((r >= -1.0 && r <= 1.0));
  }
}

TEST_CASE("city correlation matrix") {
  Rng rng(5);
  std::vector<CitySeries> series{
      {"Sydney", -33.87, sinusoid(26, 104, &rng)},
      {"London", 51.51, sinusoid(0, 104, &rng)},
      {"Paris", 48.86, sinusoid(0, 104, &rng)},
      {"Sparse", 10.0, {{0, 0.1}, {1, 0.2}}},
  };
  const auto m = city_correlation(series);
  CHECK(m.cities == std::vector<std::string>{"London", "Paris", "Sparse", "Sydney"});
  CHECK(m.latitudes[0] == doctest::Approx(51.51));
  const auto n = m.cities.size();
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(m.r[i][i]);
    CHECK(*m.r[i][i] == 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(m.r[i][j] == m.r[j][i]);
      CHECK(m.overlap[i][j] == m.overlap[j][i]);
      if (m.r[i][j]) CHECK((*m.r[i][j] >= -1.0 && *m.r[i][j] <= 1.0));
    }
  }
  CHECK(*m.r[0][3] < -0.8);
  CHECK(*m.r[0][1] > 0.8);
  CHECK_FALSE(m.r[0][2]);
  CHECK(m.overlap[0][2] == 2);

  const auto text = format_correlation(m);
  CHECK(text.find("NA") != std::string::npos);

  std::vector<CitySeries> neg{{"A", 1, sinusoid(0, 20)}, {"B", 0, {}}};
  for (const auto& [w, v] : neg[0].values) neg[1].values[w] = -v;
  CHECK(*city_correlation(neg).r[0][1] == doctest::Approx(-1.0));

  CHECK_THROWS_AS(city_correlation(std::span<const CitySeries>(series.data(), 1)), ValidationError);
  std::vector<CitySeries> dup{series[0], series[0]};
  CHECK_THROWS_AS(city_correlation(dup), ValidationError);
}

TEST_CASE("overlap correlation uses shared weeks only") {
  WeeklyValues a{{0, 1}, {1, 2}, {2, 3}, {5, 100}};
  WeeklyValues b{{0, 2}, {1, 4}, {2, 6}, {7, -50}};
  const auto c = overlap_correlation(a, b);
  CHECK(c.overlap == 3);
  CHECK(*c.r == doctest::Approx(1.0));
  CHECK_FALSE(overlap_correlation(a, b, 4).r);
}

TEST_CASE("external series parsing") {
  const auto v = parse_external_series("# comment\n0\t0.5\n2013-06-15\t0.25\n3,0.75\n", default_epoch);
  REQUIRE(v.size() == 3);
  CHECK(v.at(0) == 0.5);
  CHECK(v.at(2) == 0.25);
  CHECK(v.at(3) == 0.75);
  CHECK_THROWS_AS(parse_external_series("0\t1\n0\t2\n", default_epoch), ValidationError);
  CHECK_THROWS_AS(parse_external_series("0\tabc\n", default_epoch), ValidationError);
}

TEST_CASE("country aggregate") {
  std::vector<PersonRecord> records;
  for (int i = 0; i < 999; ++i) records.push_back(with_p("a" + std::to_string(i), 0.3, "FR"));
  for (int i = 0; i < 1000; ++i) records.push_back(with_p("b" + std::to_string(i), 0.9, "DE"));
  records.push_back(with_p("c", 0.1));
  const auto model = identity_model();
  const auto agg = country_aggregate(records, "wearing_hat", "Yes", model);
  REQUIRE(agg.included.size() == 1);
  CHECK(agg.included[0].country == "DE");
  CHECK(agg.included[0].mean == doctest::Approx(0.9));
  CHECK(agg.included[0].n == 1000);
  REQUIRE(agg.excluded.size() == 1);
  CHECK(agg.excluded[0].country == "FR");
  CHECK(agg.excluded[0].n == 999);
  CHECK(format_country_aggregate(agg).find("DE\t") != std::string::npos);

  std::vector<PersonRecord> none{with_p("x", 0.5)};
  CHECK_THROWS_AS(country_aggregate(none, "wearing_hat", "Yes", model), ValidationError);

  Rng rng(6);
  std::vector<PersonRecord> planted;
  for (int i = 0; i < 10000; ++i) {
    planted.push_back(with_p("u" + std::to_string(i), rng.bernoulli(0.1) ? 0.95 : 0.05, "US"));
    planted.push_back(with_p("j" + std::to_string(i), rng.bernoulli(0.6) ? 0.95 : 0.05, "JP"));
  }
  // Scores of 0.95 / 0.05 are calibrated by construction only if the model says
  // so; fit it on the same planted mixture.
  std::vector<CalibrationSample> samples;
  for (int i = 0; i < 20000; ++i) {
    const bool yes = rng.bernoulli(0.35);
    const double s = yes ? 0.95 : 0.05;
    samples.push_back({"wearing_hat", yes ? 1u : 0u, {1 - s, s}, ""});
  }
  const auto fitted = fit_calibration(samples, AttributeSchema::default_schema()).model;
  const auto p = country_aggregate(planted, "wearing_hat", "Yes", fitted);
  REQUIRE(p.included.size() == 2);
  CHECK(p.included[0].country == "JP");
  CHECK(std::abs(p.included[0].mean - 0.6) < 0.02);
  CHECK(std::abs(p.included[1].mean - 0.1) < 0.02);
}

TEST_CASE("entropy ranking on planted clusters") {
  Planted p;
  // Cluster 0 lives only in Paris, spread over twelve months.
  for (std::int64_t m = 0; m < 12; ++m) p.add(0, "Paris", m, 10);
  // Cluster 1 lives only in Tokyo in month 5.
  p.add(1, "Tokyo", 5, 40);
  // Cluster 2 is everywhere, always.
  for (const char* city : {"Paris", "Tokyo", "Lima", "Cairo"}) {
    for (std::int64_t m = 0; m < 12; ++m) p.add(2, city, m, 3);
  }
  // Records without a city never count.
  p.assignments.push_back({"nocity", 2, 0.0});
  p.bins.push_back(key(std::nullopt, 0));

  const auto cities = rank_clusters(p.assignments, p.bins, RankMode::cities);
  CHECK(cities.score_kind == "entropy");
  REQUIRE(cities.entries.size() == 3);
  // Clusters 0 and 1 both have zero city entropy; the tie goes to the lower id.
  CHECK(cities.entries[0].cluster_id == 0);
  CHECK(cities.entries[0].score == 0.0);
  CHECK(cities.entries[1].cluster_id == 1);
  CHECK(cities.entries[2].cluster_id == 2);
  CHECK(cities.entries[2].score == doctest::Approx(std::log(4.0)));
  CHECK(cities.entries[2].total == 144);

  const auto cm = rank_clusters(p.assignments, p.bins, RankMode::city_month);
  CHECK(cm.entries[0].cluster_id == 1);
  CHECK(cm.entries[1].cluster_id == 0);
  CHECK(cm.entries[1].score == doctest::Approx(std::log(12.0)));
  CHECK(cm.entries[2].cluster_id == 2);

  const auto desc = rank_clusters(p.assignments, p.bins, RankMode::cities, RankOrder::descending);
  CHECK(desc.entries[0].cluster_id == 2);
  CHECK(desc.entries[1].cluster_id == 0);  // ties still go to the lower id

  // Base invariance: log2 entropy orders clusters identically.
  for (std::size_t i = 1; i < cm.entries.size(); ++i) {
    CHECK(cm.entries[i].score / std::log(2.0) >= cm.entries[i - 1].score / std::log(2.0));
  }

  // Per-cluster city counts sum to the records with that city.
  const auto hist = cluster_histograms(p.assignments, p.bins, RankMode::cities);
  std::map<std::string, double> by_city;
  for (const auto& h : hist) {
    for (const auto& [cell, c] : h.counts) by_city[cell.first] += c;
  }
  CHECK(by_city["Paris"] == 120 + 36);
  CHECK(by_city["Tokyo"] == 40 + 36);
  CHECK(by_city["Lima"] == 36);

  const auto norm = cluster_histograms(p.assignments, p.bins, RankMode::cities, CountNormalization::per_city);
  double paris_total = 0;
  for (const auto& h : norm) {
    if (auto it = h.counts.find({"Paris", 0}); it != h.counts.end()) paris_total += it->second;
  }
  CHECK(paris_total == doctest::Approx(1.0));

  CHECK_THROWS_AS(rank_clusters(std::span<const ClusterAssignment>{}, std::span<const BinKey>{}, RankMode::cities),
                  ValidationError);
  CHECK(format_ranking(cities).find("rank\tcluster_id\tentropy\ttotal") != std::string::npos);
}

TEST_CASE("ranking option parsing") {
  CHECK(parse_rank_mode("city-month") == RankMode::city_month);
  CHECK(parse_rank_order("desc") == RankOrder::descending);
  CHECK(parse_count_normalization("per-city") == CountNormalization::per_city);
  CHECK(std::string(to_string(RankMode::cities)) == "cities");
  CHECK(std::string(to_string(RankOrder::ascending)) == "asc");
  CHECK(std::string(to_string(CountNormalization::raw)) == "raw");
  CHECK_THROWS_AS(parse_rank_mode("months"), UsageError);
  CHECK_THROWS_AS(parse_rank_order("up"), UsageError);
  CHECK_THROWS_AS(parse_count_normalization("none"), UsageError);
}

TEST_CASE("distinctiveness lift") {
  Planted p;
  // Paris: 10000 records, cluster 0 share 0.2. Everywhere: 200000 records, cluster 0 share 0.05.
  p.add(0, "Paris", 0, 2000);
  p.add(1, "Paris", 0, 8000);
  p.add(0, "Rest", 0, 8000);
  p.add(1, "Rest", 0, 181000);
  p.add(2, "Rest", 0, 1000);
  const auto lift = distinctiveness(p.assignments, p.bins, "Paris", 4);
  CHECK(lift.score_kind == "lift");
  // Cluster 3 has no members anywhere and is not ranked.
  REQUIRE(lift.entries.size() == 3);
  CHECK(lift.entries[0].cluster_id == 0);
  CHECK(lift.entries[0].score == doctest::Approx(4.0).epsilon(0.01));
  // Cluster 2 never occurs in Paris; smoothing keeps its lift positive.
  const auto absent = std::find_if(lift.entries.begin(), lift.entries.end(), [](auto& e) { return e.cluster_id == 2; });
  CHECK(absent->score > 0.0);
  CHECK(absent->score < 1.0);
  CHECK_THROWS_AS(distinctiveness(p.assignments, p.bins, "Oslo", 3), ValidationError);

  Planted q;
  q.add(0, "Lima", 0, 30);
  q.add(1, "Lima", 0, 30);
  q.add(1, "Quito", 0, 30);
  q.add(2, "Quito", 0, 30);
  q.add(2, "Lima", 0, 5);
  CHECK(distinctiveness(q.assignments, q.bins, "Lima", 3).entries[0].cluster_id == 0);
  CHECK(distinctiveness(q.assignments, q.bins, "Quito", 3).entries[0].cluster_id == 2);
}
