#include "stylescope/pipeline/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "stylescope/consensus/votes_io.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/parallel.hpp"
#include "stylescope/core/random.hpp"
#include "stylescope/core/text.hpp"
#include "stylescope/ingestion/binning.hpp"
#include "stylescope/ingestion/corpus_io.hpp"

namespace stylescope {

namespace {

constexpr double probability_tolerance = 1e-6;

const std::vector<std::string>& default_city_names() {
  static const std::vector<std::string> names = {"New York City", "London",       "Paris",        "Tokyo",
                                                 "Sydney",        "Buenos Aires", "Johannesburg", "Rio de Janeiro"};
  return names;
}

std::vector<City> resolve_cities(const SyntheticSpec& spec) {
  if (!spec.cities.empty()) return spec.cities;
  const auto table = CityTable::default_table();
  std::vector<City> out;
  for (const auto& name : default_city_names()) out.push_back(table.at(name));
  return out;
}

std::vector<PlantedCluster> resolve_clusters(const SyntheticSpec& spec, std::size_t city_count) {
  if (!spec.clusters.empty()) return spec.clusters;
  std::vector<PlantedCluster> out(city_count);
  for (std::size_t c = 0; c < city_count; ++c) {
    out[c].city_affinity.assign(city_count, city_count > 1 ? 0.4 / static_cast<double>(city_count - 1) : 0.0);
    out[c].city_affinity[c] = city_count > 1 ? 0.6 : 1.0;
  }
  return out;
}

void check_probability_vector(std::span<const double> p, std::size_t expected, const std::string& what) {
  if (p.size() != expected) {
    throw ValidationError("invalid probability vector for " + what + ": expected " + std::to_string(expected) +
                          " entries, got " + std::to_string(p.size()));
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("invalid probability vector for " + what + ": negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > probability_tolerance) {
    throw ValidationError("invalid probability vector for " + what + ": sums to " + format_double(sum));
  }
}

std::int64_t window_end(const SyntheticSpec& spec) {
  return spec.start + static_cast<std::int64_t>(spec.weeks) * seconds_per_week;
}

std::size_t window_months(const SyntheticSpec& spec) {
  return static_cast<std::size_t>(month_index(window_end(spec) - 1, spec.start) + 1);
}

// Start of calendar month `m` counted from the month containing `start`.
std::int64_t month_start(std::int64_t start, std::size_t m) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(sys_seconds{seconds{start}})};
  const year_month ym = ymd.year() / ymd.month() + months{static_cast<int>(m)};
  return duration_cast<seconds>(sys_days{ym / 1}.time_since_epoch()).count();
}

std::vector<double> reference_prevalence(const Attribute& attribute) {
  auto counts = reference_class_counts(attribute.name);
  if (counts.size() != attribute.class_count()) counts.assign(attribute.class_count(), 1.0);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  for (auto& c : counts) c /= total;
  return counts;
}

std::vector<std::vector<double>> reference_confusion(const Attribute& attribute, std::span<const double> prevalence) {
  const auto m = attribute.class_count();
  const auto ref = reference_accuracy(attribute.name);
  const double accuracy = ref ? ref->accuracy : 0.8;
  std::vector<std::vector<double>> c(m, std::vector<double>(m, 0.0));
  for (std::size_t t = 0; t < m; ++t) {
    const double rest = 1.0 - prevalence[t];
    for (std::size_t p = 0; p < m; ++p) {
      if (p == t) c[t][p] = accuracy;
      else c[t][p] = rest > 0.0 ? (1.0 - accuracy) * prevalence[p] / rest : (1.0 - accuracy) / static_cast<double>(m - 1);
    }
  }
  return c;
}

struct AttributePlan {
  std::vector<double> prevalence;
  std::map<std::string, std::vector<double>, std::less<>> by_country;
  double amplitude = 0.0;
  std::vector<std::vector<double>> confusion;
};

std::vector<AttributePlan> plan_attributes(const SyntheticSpec& spec, const AttributeSchema& schema) {
  std::vector<AttributePlan> plans;
  for (const auto& a : schema.attributes()) {
    AttributePlan plan;
    const auto p = spec.prevalence.find(a.name);
    plan.prevalence = p != spec.prevalence.end() ? p->second : reference_prevalence(a);
    for (const auto& [country, attrs] : spec.country_prevalence) {
      if (auto it = attrs.find(a.name); it != attrs.end()) plan.by_country.emplace(country, it->second);
    }
    if (auto it = spec.seasonal_amplitude.find(a.name); it != spec.seasonal_amplitude.end()) plan.amplitude = it->second;
    const auto c = spec.confusion.find(a.name);
    plan.confusion = c != spec.confusion.end() ? c->second : reference_confusion(a, plan.prevalence);
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace

void validate_synthetic_spec(const SyntheticSpec& spec, const AttributeSchema& schema) {
  if (spec.dim == 0) throw ValidationError("synthetic spec: dim must be positive");
  if (spec.weeks == 0) throw ValidationError("synthetic spec: weeks must be positive");
  if (!(spec.separation >= 0.0) || !(spec.noise >= 0.0) || !std::isfinite(spec.separation) ||
      !std::isfinite(spec.noise)) {
    throw ValidationError("synthetic spec: separation and noise must be finite and non-negative");
  }
  if (spec.labeled > spec.records) throw ValidationError("synthetic spec: more labeled records than records");
  const auto cities = resolve_cities(spec);
  if (cities.empty()) throw ValidationError("synthetic spec: no cities");
  const auto months = window_months(spec);
  const auto clusters = resolve_clusters(spec, cities.size());
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    const std::string name = "cluster " + std::to_string(k);
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) throw ValidationError("synthetic spec: " + name + " weight must be positive");
    if (!c.city_affinity.empty()) check_probability_vector(c.city_affinity, cities.size(), name + " city affinity");
    if (!c.month_affinity.empty()) check_probability_vector(c.month_affinity, months, name + " month affinity");
  }
  for (const auto& [attr, p] : spec.prevalence) {
    check_probability_vector(p, schema.at(attr).class_count(), "prevalence of " + attr);
  }
  for (const auto& [country, attrs] : spec.country_prevalence) {
    for (const auto& [attr, p] : attrs) {
      check_probability_vector(p, schema.at(attr).class_count(), "prevalence of " + attr + " in " + country);
    }
  }
  for (const auto& [attr, amplitude] : spec.seasonal_amplitude) {
    if (schema.at(attr).class_count() != 2) {
      throw ValidationError("synthetic spec: seasonal amplitude needs a two-class attribute, got " + attr);
    }
    if (!std::isfinite(amplitude) || std::abs(amplitude) > 1.0) {
      throw ValidationError("synthetic spec: seasonal amplitude of " + attr + " out of range");
    }
  }
  for (const auto& [attr, matrix] : spec.confusion) {
    const auto m = schema.at(attr).class_count();
    if (matrix.size() != m) throw ValidationError("confusion matrix of " + attr + " must have " + std::to_string(m) + " rows");
    for (std::size_t r = 0; r < m; ++r) {
      check_probability_vector(matrix[r], m, "confusion row " + std::to_string(r) + " of " + attr);
    }
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec, const AttributeSchema& schema, std::size_t threads) {
  validate_synthetic_spec(spec, schema);
  SyntheticCorpus out;
  out.cities = resolve_cities(spec);
  const auto clusters = resolve_clusters(spec, out.cities.size());
  const auto plans = plan_attributes(spec, schema);
  const auto end = window_end(spec);

  std::vector<double> weights;
  for (const auto& c : clusters) weights.push_back(c.weight);

  std::vector<std::vector<double>> means(clusters.size(), std::vector<double>(spec.dim));
  Rng mean_rng(mix_seed(spec.seed, stable_hash("cluster-means")));
  for (auto& mean : means) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : mean) {
        v = mean_rng.normal();
        norm += v * v;
      }
    } while (norm == 0.0);
    for (auto& v : mean) v *= spec.separation / std::sqrt(norm);
  }

  const auto n = spec.records;
  out.records.resize(n);
  out.cluster.resize(n);
  out.truth.resize(n);
  const std::size_t id_width = std::max<std::size_t>(6, std::to_string(n).size());

  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(mix_seed(spec.seed, i));
    const std::size_t k = rng.categorical(weights);
    const auto& planted = clusters[k];
    const std::size_t c = planted.city_affinity.empty() ? rng.uniform_index(out.cities.size())
                                                        : rng.categorical(planted.city_affinity);
    const City& city = out.cities[c];

    std::int64_t t = 0;
    if (planted.month_affinity.empty()) {
      t = spec.start + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::size_t>(end - spec.start)));
    } else {
      const auto m = rng.categorical(planted.month_affinity);
      const auto lo = std::max(spec.start, month_start(spec.start, m));
      const auto hi = std::min(end, month_start(spec.start, m + 1));
      t = lo + static_cast<std::int64_t>(rng.uniform_index(static_cast<std::size_t>(hi - lo)));
    }

    PersonRecord& r = out.records[i];
    std::string digits = std::to_string(i);
    r.record_id = "p" + std::string(id_width - digits.size(), '0') + digits;
    r.latitude = std::clamp(city.latitude + rng.uniform(-0.01, 0.01), -90.0, 90.0);
    r.longitude = std::clamp(city.longitude + rng.uniform(-0.01, 0.01), -180.0, 180.0);
    r.timestamp = t;
    r.country = city.country;
    r.embedding.resize(spec.dim);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      r.embedding[j] = static_cast<float>(means[k][j] + spec.noise * rng.normal());
    }

    const double week = static_cast<double>((t - spec.start) / seconds_per_week);
    const double season = std::cos(2.0 * std::numbers::pi * week / 52.0) * (city.latitude < 0.0 ? -1.0 : 1.0);
    auto& truth = out.truth[i];
    truth.resize(schema.size());
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto& attribute = schema.attributes()[a];
      const auto& plan = plans[a];
      std::vector<double> p = plan.prevalence;
      if (city.country) {
        if (auto it = plan.by_country.find(*city.country); it != plan.by_country.end()) p = it->second;
      }
      if (plan.amplitude != 0.0) {
        p[1] = std::clamp(p[1] + plan.amplitude * season, 0.0, 1.0);
        p[0] = 1.0 - p[1];
      }
      const std::size_t true_class = rng.categorical(p);
      const std::size_t predicted = rng.categorical(plan.confusion[true_class]);
      const double confidence = predicted == true_class ? rng.uniform(0.5, 1.0) : rng.uniform(0.2, 0.8);
      const auto m = attribute.class_count();
      std::vector<double> scores(m, (1.0 - confidence) / static_cast<double>(m));
      scores[predicted] += confidence;
      truth[a] = true_class;
      r.scores.emplace(attribute.name, std::move(scores));
    }
    out.cluster[i] = k;
  });

  for (std::size_t i = 0; i < spec.labeled; ++i) {
    for (std::size_t a = 0; a < schema.size(); ++a) {
      const auto& attribute = schema.attributes()[a];
      out.labels.push_back({out.records[i].record_id, attribute.name, attribute.classes[out.truth[i][a]]});
    }
  }

  if (spec.votes && spec.labeled > 0) {
    // Twelve careful workers and one careless one; the careless worker fails
    // enough sentinels to be banned under the default gate.
    struct Worker {
      std::string id;
      double reliability;
    };
    std::vector<Worker> workers;
    for (int w = 1; w <= 12; ++w) workers.push_back({(w < 10 ? "w0" : "w") + std::to_string(w), 0.92});
    workers.push_back({"w13", 0.30});

    Rng rng(mix_seed(spec.seed, stable_hash("votes")));
    const auto answer = [&](const Worker& w, std::size_t record, std::size_t a) {
      const auto& attribute = schema.attributes()[a];
      const auto truth = out.truth[record][a];
      if (rng.bernoulli(w.reliability)) return attribute.classes[truth];
      const auto m = attribute.class_count();
      const auto other = (truth + 1 + rng.uniform_index(m - 1)) % m;
      return attribute.classes[other];
    };
    for (const auto& w : workers) {
      for (int s = 0; s < 10; ++s) {
        const auto record = rng.uniform_index(spec.labeled);
        const auto a = rng.uniform_index(schema.size());
        const auto& attribute = schema.attributes()[a];
        Vote v;
        v.worker_id = w.id;
        v.record_id = out.records[record].record_id;
        v.attribute = attribute.name;
        v.label = answer(w, record, a);
        v.is_sentinel = true;
        v.sentinel_truth = attribute.classes[out.truth[record][a]];
        out.votes.push_back(std::move(v));
      }
    }
    std::vector<std::size_t> pool(workers.size());
    for (std::size_t i = 0; i < spec.labeled; ++i) {
      for (std::size_t a = 0; a < schema.size(); ++a) {
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t j = 0; j < 5; ++j) {
          std::swap(pool[j], pool[j + rng.uniform_index(pool.size() - j)]);
          Vote v;
          v.worker_id = workers[pool[j]].id;
          v.record_id = out.records[i].record_id;
          v.attribute = schema.attributes()[a].name;
          v.label = answer(workers[pool[j]], i, a);
          out.votes.push_back(std::move(v));
        }
      }
    }
  }
  return out;
}

SyntheticFiles write_synthetic(const SyntheticCorpus& corpus, const SyntheticSpec& spec,
                               const AttributeSchema& schema, const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw_io_error("cannot create directory", directory.string());

  SyntheticFiles files{directory / "corpus.ndjson", directory / "embeddings.bin", directory / "labels.tsv",
                       directory / "truth.tsv",     directory / "truth.json",     directory / "votes.tsv"};
  {
    CorpusWriter writer(files.corpus, files.embeddings, spec.dim);
    for (const auto& r : corpus.records) writer.write(r);
    writer.finish();
  }
  write_text_file(files.labels, format_labels(corpus.labels));
  if (spec.votes) write_text_file(files.votes, format_votes(corpus.votes));

  std::string truth = "record_id\tcluster\tcity";
  for (const auto& a : schema.attributes()) truth += '\t' + a.name;
  truth += '\n';
  const CityTable table(corpus.cities, 50.0);
  for (std::size_t i = 0; i < corpus.records.size(); ++i) {
    const auto& r = corpus.records[i];
    const auto c = nearest_city(table, r.latitude, r.longitude);
    truth += r.record_id + '\t' + std::to_string(corpus.cluster[i]) + '\t' + (c ? corpus.cities[*c].name : "");
    for (std::size_t a = 0; a < schema.size(); ++a) truth += '\t' + schema.attributes()[a].classes[corpus.truth[i][a]];
    truth += '\n';
  }
  write_text_file(files.truth, truth);

  const auto clusters = resolve_clusters(spec, corpus.cities.size());
  double weight_sum = 0.0;
  for (const auto& c : clusters) weight_sum += c.weight;
  std::vector<std::size_t> cluster_counts(clusters.size(), 0);
  for (auto k : corpus.cluster) ++cluster_counts[k];
  const double n = static_cast<double>(std::max<std::size_t>(corpus.records.size(), 1));

  nlohmann::ordered_json summary;
  summary["seed"] = spec.seed;
  summary["records"] = corpus.records.size();
  summary["dim"] = spec.dim;
  summary["cities"] = nlohmann::ordered_json::array();
  for (const auto& c : corpus.cities) summary["cities"].push_back(c.name);
  summary["clusters"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    summary["clusters"].push_back({{"id", k},
                                   {"weight", clusters[k].weight / weight_sum},
                                   {"observed_share", static_cast<double>(cluster_counts[k]) / n}});
  }
  nlohmann::ordered_json prevalence = nlohmann::ordered_json::object();
  for (std::size_t a = 0; a < schema.size(); ++a) {
    const auto& attribute = schema.attributes()[a];
    std::vector<std::size_t> counts(attribute.class_count(), 0);
    for (const auto& t : corpus.truth) ++counts[t[a]];
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < counts.size(); ++c) per_class[attribute.classes[c]] = static_cast<double>(counts[c]) / n;
    prevalence[attribute.name] = std::move(per_class);
  }
  summary["prevalence"] = std::move(prevalence);
  write_text_file(files.summary, summary.dump(1) + "\n");
  return files;
}

namespace {

std::vector<double> parse_vector(std::string_view text, std::string_view field) {
  std::vector<double> out;
  for (const auto& item : split_trimmed(text, ',')) out.push_back(parse_double(item, field));
  return out;
}

// "Name:p, Name:p" over `names`, or "*" for uniform (empty vector).
std::vector<double> parse_affinity(std::string_view text, const std::vector<std::string>& names, std::string_view field) {
  if (trim(text) == "*") return {};
  std::vector<double> out(names.size(), 0.0);
  for (const auto& item : split_trimmed(text, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw ValidationError(std::string(field) + ": expected name:probability, got '" + item + "'");
    const auto name = std::string(trim(std::string_view(item).substr(0, colon)));
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError(std::string(field) + ": unknown entry '" + name + "'");
    out[static_cast<std::size_t>(it - names.begin())] += parse_double(std::string_view(item).substr(colon + 1), field);
  }
  return out;
}

}  // namespace

SyntheticSpec load_synthetic_spec(const KvDocument& document) {
  SyntheticSpec spec;
  const auto where = [&](const KvEntry& e) { return document.source() + ":" + std::to_string(e.line) + ": "; };
  for (const auto& e : document.section("synth")) {
    try {
      if (e.key == "records") spec.records = parse_uint(e.value, e.key);
      else if (e.key == "seed") spec.seed = parse_uint(e.value, e.key);
      else if (e.key == "dim") spec.dim = parse_uint(e.value, e.key);
      else if (e.key == "weeks") spec.weeks = parse_uint(e.value, e.key);
      else if (e.key == "start") spec.start = e.value.find('-', 1) != std::string::npos ? parse_iso8601(e.value) : parse_int(e.value, e.key);
      else if (e.key == "separation") spec.separation = parse_double(e.value, e.key);
      else if (e.key == "noise") spec.noise = parse_double(e.value, e.key);
      else if (e.key == "labeled") spec.labeled = parse_uint(e.value, e.key);
      else if (e.key == "votes") spec.votes = e.value == "true" || e.value == "1";
      else if (e.key == "cities") {
        const auto table = CityTable::default_table();
        spec.cities.clear();
        for (const auto& name : split_trimmed(e.value, ',')) spec.cities.push_back(table.at(name));
      } else {
        throw UsageError("unknown key 'synth." + e.key + "'");
      }
    } catch (const UsageError& err) {
      throw UsageError(where(e) + err.what());
    } catch (const ValidationError& err) {
      throw ValidationError(where(e) + err.what());
    }
  }

  const auto cities = spec.cities.empty() ? resolve_cities(spec) : spec.cities;
  std::vector<std::string> city_names;
  for (const auto& c : cities) city_names.push_back(c.name);
  std::vector<std::string> month_names;
  for (std::size_t m = 0; m < window_months(spec); ++m) month_names.push_back(std::to_string(m));

  std::vector<std::pair<std::uint64_t, std::string>> cluster_sections;
  for (const auto& name : document.sections()) {
    if (name == "synth" || name.empty()) continue;
    if (name.rfind("cluster.", 0) == 0) {
      cluster_sections.emplace_back(parse_uint(name.substr(8), "cluster index"), name);
    } else if (name == "prevalence" || name == "seasonal" || name == "confusion" || name.rfind("country.", 0) == 0) {
      continue;
    } else {
      throw UsageError(document.source() + ": unknown section [" + name + "]");
    }
  }
  std::sort(cluster_sections.begin(), cluster_sections.end());
  for (std::size_t i = 0; i < cluster_sections.size(); ++i) {
    if (cluster_sections[i].first != i) throw UsageError(document.source() + ": cluster sections must be numbered 0, 1, 2, ...");
    PlantedCluster c;
    for (const auto& e : document.section(cluster_sections[i].second)) {
      try {
        if (e.key == "weight") c.weight = parse_double(e.value, e.key);
        else if (e.key == "cities") c.city_affinity = parse_affinity(e.value, city_names, "cities");
        else if (e.key == "months") c.month_affinity = parse_affinity(e.value, month_names, "months");
        else throw UsageError("unknown key '" + cluster_sections[i].second + "." + e.key + "'");
      } catch (const UsageError& err) {
        throw UsageError(where(e) + err.what());
      } catch (const ValidationError& err) {
        throw ValidationError(where(e) + err.what());
      }
    }
    spec.clusters.push_back(std::move(c));
  }
  for (const auto& e : document.section("prevalence")) spec.prevalence[e.key] = parse_vector(e.value, e.key);
  for (const auto& e : document.section("seasonal")) spec.seasonal_amplitude[e.key] = parse_double(e.value, e.key);
  for (const auto& e : document.section("confusion")) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : split_trimmed(e.value, ';')) rows.push_back(parse_vector(row, e.key));
    spec.confusion[e.key] = std::move(rows);
  }
  for (const auto& name : document.sections()) {
    if (name.rfind("country.", 0) != 0) continue;
    for (const auto& e : document.section(name)) {
      spec.country_prevalence[name.substr(8)][e.key] = parse_vector(e.value, e.key);
    }
  }
  return spec;
}

}  // namespace stylescope
