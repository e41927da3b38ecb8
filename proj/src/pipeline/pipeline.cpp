#include "stylescope/pipeline/pipeline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "stylescope/analytics/correlation.hpp"
#include "stylescope/analytics/ranking.hpp"
#include "stylescope/analytics/trends.hpp"
#include "stylescope/calibration/reliability.hpp"
#include "stylescope/clustering/style_model.hpp"
#include "stylescope/consensus/votes_io.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/parallel.hpp"
#include "stylescope/core/random.hpp"
#include "stylescope/core/text.hpp"
#include "stylescope/ingestion/corpus_io.hpp"
#include "stylescope/ingestion/country_lookup.hpp"
#include "stylescope/ingestion/sampling.hpp"
#include "stylescope/pipeline/content_hash.hpp"
#include "stylescope/pipeline/tables.hpp"

namespace stylescope {

const char* to_string(StageStatus status) {
  switch (status) {
    case StageStatus::ran:
      return "ran";
    case StageStatus::cached:
      return "cached";
    case StageStatus::skipped:
      return "skipped";
  }
  return "?";
}

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Bump when a stage's outputs change meaning.
constexpr const char* stage_format = "1";

std::string file_token(const std::optional<fs::path>& path) {
  if (!path) return "none";
  ContentHasher h;
  h.update_file(*path);
  return h.hex();
}

std::string file_name_token(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    out += keep ? c : '_';
  }
  return out;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& value) { write_text_file(path, value.dump(1) + "\n"); }

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_io_error("cannot create directory", dir.string());
}

class Pipeline {
 public:
  Pipeline(const PipelineConfig& config, std::ostream* log)
      : config_(config),
        log_(log),
        out_(config.output),
        threads_(resolve_threads(config.threads)),
        schema_(config.schema ? load_schema_file(*config.schema) : AttributeSchema::default_schema()),
        cities_(config.cities ? load_city_table_file(*config.cities) : CityTable::default_table()) {
    if (config.countries) countries_ = CountryLookup::load_file(*config.countries);
  }

  PipelineResult run() {
    if (config_.corpus.empty()) throw UsageError("no corpus configured (paths.corpus)");
    if (!fs::exists(config_.corpus)) throw ValidationError("corpus not found: " + config_.corpus.string());
    if (!config_.labels && !config_.votes) throw UsageError("no labels or votes configured (paths.labels / paths.votes)");
    if (config_.consensus.threshold > config_.consensus.quorum || 2 * config_.consensus.threshold <= config_.consensus.quorum) {
      throw UsageError("consensus.threshold must be a strict majority of consensus.quorum");
    }
    make_dirs(out_ / ".stages");

    const std::string ingest_key = stage_key("ingest", {file_token(config_.corpus), file_token(config_.embeddings),
                                                        file_token(config_.schema), file_token(config_.cities),
                                                        file_token(config_.countries), std::to_string(config_.epoch),
                                                        config_.lenient ? "lenient" : "strict"});
    stage("ingest", ingest_key, {"bins.tsv", "skipped.tsv"}, [&] { return run_ingest(); }, [] {});

    std::string labels_key;
    if (config_.votes) {
      const std::string key = stage_key(
          "consensus", {file_token(config_.votes), file_token(config_.schema), std::to_string(config_.consensus.quorum),
                        std::to_string(config_.consensus.threshold), std::to_string(config_.gate.min_failures),
                        format_double(config_.gate.max_failure_rate)});
      stage("consensus", key, {"labels.tsv", "audit.json"}, [&] { return run_consensus(); },
            [&] { labels_ = read_labels(out_ / "consensus" / "labels.tsv"); });
      labels_key = key;
    } else {
      skip("consensus");
      labels_ = read_labels(*config_.labels);
      labels_key = file_token(config_.labels);
    }

    const std::string calibrate_key =
        stage_key("calibrate", {ingest_key, labels_key, to_string(config_.calibration_method),
                                std::to_string(config_.split_seed), config_.fit_on_all_labels ? "all" : "validation",
                                std::to_string(config_.reliability_bins)});
    stage("calibrate", calibrate_key, {"model.json", "reliability.tsv"}, [&] { return run_calibrate(); },
          [&] { calibration_ = CalibrationModel::from_json(read_text_file(out_ / "calibrate" / "model.json")); });

    std::string cluster_key = "none";
    if (config_.embeddings) {
      cluster_key = stage_key(
          "embed-cluster",
          {ingest_key, format_double(config_.retain), std::to_string(config_.k), std::to_string(config_.cap),
           std::to_string(config_.seed), std::to_string(config_.max_iterations), format_double(config_.tolerance),
           format_double(config_.variance_floor), config_.solver == PcaSolver::exact ? "exact" : "randomized",
           std::to_string(config_.exemplars)});
      stage("embed-cluster", cluster_key, {"style_model.bin", "assignments.tsv", "subsample.txt", "exemplars.tsv"},
            [&] { return run_cluster(); }, [&] { load_cluster(); });
    } else {
      skip("embed-cluster");
    }

    std::string targets;
    for (const auto& t : trend_targets()) targets += t.attribute + "/" + t.class_label + ";";
    const std::string analytics_key =
        stage_key("analytics", {ingest_key, calibrate_key, cluster_key, file_token(config_.external_series),
                                std::to_string(config_.min_n), format_double(config_.alpha),
                                std::to_string(config_.min_country_photos), to_string(config_.normalization), targets});
    stage("analytics", analytics_key, {}, [&] { return run_analytics(); }, [] {});

    json report;
    report["format"] = "stylescope-report";
    report["version"] = 1;
    json knobs = json::object();
    const auto document = config_.to_document(false);
    for (const auto& e : document.entries()) knobs[e.section][e.key] = e.value;
    report["config"] = std::move(knobs);
    report["stages"] = std::move(summaries_);
    PipelineResult result{std::move(stages_), out_ / "report.json"};
    write_json(result.report, report);
    return result;
  }

 private:
  // -- stage plumbing ------------------------------------------------------

  std::string stage_key(std::string_view name, std::initializer_list<std::string> parts) const {
    ContentHasher h;
    h.update(name).update(stage_format);
    for (const auto& p : parts) h.update(p);
    return h.hex();
  }

  void note(const std::string& name, StageStatus status) {
    if (log_) *log_ << "stage " << name << ": " << to_string(status) << '\n';
  }

  void skip(const std::string& name) {
    stages_.push_back({name, StageStatus::skipped, ""});
    summaries_[name] = json{{"status", "skipped"}};
    note(name, StageStatus::skipped);
  }

  void stage(const std::string& name, const std::string& key, const std::vector<std::string>& outputs,
             const std::function<json()>& run, const std::function<void()>& load) {
    const fs::path dir = out_ / name;
    const fs::path marker = out_ / ".stages" / (name + ".key");
    try {
      bool cached = fs::exists(marker) && read_text_file(marker) == key + "\n" && fs::exists(dir / "summary.json");
      for (const auto& o : outputs) cached = cached && fs::exists(dir / o);
      json summary;
      if (cached) {
        summary = read_json(dir / "summary.json");
        load();
      } else {
        std::error_code ec;
        fs::remove(marker, ec);
        make_dirs(dir);
        summary = run();
        write_json(dir / "summary.json", summary);
        write_text_file(marker, key + "\n");
      }
      const auto status = cached ? StageStatus::cached : StageStatus::ran;
      stages_.push_back({name, status, key});
      summaries_[name] = json{{"key", key}, {"summary", std::move(summary)}};
      note(name, status);
    } catch (const Error& e) {
      rethrow_with_context(e, "stage " + name);
    } catch (const std::bad_alloc&) {
      throw NumericError("stage " + name + ": out of memory");
    } catch (const std::exception& e) {
      throw ValidationError("stage " + name + ": " + e.what());
    }
  }

  // -- records -------------------------------------------------------------

  void ensure_records() {
    if (records_loaded_) return;
    CorpusReadOptions options;
    options.lenient = config_.lenient;
    CorpusReader reader(config_.corpus, config_.embeddings, schema_, options);
    while (auto r = reader.next()) {
      if (countries_) countries_->fill(*r);
      records_.push_back(std::move(*r));
    }
    skipped_ = reader.skipped();
    dim_ = reader.has_embeddings() ? reader.dim() : 0;
    bins_.resize(records_.size());
    parallel_for(records_.size(), threads_, [&](std::size_t i) {
      bins_[i] = assign_bins(records_[i], cities_, config_.epoch);
    });
    index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (!index_.emplace(records_[i].record_id, i).second) {
        throw ValidationError("duplicate record id '" + records_[i].record_id + "'");
      }
    }
    records_loaded_ = true;
  }

  std::vector<TrendTarget> trend_targets() const {
    if (!config_.trends.empty()) return config_.trends;
    std::vector<TrendTarget> out;
    for (const auto& a : schema_.attributes()) {
      if (a.class_count() == 2) out.push_back({a.name, a.classes[1]});
    }
    return out;
  }

  // -- stages --------------------------------------------------------------

  json run_ingest() {
    ensure_records();
    const fs::path dir = out_ / "ingest";
    write_text_file(dir / "bins.tsv", format_bins(records_, bins_));
    std::string skipped = "line\treason\n";
    for (const auto& s : skipped_) skipped += std::to_string(s.line) + '\t' + s.reason + '\n';
    write_text_file(dir / "skipped.tsv", skipped);

    std::map<std::string, std::size_t> per_city;
    std::size_t no_city = 0, with_country = 0;
    std::int64_t first_week = 0, last_week = 0;
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (bins_[i].city) ++per_city[*bins_[i].city];
      else ++no_city;
      if (records_[i].country) ++with_country;
      if (i == 0 || bins_[i].week_index < first_week) first_week = bins_[i].week_index;
      if (i == 0 || bins_[i].week_index > last_week) last_week = bins_[i].week_index;
    }
    json cities = json::object();
    for (const auto& [c, n] : per_city) cities[c] = n;
    return json{{"records", records_.size()},
                {"skipped", skipped_.size()},
                {"embedding_dim", dim_},
                {"records_without_city", no_city},
                {"records_with_country", with_country},
                {"first_week", first_week},
                {"last_week", last_week},
                {"records_per_city", std::move(cities)}};
  }

  json run_consensus() {
    auto votes = read_votes(*config_.votes);
    validate_votes(votes, schema_);
    const auto dataset = build_dataset(votes, config_.consensus, config_.gate);
    labels_ = dataset.examples;
    const fs::path dir = out_ / "consensus";
    write_text_file(dir / "labels.tsv", format_labels(labels_));
    write_text_file(dir / "audit.json", dataset.audit.to_json());
    const auto banned = dataset.audit.banned_workers();
    return json{{"votes", dataset.audit.total_votes},
                {"sentinel_votes", dataset.audit.sentinel_votes},
                {"labels", labels_.size()},
                {"banned_workers", banned}};
  }

  json run_calibrate() {
    ensure_records();
    std::vector<LabeledExample> fit_examples;
    for (const auto& e : labels_) {
      if (config_.fit_on_all_labels || split_of(e.record_id, config_.split_seed) == DataSplit::validation) {
        fit_examples.push_back(e);
      }
    }
    const auto fit_samples = join_labels(fit_examples, records_, schema_);
    if (fit_samples.empty()) throw ValidationError("no labeled examples join the corpus in the calibration slice");
    auto fit = fit_calibration(fit_samples, schema_, config_.calibration_method);
    calibration_ = std::move(fit.model);

    const fs::path dir = out_ / "calibrate";
    write_text_file(dir / "model.json", calibration_.to_json());

    // Reliability diagnostic: a second model fit on one half of the slice and
    // evaluated on the other half, split per record.
    std::vector<CalibrationSample> half_fit, half_eval;
    const auto salt = mix_seed(config_.split_seed, stable_hash("reliability-half"));
    for (const auto& s : fit_samples) {
      (mix_seed(salt, stable_hash(s.record_id)) & 1u ? half_eval : half_fit).push_back(s);
    }
    std::string table = reliability_header;
    json curves = json::array();
    if (!half_fit.empty() && !half_eval.empty()) {
      const auto diagnostic = fit_calibration(half_fit, schema_, config_.calibration_method).model;
      std::map<std::string, std::vector<const CalibrationSample*>> by_attribute;
      for (const auto& s : half_eval) by_attribute[s.attribute].push_back(&s);
      for (const auto& a : schema_.attributes()) {
        const auto it = by_attribute.find(a.name);
        if (it == by_attribute.end() || !diagnostic.covers(a.name)) continue;
        std::vector<std::vector<double>> calibrated;
        for (const auto* s : it->second) calibrated.push_back(diagnostic.calibrate(a.name, s->scores));
        for (std::size_t c = 0; c < a.class_count(); ++c) {
          std::vector<double> raw, cal;
          std::vector<std::uint8_t> outcome;
          for (std::size_t i = 0; i < it->second.size(); ++i) {
            raw.push_back(it->second[i]->scores[c]);
            cal.push_back(calibrated[i][c]);
            outcome.push_back(it->second[i]->true_class == c ? 1 : 0);
          }
          const auto raw_curve = reliability(raw, outcome, config_.reliability_bins);
          const auto cal_curve = reliability(cal, outcome, config_.reliability_bins);
          table += format_reliability_rows(a.name, a.classes[c], "raw", raw_curve);
          table += format_reliability_rows(a.name, a.classes[c], "calibrated", cal_curve);
          curves.push_back({{"attribute", a.name},
                            {"class", a.classes[c]},
                            {"count", raw.size()},
                            {"raw_max_deviation", raw_curve.max_deviation()},
                            {"calibrated_max_deviation", cal_curve.max_deviation()}});
        }
      }
    }
    write_text_file(dir / "reliability.tsv", table);
    return json{{"method", to_string(config_.calibration_method)},
                {"fit_examples", fit_samples.size()},
                {"reliability_fit_examples", half_fit.size()},
                {"reliability_evaluation_examples", half_eval.size()},
                {"warnings", fit.warnings},
                {"reliability", std::move(curves)}};
  }

  json run_cluster() {
    ensure_records();
    if (dim_ == 0) throw ValidationError("corpus has no embeddings");
    subsample_ = balanced_subsample(bins_, config_.cap, config_.seed);
    if (subsample_.size() < 2) throw ValidationError("balanced subsample has fewer than two records");

    RowMatrix samples(static_cast<Eigen::Index>(subsample_.size()), static_cast<Eigen::Index>(dim_));
    parallel_for(subsample_.size(), threads_, [&](std::size_t i) {
      samples.row(static_cast<Eigen::Index>(i)) = normalize_embedding(records_[subsample_[i]].embedding).transpose();
    });
    PcaOptions pca_options;
    pca_options.retain = config_.retain;
    pca_options.solver = config_.solver;
    pca_options.seed = config_.seed;
    style_.basis = fit_pca(samples, pca_options);
    const RowMatrix projected = style_.basis.project_rows(samples);

    GmmOptions gmm_options;
    gmm_options.components = config_.k;
    gmm_options.seed = config_.seed;
    gmm_options.max_iterations = config_.max_iterations;
    gmm_options.relative_tolerance = config_.tolerance;
    gmm_options.variance_floor = config_.variance_floor;
    gmm_options.threads = threads_;
    auto fit = fit_gmm(projected, gmm_options);
    style_.gmm = std::move(fit.model);

    assignments_.resize(records_.size());
    parallel_for(records_.size(), threads_, [&](std::size_t i) { assignments_[i] = assign(records_[i], style_); });

    const fs::path dir = out_ / "embed-cluster";
    write_style_model(style_, dir / "style_model.bin");
    write_text_file(dir / "assignments.tsv", format_assignments(assignments_));
    std::string ids;
    for (auto i : subsample_) ids += records_[i].record_id + '\n';
    write_text_file(dir / "subsample.txt", ids);

    std::vector<std::size_t> sizes(config_.k, 0);
    for (const auto& a : assignments_) ++sizes[a.cluster_id];
    std::string exemplars = "cluster_id\trank\trecord_id\n";
    for (std::size_t k = 0; k < config_.k; ++k) {
      const auto top = cluster_exemplars(assignments_, k, config_.exemplars);
      for (std::size_t r = 0; r < top.size(); ++r) {
        exemplars += std::to_string(k) + '\t' + std::to_string(r + 1) + '\t' + top[r] + '\n';
      }
    }
    write_text_file(dir / "exemplars.tsv", exemplars);

    return json{{"subsample", subsample_.size()},
                {"input_dim", style_.basis.input_dim()},
                {"pca_dim", style_.basis.output_dim()},
                {"retained_fraction", style_.basis.retained_fraction},
                {"components", config_.k},
                {"iterations", fit.iterations},
                {"converged", fit.converged},
                {"reseeds", fit.reseeded_at.size()},
                {"mean_log_likelihood", fit.log_likelihood_trace.back()},
                {"cluster_sizes", sizes}};
  }

  void load_cluster() {
    const fs::path dir = out_ / "embed-cluster";
    style_ = read_style_model(dir / "style_model.bin");
    assignments_ = parse_assignments(read_text_file(dir / "assignments.tsv"), (dir / "assignments.tsv").string());
    subsample_ids_ = split(read_text_file(dir / "subsample.txt"), '\n');
    subsample_ids_.erase(std::remove(subsample_ids_.begin(), subsample_ids_.end(), std::string()),
                         subsample_ids_.end());
    cluster_loaded_ = true;
  }

  json run_analytics() {
    ensure_records();
    const fs::path dir = out_ / "analytics";
    make_dirs(dir / "trends");
    json trend_summaries = json::array();
    std::vector<std::string> warnings;

    std::optional<WeeklyValues> external;
    if (config_.external_series) {
      external = parse_external_series(read_text_file(*config_.external_series), config_.epoch,
                                       config_.external_series->filename().string());
    }

    std::vector<std::string> city_names;
    {
      std::map<std::string, std::size_t> present;
      for (const auto& b : bins_) {
        if (b.city) ++present[*b.city];
      }
      for (const auto& [c, n] : present) city_names.push_back(c);
    }

    for (const auto& target : trend_targets()) {
      if (!calibration_.covers(target.attribute, target.class_label)) {
        warnings.push_back("calibration does not cover " + target.attribute + "/" + target.class_label);
        continue;
      }
      const std::string stem = file_name_token(target.attribute) + "__" + file_name_token(target.class_label);
      const auto global = weekly_series(records_, bins_, target.attribute, target.class_label, calibration_, {},
                                        config_.min_n, threads_);
      write_text_file(dir / "trends" / (stem + ".tsv"), format_series(global));

      std::vector<CitySeries> per_city;
      std::string city_table = "city\tweek_index\tmean\tci_low\tci_high\tn\n";
      for (const auto& city : city_names) {
        RegionFilter filter;
        filter.city = city;
        TrendSeries s;
        try {
          s = weekly_series(records_, bins_, target.attribute, target.class_label, calibration_, filter, config_.min_n,
                            threads_);
        } catch (const ValidationError&) {
          continue;  // no scored records in this city
        }
        for (const auto& p : s.points) {
          city_table += city + '\t' + std::to_string(p.week_index) + '\t' + format_fixed(p.mean, 6) + '\t' +
                        format_fixed(p.ci_low, 6) + '\t' + format_fixed(p.ci_high, 6) + '\t' + std::to_string(p.n) + '\n';
        }
        if (!s.points.empty()) per_city.push_back({city, cities_.at(city).latitude, weekly_values(s)});
      }
      write_text_file(dir / "trends" / (stem + "__cities.tsv"), city_table);

      json entry{{"attribute", target.attribute}, {"class", target.class_label}, {"weeks", global.points.size()}};
      if (per_city.size() >= 2) {
        const auto matrix = city_correlation(per_city);
        write_text_file(dir / "trends" / (stem + "__correlation.tsv"), format_correlation(matrix));
        std::size_t missing = 0;
        for (const auto& row : matrix.r) missing += static_cast<std::size_t>(std::count(row.begin(), row.end(), std::nullopt));
        entry["correlation_cities"] = matrix.cities.size();
        entry["correlation_missing_cells"] = missing;
      }
      if (external) {
        const auto c = overlap_correlation(weekly_values(global), *external);
        entry["external_overlap_weeks"] = c.overlap;
        entry["external_correlation"] = c.r ? json(*c.r) : json(nullptr);
      }
      bool any_country = false;
      for (const auto& r : records_) any_country = any_country || r.country.has_value();
      if (any_country) {
        const auto agg = country_aggregate(records_, target.attribute, target.class_label, calibration_,
                                           config_.min_country_photos);
        write_text_file(dir / "trends" / (stem + "__countries.tsv"), format_country_aggregate(agg));
        entry["countries_included"] = agg.included.size();
        entry["countries_excluded"] = agg.excluded.size();
      }
      trend_summaries.push_back(std::move(entry));
    }

    json summary{{"trends", std::move(trend_summaries)}};
    if (!assignments_.empty()) summary["clusters"] = run_rankings(dir);
    summary["warnings"] = warnings;
    return summary;
  }

  json run_rankings(const fs::path& dir) {
    // Rankings use the balanced subsample so that city size does not read
    // as distinctiveness.
    std::vector<ClusterAssignment> sub_assign;
    std::vector<BinKey> sub_bins;
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < assignments_.size(); ++i) by_id.emplace(assignments_[i].record_id, i);
    const auto add = [&](const std::string& id) {
      const auto r = index_.find(id);
      const auto a = by_id.find(id);
      if (r == index_.end() || a == by_id.end()) throw ValidationError("subsample record '" + id + "' is unknown");
      sub_assign.push_back(assignments_[a->second]);
      sub_bins.push_back(bins_[r->second]);
    };
    if (cluster_loaded_) {
      for (const auto& id : subsample_ids_) add(id);
    } else {
      for (auto i : subsample_) add(records_[i].record_id);
    }

    const auto cities_rank =
        rank_clusters(sub_assign, sub_bins, RankMode::cities, RankOrder::ascending, config_.normalization);
    const auto month_rank =
        rank_clusters(sub_assign, sub_bins, RankMode::city_month, RankOrder::ascending, config_.normalization);
    write_text_file(dir / "ranking_cities.tsv", format_ranking(cities_rank));
    write_text_file(dir / "ranking_city_month.tsv", format_ranking(month_rank));

    std::set<std::string> present;
    for (const auto& b : sub_bins) {
      if (b.city) present.insert(*b.city);
    }
    std::string lift_table = "city\trank\tcluster_id\tlift\tcity_count\n";
    json top_by_city = json::object();
    for (const auto& city : present) {
      const auto lift = distinctiveness(sub_assign, sub_bins, city, style_.gmm.components(), config_.alpha);
      std::size_t rank = 1;
      for (const auto& e : lift.entries) {
        lift_table += city + '\t' + std::to_string(rank++) + '\t' + std::to_string(e.cluster_id) + '\t' +
                      format_fixed(e.score, 6) + '\t' + format_double(e.total) + '\n';
      }
      top_by_city[city] = lift.entries.front().cluster_id;
    }
    write_text_file(dir / "distinctiveness.tsv", lift_table);

    const auto ids = [](const ClusterRanking& r, std::size_t n) {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < std::min(n, r.entries.size()); ++i) out.push_back(r.entries[i].cluster_id);
      return out;
    };
    return json{{"ranked_records", sub_assign.size()},
                {"most_distinctive_cities", ids(cities_rank, 5)},
                {"most_distinctive_city_month", ids(month_rank, 5)},
                {"most_distinctive_by_city", std::move(top_by_city)}};
  }

  const PipelineConfig& config_;
  std::ostream* log_;
  fs::path out_;
  std::size_t threads_;
  AttributeSchema schema_;
  CityTable cities_;
  std::optional<CountryLookup> countries_;

  bool records_loaded_ = false;
  std::vector<PersonRecord> records_;
  std::vector<BinKey> bins_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<SkippedLine> skipped_;
  std::size_t dim_ = 0;

  std::vector<LabeledExample> labels_;
  CalibrationModel calibration_;
  StyleModel style_;
  std::vector<ClusterAssignment> assignments_;
  std::vector<std::size_t> subsample_;
  std::vector<std::string> subsample_ids_;
  bool cluster_loaded_ = false;

  std::vector<StageReport> stages_;
  json summaries_ = json::object();
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, std::ostream* log) {
  Pipeline pipeline(config, log);
  return pipeline.run();
}

}  // namespace stylescope
