// stylescope: command-line front end for the trend and style-cluster pipeline.

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "stylescope/analytics/correlation.hpp"
#include "stylescope/analytics/ranking.hpp"
#include "stylescope/analytics/trends.hpp"
#include "stylescope/calibration/calibration.hpp"
#include "stylescope/calibration/reliability.hpp"
#include "stylescope/clustering/style_model.hpp"
#include "stylescope/consensus/consensus.hpp"
#include "stylescope/consensus/votes_io.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/parallel.hpp"
#include "stylescope/core/text.hpp"
#include "stylescope/ingestion/corpus_io.hpp"
#include "stylescope/ingestion/country_lookup.hpp"
#include "stylescope/ingestion/sampling.hpp"
#include "stylescope/pipeline/pipeline.hpp"
#include "stylescope/pipeline/synthetic.hpp"
#include "stylescope/pipeline/tables.hpp"

namespace fs = std::filesystem;
using namespace stylescope;

namespace {

// Options shared by every subcommand that reads a corpus.
struct Common {
  std::string schema;
  std::string cities;
  std::string countries;
  std::string epoch;
  std::optional<std::size_t> threads;
  bool lenient = false;

  void attach(CLI::App* app) {
    app->add_option("--schema", schema, "attribute schema config (default: built-in)");
    app->add_option("--cities", cities, "city table config (default: built-in 44 cities)");
    app->add_option("--countries", countries, "country region config used to fill missing country codes");
    app->add_option("--epoch", epoch, "week/month origin, unix seconds or YYYY-MM-DD (default 2013-06-01)");
    app->add_option("--threads", threads, "worker threads (default: $STYLESCOPE_THREADS or 1)")->check(CLI::PositiveNumber);
    app->add_flag("--lenient", lenient, "skip malformed corpus lines instead of failing");
  }

  AttributeSchema load_schema() const {
    return schema.empty() ? AttributeSchema::default_schema() : load_schema_file(schema);
  }
  CityTable load_cities() const { return cities.empty() ? CityTable::default_table() : load_city_table_file(cities); }
  std::int64_t load_epoch() const {
    if (epoch.empty()) return default_epoch;
    return epoch.find('-', 1) != std::string::npos ? parse_iso8601(epoch) : parse_int(epoch, "--epoch");
  }
  std::size_t thread_count() const { return resolve_threads(threads); }
};

struct Corpus {
  std::vector<PersonRecord> records;
  std::vector<BinKey> bins;
};

Corpus load_corpus(const Common& common, const std::string& metadata, const std::string& embeddings = {}) {
  const auto schema = common.load_schema();
  const auto cities = common.load_cities();
  const auto epoch = common.load_epoch();
  std::optional<CountryLookup> countries;
  if (!common.countries.empty()) countries = CountryLookup::load_file(common.countries);

  CorpusReadOptions options;
  options.lenient = common.lenient;
  CorpusReader reader(metadata, embeddings.empty() ? std::nullopt : std::optional<fs::path>(embeddings), schema, options);
  Corpus c;
  while (auto r = reader.next()) {
    if (countries) countries->fill(*r);
    c.records.push_back(std::move(*r));
  }
  for (const auto& s : reader.skipped()) std::cerr << metadata << ":" << s.line << ": skipped: " << s.reason << '\n';
  c.bins.resize(c.records.size());
  parallel_for(c.records.size(), common.thread_count(),
               [&](std::size_t i) { c.bins[i] = assign_bins(c.records[i], cities, epoch); });
  return c;
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") std::cout << content;
  else write_text_file(path, content);
}

// Aligns assignments with corpus bins by record id; optionally keeps only a
// balanced (city, week) subsample.
struct AlignedAssignments {
  std::vector<ClusterAssignment> assignments;
  std::vector<BinKey> bins;
};

AlignedAssignments align(const Corpus& corpus, const std::string& assignments_path, bool balance, std::size_t cap,
                         std::uint64_t seed) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.records.size(); ++i) index.emplace(corpus.records[i].record_id, i);
  AlignedAssignments all;
  for (auto& a : parse_assignments(read_text_file(assignments_path), assignments_path)) {
    const auto it = index.find(a.record_id);
    if (it == index.end()) throw ValidationError("assignment for unknown record '" + a.record_id + "'");
    all.bins.push_back(corpus.bins[it->second]);
    all.assignments.push_back(std::move(a));
  }
  if (!balance) return all;
  AlignedAssignments kept;
  for (auto i : balanced_subsample(all.bins, cap, seed)) {
    kept.assignments.push_back(all.assignments[i]);
    kept.bins.push_back(all.bins[i]);
  }
  return kept;
}

std::size_t class_index_of(const CalibrationModel& model, const std::string& attribute, const std::string& label) {
  if (!model.covers(attribute, label)) {
    throw ValidationError("calibration model does not cover " + attribute + "/" + label);
  }
  const auto& classes = model.attribute(attribute).classes;
  return static_cast<std::size_t>(std::find(classes.begin(), classes.end(), label) - classes.begin());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calibrated clothing-attribute trends and style clusters from per-person scores and embeddings"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  // ingest -------------------------------------------------------------------
  Common ingest_common;
  std::string ingest_corpus, ingest_embeddings, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "validate a corpus and write its (city, week, month) bins");
  ingest->add_option("--corpus", ingest_corpus, "metadata NDJSON")->required();
  ingest->add_option("--embeddings", ingest_embeddings, "embedding blob");
  ingest->add_option("--out", ingest_out, "bins table (default: stdout)");
  ingest_common.attach(ingest);
  ingest->callback([&] {
    const auto c = load_corpus(ingest_common, ingest_corpus, ingest_embeddings);
    emit(ingest_out, format_bins(c.records, c.bins));
    std::size_t with_city = 0;
    for (const auto& b : c.bins) with_city += b.city ? 1 : 0;
    std::cerr << "records " << c.records.size() << ", in a city " << with_city << '\n';
  });

  // consense -----------------------------------------------------------------
  std::string votes_path, labels_out, audit_out, consense_schema;
  ConsensusPolicy consensus;
  GatePolicy gate;
  auto* consense = app.add_subcommand("consense", "turn crowd votes into labels with sentinel gating");
  consense->add_option("--votes", votes_path, "votes TSV")->required();
  consense->add_option("--out", labels_out, "labels TSV (default: stdout)");
  consense->add_option("--audit", audit_out, "audit report JSON");
  consense->add_option("--schema", consense_schema, "attribute schema config");
  consense->add_option("--quorum", consensus.quorum, "votes considered per item")->capture_default_str();
  consense->add_option("--threshold", consensus.threshold, "agreeing votes needed")->capture_default_str();
  consense->add_option("--min-failures", gate.min_failures, "failed sentinels before a ban is possible")
      ->capture_default_str();
  consense->add_option("--max-failure-rate", gate.max_failure_rate, "ban when the failure rate exceeds this")
      ->capture_default_str();
  consense->callback([&] {
    const auto schema = consense_schema.empty() ? AttributeSchema::default_schema() : load_schema_file(consense_schema);
    const auto votes = read_votes(votes_path);
    validate_votes(votes, schema);
    const auto dataset = build_dataset(votes, consensus, gate);
    emit(labels_out, format_labels(dataset.examples));
    if (!audit_out.empty()) write_text_file(audit_out, dataset.audit.to_json());
    std::cerr << "labels " << dataset.examples.size() << ", banned workers " << dataset.audit.banned_workers().size()
              << '\n';
  });

  // calibrate ----------------------------------------------------------------
  Common cal_common;
  std::string cal_corpus, cal_labels, cal_out, cal_method = "isotonic", cal_split = "validation";
  std::uint64_t cal_split_seed = 0;
  auto* calibrate = app.add_subcommand("calibrate", "fit per-class monotone score calibration");
  calibrate->add_option("--corpus", cal_corpus, "metadata NDJSON")->required();
  calibrate->add_option("--labels", cal_labels, "labels TSV")->required();
  calibrate->add_option("--method", cal_method, "isotonic or platt")->capture_default_str();
  calibrate->add_option("--split", cal_split, "labels to fit on: validation or all")->capture_default_str();
  calibrate->add_option("--split-seed", cal_split_seed, "seed of the train/validation/test split");
  calibrate->add_option("--out", cal_out, "model JSON (default: stdout)");
  cal_common.attach(calibrate);
  calibrate->callback([&] {
    if (cal_split != "validation" && cal_split != "all") throw UsageError("--split must be validation or all");
    const auto schema = cal_common.load_schema();
    const auto corpus = load_corpus(cal_common, cal_corpus);
    std::vector<LabeledExample> examples;
    for (auto& e : read_labels(cal_labels)) {
      if (cal_split == "all" || split_of(e.record_id, cal_split_seed) == DataSplit::validation) {
        examples.push_back(std::move(e));
      }
    }
    const auto samples = join_labels(examples, corpus.records, schema);
    if (samples.empty()) throw ValidationError("no labeled examples join the corpus");
    const auto fit = fit_calibration(samples, schema, parse_calibration_method(cal_method));
    for (const auto& w : fit.warnings) std::cerr << "warning: " << w << '\n';
    emit(cal_out, fit.model.to_json());
  });

  // reliability ---------------------------------------------------------------
  Common rel_common;
  std::string rel_corpus, rel_labels, rel_model, rel_attribute, rel_class, rel_out;
  std::size_t rel_bins = 10;
  auto* rel = app.add_subcommand("reliability", "reliability curve of raw and calibrated scores for one class");
  rel->add_option("--corpus", rel_corpus, "metadata NDJSON")->required();
  rel->add_option("--labels", rel_labels, "labels TSV")->required();
  rel->add_option("--model", rel_model, "calibration model JSON")->required();
  rel->add_option("--attribute", rel_attribute)->required();
  rel->add_option("--class", rel_class)->required();
  rel->add_option("--bins", rel_bins)->capture_default_str()->check(CLI::PositiveNumber);
  rel->add_option("--out", rel_out, "table (default: stdout)");
  rel_common.attach(rel);
  rel->callback([&] {
    const auto schema = rel_common.load_schema();
    const auto model = CalibrationModel::from_json(read_text_file(rel_model));
    const auto c = class_index_of(model, rel_attribute, rel_class);
    const auto corpus = load_corpus(rel_common, rel_corpus);
    std::vector<LabeledExample> examples;
    for (auto& e : read_labels(rel_labels)) {
      if (e.attribute == rel_attribute) examples.push_back(std::move(e));
    }
    const auto samples = join_labels(examples, corpus.records, schema);
    if (samples.empty()) throw ValidationError("no labeled examples of " + rel_attribute + " join the corpus");
    std::vector<double> raw, cal;
    std::vector<std::uint8_t> outcome;
    for (const auto& s : samples) {
      raw.push_back(s.scores[c]);
      cal.push_back(model.calibrate(rel_attribute, s.scores)[c]);
      outcome.push_back(s.true_class == c ? 1 : 0);
    }
    emit(rel_out, std::string(reliability_header) +
                      format_reliability_rows(rel_attribute, rel_class, "raw", reliability(raw, outcome, rel_bins)) +
                      format_reliability_rows(rel_attribute, rel_class, "calibrated", reliability(cal, outcome, rel_bins)));
  });

  // embed-cluster --------------------------------------------------------------
  Common ec_common;
  std::string ec_corpus, ec_embeddings, ec_out, ec_assignments, ec_solver = "exact";
  PcaOptions pca;
  GmmOptions gmm;
  std::size_t ec_cap = default_bin_cap;
  std::uint64_t ec_seed = 0;
  auto* ec = app.add_subcommand("embed-cluster", "fit the PCA basis and style mixture on a balanced subsample");
  ec->add_option("--corpus", ec_corpus, "metadata NDJSON")->required();
  ec->add_option("--embeddings", ec_embeddings, "embedding blob")->required();
  ec->add_option("--retain", pca.retain, "variance fraction kept by PCA")->capture_default_str();
  ec->add_option("--k", gmm.components, "mixture components")->capture_default_str();
  ec->add_option("--cap", ec_cap, "records per (city, week) bin")->capture_default_str();
  ec->add_option("--seed", ec_seed)->capture_default_str();
  ec->add_option("--max-iter", gmm.max_iterations)->capture_default_str();
  ec->add_option("--tol", gmm.relative_tolerance, "relative log-likelihood tolerance")->capture_default_str();
  ec->add_option("--solver", ec_solver, "exact or randomized")->capture_default_str();
  ec->add_option("--out", ec_out, "style model file")->required();
  ec->add_option("--assignments", ec_assignments, "also assign every record and write the table here");
  ec_common.attach(ec);
  ec->callback([&] {
    if (ec_solver != "exact" && ec_solver != "randomized") throw UsageError("--solver must be exact or randomized");
    if (!(pca.retain > 0.0 && pca.retain <= 1.0)) throw UsageError("--retain must be in (0, 1]");
    const auto threads = ec_common.thread_count();
    const auto corpus = load_corpus(ec_common, ec_corpus, ec_embeddings);
    const auto sub = balanced_subsample(corpus.bins, ec_cap, ec_seed);
    if (sub.size() < 2) throw ValidationError("balanced subsample has fewer than two records");
    const auto dim = corpus.records[sub.front()].embedding.size();
    RowMatrix samples(static_cast<Eigen::Index>(sub.size()), static_cast<Eigen::Index>(dim));
    parallel_for(sub.size(), threads, [&](std::size_t i) {
      samples.row(static_cast<Eigen::Index>(i)) = normalize_embedding(corpus.records[sub[i]].embedding).transpose();
    });
    pca.solver = ec_solver == "exact" ? PcaSolver::exact : PcaSolver::randomized;
    pca.seed = ec_seed;
    StyleModel model;
    model.basis = fit_pca(samples, pca);
    gmm.seed = ec_seed;
    gmm.threads = threads;
    const auto fit = fit_gmm(model.basis.project_rows(samples), gmm);
    model.gmm = fit.model;
    write_style_model(model, ec_out);
    std::cerr << "subsample " << sub.size() << ", pca dim " << model.basis.output_dim() << ", iterations "
              << fit.iterations << (fit.converged ? " (converged)" : " (iteration cap)") << '\n';
    if (!ec_assignments.empty()) {
      std::vector<ClusterAssignment> out(corpus.records.size());
      parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = assign(corpus.records[i], model); });
      write_text_file(ec_assignments, format_assignments(out));
    }
  });

  // assign ---------------------------------------------------------------------
  Common as_common;
  std::string as_corpus, as_embeddings, as_model, as_out;
  auto* as = app.add_subcommand("assign", "assign records to style clusters under a fitted model");
  as->add_option("--corpus", as_corpus, "metadata NDJSON")->required();
  as->add_option("--embeddings", as_embeddings, "embedding blob")->required();
  as->add_option("--model", as_model, "style model file")->required();
  as->add_option("--out", as_out, "assignments table (default: stdout)");
  as_common.attach(as);
  as->callback([&] {
    const auto model = read_style_model(as_model);
    const auto corpus = load_corpus(as_common, as_corpus, as_embeddings);
    std::vector<ClusterAssignment> out(corpus.records.size());
    parallel_for(out.size(), as_common.thread_count(), [&](std::size_t i) { out[i] = assign(corpus.records[i], model); });
    emit(as_out, format_assignments(out));
  });

  // trends ---------------------------------------------------------------------
  Common tr_common;
  std::string tr_corpus, tr_model, tr_attribute, tr_class, tr_city, tr_country, tr_out;
  std::size_t tr_min_n = default_min_bin_count;
  auto* tr = app.add_subcommand("trends", "weekly calibrated prevalence with 95% intervals");
  tr->add_option("--corpus", tr_corpus, "metadata NDJSON")->required();
  tr->add_option("--model", tr_model, "calibration model JSON")->required();
  tr->add_option("--attribute", tr_attribute)->required();
  tr->add_option("--class", tr_class)->required();
  tr->add_option("--city", tr_city, "restrict to one city");
  tr->add_option("--country", tr_country, "restrict to one country code");
  tr->add_option("--min-n", tr_min_n, "weeks with fewer records are dropped")->capture_default_str();
  tr->add_option("--out", tr_out, "series table (default: stdout)");
  tr_common.attach(tr);
  tr->callback([&] {
    const auto model = CalibrationModel::from_json(read_text_file(tr_model));
    const auto corpus = load_corpus(tr_common, tr_corpus);
    RegionFilter filter;
    if (!tr_city.empty()) filter.city = tr_city;
    if (!tr_country.empty()) filter.country = tr_country;
    emit(tr_out, format_series(weekly_series(corpus.records, corpus.bins, tr_attribute, tr_class, model, filter,
                                             tr_min_n, tr_common.thread_count())));
  });

  // correlate ------------------------------------------------------------------
  Common co_common;
  std::string co_corpus, co_model, co_attribute, co_class, co_external, co_out;
  std::vector<std::string> co_cities;
  std::size_t co_min_n = default_min_bin_count;
  auto* co = app.add_subcommand("correlate", "city-by-city correlation of weekly series, north to south");
  co->add_option("--corpus", co_corpus, "metadata NDJSON")->required();
  co->add_option("--model", co_model, "calibration model JSON")->required();
  co->add_option("--attribute", co_attribute)->required();
  co->add_option("--class", co_class)->required();
  co->add_option("--city", co_cities, "cities to include (default: all present)");
  co->add_option("--external", co_external, "external (week, value) series to correlate with the global series");
  co->add_option("--min-n", co_min_n)->capture_default_str();
  co->add_option("--out", co_out, "matrix table (default: stdout)");
  co_common.attach(co);
  co->callback([&] {
    const auto model = CalibrationModel::from_json(read_text_file(co_model));
    const auto table = co_common.load_cities();
    const auto corpus = load_corpus(co_common, co_corpus);
    const auto threads = co_common.thread_count();
    if (!co_external.empty()) {
      const auto external = parse_external_series(read_text_file(co_external), co_common.load_epoch(), co_external);
      const auto global = weekly_series(corpus.records, corpus.bins, co_attribute, co_class, model, {}, co_min_n, threads);
      const auto c = overlap_correlation(weekly_values(global), external);
      std::string out = "series\toverlap_weeks\tpearson_r\nexternal\t" + std::to_string(c.overlap) + '\t' +
                        (c.r ? format_fixed(*c.r, 6) : std::string("NA")) + '\n';
      emit(co_out, out);
      return;
    }
    if (co_cities.empty()) {
      std::map<std::string, int> present;
      for (const auto& b : corpus.bins) {
        if (b.city) present[*b.city] = 1;
      }
      for (const auto& [c, unused] : present) co_cities.push_back(c);
    }
    std::vector<CitySeries> series;
    for (const auto& city : co_cities) {
      RegionFilter filter;
      filter.city = city;
      const auto s = weekly_series(corpus.records, corpus.bins, co_attribute, co_class, model, filter, co_min_n, threads);
      series.push_back({city, table.at(city).latitude, weekly_values(s)});
    }
    emit(co_out, format_correlation(city_correlation(series)));
  });

  // rank-clusters / distinctiveness ----------------------------------------------
  Common rk_common;
  std::string rk_corpus, rk_assignments, rk_mode = "cities", rk_order = "asc", rk_norm = "raw", rk_out;
  std::size_t rk_cap = default_bin_cap;
  std::uint64_t rk_seed = 0;
  bool rk_no_balance = false;
  auto* rk = app.add_subcommand("rank-clusters", "order style clusters by entropy over cities or city-months");
  rk->add_option("--corpus", rk_corpus, "metadata NDJSON")->required();
  rk->add_option("--assignments", rk_assignments, "assignments table")->required();
  rk->add_option("--mode", rk_mode, "cities or city-month")->capture_default_str();
  rk->add_option("--order", rk_order, "asc (distinctive first) or desc (universal first)")->capture_default_str();
  rk->add_option("--normalization", rk_norm, "raw or per-city")->capture_default_str();
  rk->add_option("--cap", rk_cap, "balanced subsample cap per (city, week)")->capture_default_str();
  rk->add_option("--seed", rk_seed, "balanced subsample seed")->capture_default_str();
  rk->add_flag("--no-balance", rk_no_balance, "rank on every assignment instead of the balanced subsample");
  rk->add_option("--out", rk_out, "ranking table (default: stdout)");
  rk_common.attach(rk);
  rk->callback([&] {
    const auto mode = parse_rank_mode(rk_mode);
    const auto order = parse_rank_order(rk_order);
    const auto norm = parse_count_normalization(rk_norm);
    const auto corpus = load_corpus(rk_common, rk_corpus);
    const auto aligned = align(corpus, rk_assignments, !rk_no_balance, rk_cap, rk_seed);
    emit(rk_out, format_ranking(rank_clusters(aligned.assignments, aligned.bins, mode, order, norm)));
  });

  Common di_common;
  std::string di_corpus, di_assignments, di_city, di_out;
  std::size_t di_k = 0, di_cap = default_bin_cap, di_top = 0;
  std::uint64_t di_seed = 0;
  double di_alpha = default_lift_smoothing;
  bool di_no_balance = false;
  auto* di = app.add_subcommand("distinctiveness", "clusters over-represented in one city relative to all cities");
  di->add_option("--corpus", di_corpus, "metadata NDJSON")->required();
  di->add_option("--assignments", di_assignments, "assignments table")->required();
  di->add_option("--city", di_city)->required();
  di->add_option("--k", di_k, "number of clusters (default: largest id + 1)");
  di->add_option("--alpha", di_alpha, "additive smoothing")->capture_default_str();
  di->add_option("--top", di_top, "rows to print (default: all)");
  di->add_option("--cap", di_cap)->capture_default_str();
  di->add_option("--seed", di_seed)->capture_default_str();
  di->add_flag("--no-balance", di_no_balance);
  di->add_option("--out", di_out, "ranking table (default: stdout)");
  di_common.attach(di);
  di->callback([&] {
    const auto corpus = load_corpus(di_common, di_corpus);
    const auto aligned = align(corpus, di_assignments, !di_no_balance, di_cap, di_seed);
    auto ranking = distinctiveness(aligned.assignments, aligned.bins, di_city, di_k, di_alpha);
    if (di_top > 0 && ranking.entries.size() > di_top) ranking.entries.resize(di_top);
    emit(di_out, format_ranking(ranking));
  });

  // synth ----------------------------------------------------------------------
  std::string sy_config, sy_out, sy_schema;
  std::optional<std::size_t> sy_records, sy_dim, sy_labeled, sy_threads;
  std::optional<std::uint64_t> sy_seed;
  bool sy_votes = false;
  auto* sy = app.add_subcommand("synth", "generate a synthetic corpus with planted clusters and a truth sidecar");
  sy->add_option("--config", sy_config, "synthetic spec config");
  sy->add_option("--out", sy_out, "output directory")->required();
  sy->add_option("--records", sy_records);
  sy->add_option("--seed", sy_seed);
  sy->add_option("--dim", sy_dim);
  sy->add_option("--labeled", sy_labeled, "records that get sidecar labels");
  sy->add_flag("--votes", sy_votes, "also simulate crowd votes for the labeled records");
  sy->add_option("--schema", sy_schema);
  sy->add_option("--threads", sy_threads)->check(CLI::PositiveNumber);
  sy->callback([&] {
    SyntheticSpec spec = sy_config.empty() ? SyntheticSpec{} : load_synthetic_spec(KvDocument::load(sy_config));
    if (sy_records) spec.records = *sy_records;
    if (sy_seed) spec.seed = *sy_seed;
    if (sy_dim) spec.dim = *sy_dim;
    if (sy_labeled) spec.labeled = *sy_labeled;
    if (sy_votes) spec.votes = true;
    const auto schema = sy_schema.empty() ? AttributeSchema::default_schema() : load_schema_file(sy_schema);
    const auto corpus = generate_synthetic(spec, schema, resolve_threads(sy_threads));
    const auto files = write_synthetic(corpus, spec, schema, sy_out);
    std::cout << "records " << corpus.records.size() << " -> " << files.corpus.string() << '\n';
  });

  // run ------------------------------------------------------------------------
  std::string run_config, run_output;
  std::vector<std::string> run_overrides;
  std::optional<std::size_t> run_threads;
  auto* run = app.add_subcommand("run", "run every stage, reusing cached stage outputs");
  run->add_option("--config", run_config, "pipeline config");
  run->add_option("--set", run_overrides, "override a key: section.key=value (repeatable)");
  run->add_option("--output", run_output, "output directory (overrides paths.output)");
  run->add_option("--threads", run_threads)->check(CLI::PositiveNumber);
  run->callback([&] {
    auto config = load_pipeline_config(run_config.empty() ? std::nullopt : std::optional<fs::path>(run_config),
                                       run_overrides);
    if (!run_output.empty()) config.output = run_output;
    if (run_threads) config.threads = run_threads;
    const auto result = run_pipeline(config, &std::cout);
    std::cout << "report " << result.report.string() << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help

    std::cerr << "stylescope: " << e.what() << '\n';
    return static_cast<int>(ExitCode::usage);
  } catch (const Error& e) {
    std::cerr << "stylescope: error: " << e.what() << '\n';
    return static_cast<int>(e.exit_code());
  } catch (const std::bad_alloc&) {
    std::cerr << "stylescope: error: out of memory\n";
    return static_cast<int>(ExitCode::numeric);
  } catch (const std::exception& e) {
    std::cerr << "stylescope: error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::validation);
  }
  return 0;
}
