#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/kv_config.hpp"
#include "stylescope/core/schema.hpp"
#include "stylescope/pipeline/config.hpp"
#include "stylescope/pipeline/content_hash.hpp"
#include "stylescope/pipeline/pipeline.hpp"
#include "stylescope/pipeline/synthetic.hpp"

using namespace stylescope;
namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

SyntheticSpec small_spec(std::size_t records, bool votes) {
  SyntheticSpec spec;
  spec.records = records;
  spec.seed = 11;
  spec.dim = 16;
  spec.labeled = records / 3;
  spec.votes = votes;
  return spec;
}

PipelineConfig config_for(const SyntheticFiles& files, const fs::path& out, bool votes) {
  PipelineConfig c;
  c.corpus = files.corpus;
  c.embeddings = files.embeddings;
  if (votes) {
    c.votes = files.votes;
  } else {
    c.labels = files.labels;
  }
  c.output = out;
  c.k = 4;
  c.cap = 200;
  c.min_n = 5;
  c.min_country_photos = 10;
  return c;
}

std::map<std::string, StageStatus> statuses(const PipelineResult& r) {
  std::map<std::string, StageStatus> out;
  for (const auto& s : r.stages) out[s.name] = s.status;
  return out;
}

}  // namespace

TEST_CASE("config precedence is defaults, then file, then overrides") {
  oracle::TempDir tmp("pipeline-config");
  fs::create_directories(tmp / "conf");
  write_text(tmp / "conf" / "run.conf",
             "[paths]\ncorpus = data/c.ndjson\n[clustering]\nk = 12\ncap = 100\n[analytics]\nmin_n = 20\n");
  const auto c = load_pipeline_config(tmp / "conf" / "run.conf", {"clustering.k=3", "run.threads=2"});
  CHECK(c.k == 3);
  CHECK(c.cap == 100);
  CHECK(c.min_n == 20);
  CHECK(c.retain == doctest::Approx(0.90));
  CHECK(c.threads == std::optional<std::size_t>(2));
  CHECK(c.corpus == tmp / "conf" / "data" / "c.ndjson");

  const auto defaults = load_pipeline_config(std::nullopt);
  CHECK(defaults.k == 400);
  CHECK(defaults.cap == 4000);
  CHECK(defaults.min_n == 50);
  CHECK(defaults.epoch == 1370044800);

  // The canonical document reproduces the same configuration.
  PipelineConfig again;
  again.apply(c.to_document());
  CHECK(again.to_document().serialize() == c.to_document().serialize());
}

TEST_CASE("config rejects unknown keys and bad values") {
  PipelineConfig c;
  CHECK_THROWS_AS(c.apply_override("clustering.kk=3"), UsageError);
  CHECK_THROWS_AS(c.apply_override("nosuch.k=3"), UsageError);
  CHECK_THROWS_AS(c.apply_override("clustering.k=0"), UsageError);
  CHECK_THROWS_AS(c.apply_override("clustering.retain=1.5"), UsageError);
  CHECK_THROWS_AS(c.apply_override("clustering.k"), UsageError);
  CHECK_THROWS_AS(c.apply_override("calibration.method=spline"), UsageError);
  CHECK_THROWS_AS(c.apply_override("analytics.trends=wearing_hat"), UsageError);
  c.apply_override("analytics.trends=wearing_hat/Yes, major_color/2+ colors");
  CHECK(c.trends == std::vector<TrendTarget>{{"wearing_hat", "Yes"}, {"major_color", "2+ colors"}});
  c.apply_override("ingest.epoch=2014-01-01");
  CHECK(c.epoch == 1388534400);
  try {
    c.apply(KvDocument::parse("[clustering]\nk = 4\nbogus = 1\n", "my.conf"));
    FAIL("expected an error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("my.conf:3") != std::string::npos);
  }
}

TEST_CASE("synthetic corpus is deterministic and thread-independent") {
  const auto schema = AttributeSchema::default_schema();
  auto spec = small_spec(500, true);
  const auto a = generate_synthetic(spec, schema, 1);
  const auto b = generate_synthetic(spec, schema, 3);
  CHECK(a.records == b.records);
  CHECK(a.cluster == b.cluster);
  CHECK(a.votes == b.votes);

  oracle::TempDir tmp("pipeline-synth");
  const auto fa = write_synthetic(a, spec, schema, tmp / "a");
  const auto fb = write_synthetic(b, spec, schema, tmp / "b");
  for (const auto& name : {"corpus.ndjson", "embeddings.bin", "labels.tsv", "truth.tsv", "truth.json", "votes.tsv"}) {
    CHECK_MESSAGE(oracle::slurp(tmp / "a" / name) == oracle::slurp(tmp / "b" / name), name);
  }
  CHECK(fa.votes == tmp / "a" / "votes.tsv");

  spec.seed = 12;
  CHECK_FALSE(generate_synthetic(spec, schema).records == a.records);
}

TEST_CASE("synthetic cluster shares follow the planted weights") {
  const auto schema = AttributeSchema::default_schema();
  const auto doc = KvDocument::parse(
      "[synth]\nrecords = 10000\nseed = 3\ndim = 8\n"
      "[cluster.0]\nweight = 3\ncities = London: 1\n"
      "[cluster.1]\nweight = 1\n");
  const auto spec = load_synthetic_spec(doc);
  REQUIRE(spec.clusters.size() == 2);
  const auto corpus = generate_synthetic(spec, schema);
  REQUIRE(corpus.records.size() == 10000);
  std::size_t zero = 0;
  for (auto c : corpus.cluster) zero += c == 0 ? 1 : 0;
  CHECK(std::abs(static_cast<double>(zero) / 10000.0 - 0.75) < 0.01);

  oracle::TempDir tmp("pipeline-shares");
  const auto files = write_synthetic(corpus, spec, schema, tmp.path());
  const auto truth = nlohmann::json::parse(oracle::slurp(files.summary));
  CHECK(truth.at("clusters").at(0).at("observed_share").get<double>() ==
        doctest::Approx(static_cast<double>(zero) / 10000.0));
  CHECK(std::abs(truth.at("clusters").at(0).at("weight").get<double>() - 0.75) < 1e-12);
}

TEST_CASE("synthetic corpus with zero records is valid") {
  const auto schema = AttributeSchema::default_schema();
  auto spec = small_spec(0, false);
  const auto corpus = generate_synthetic(spec, schema);
  CHECK(corpus.records.empty());
  oracle::TempDir tmp("pipeline-empty");
  const auto files = write_synthetic(corpus, spec, schema, tmp.path());
  CHECK(oracle::slurp(files.corpus).empty());
  CHECK(fs::file_size(files.embeddings) == 8);
}

TEST_CASE("synthetic spec validation") {
  const auto schema = AttributeSchema::default_schema();
  auto spec = small_spec(10, false);
  spec.prevalence["wearing_hat"] = {0.5, 0.6};
  CHECK_THROWS_AS(validate_synthetic_spec(spec, schema), ValidationError);
  spec.prevalence.clear();
  spec.seasonal_amplitude["major_color"] = 0.1;
  CHECK_THROWS_AS(validate_synthetic_spec(spec, schema), ValidationError);
  spec.seasonal_amplitude.clear();
  spec.clusters = {{1.0, {0.5, 0.5}, {}}};
  CHECK_THROWS_AS(validate_synthetic_spec(spec, schema), ValidationError);
  CHECK_THROWS_AS(load_synthetic_spec(KvDocument::parse("[synth]\nrecords = many\n")), Error);
}

TEST_CASE("content hash is length-prefixed") {
  ContentHasher a, b;
  a.update("ab");
  a.update("c");
  b.update("a");
  b.update("bc");
  CHECK(a.hex() != b.hex());
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("pipeline runs, caches and reruns selectively") {
  const auto schema = AttributeSchema::default_schema();
  oracle::TempDir tmp("pipeline-run");
  const auto spec = small_spec(3000, true);
  const auto files = write_synthetic(generate_synthetic(spec, schema), spec, schema, tmp / "data");
  auto config = config_for(files, tmp / "out", true);

  std::ostringstream log;
  const auto first = run_pipeline(config, &log);
  for (const auto& [name, status] : statuses(first)) CHECK_MESSAGE(status == StageStatus::ran, name);
  CHECK(statuses(first).size() == 5);
  CHECK(fs::exists(first.report));
  CHECK(fs::exists(tmp / "out" / "embed-cluster" / "assignments.tsv"));
  CHECK(fs::exists(tmp / "out" / "analytics" / "ranking_cities.tsv"));
  const auto report = oracle::slurp(first.report);
  const auto json = nlohmann::json::parse(report);
  CHECK(json.at("format") == "stylescope-report");
  CHECK(report.find(tmp.path().string()) == std::string::npos);
  CHECK(json.at("stages").at("consensus").at("summary").at("banned_workers").dump().find("w13") != std::string::npos);

  const auto second = run_pipeline(config);
  for (const auto& [name, status] : statuses(second)) CHECK_MESSAGE(status == StageStatus::cached, name);
  CHECK(oracle::slurp(second.report) == report);

  config.k = 5;
  const auto third = run_pipeline(config);
  auto s = statuses(third);
  CHECK(s["ingest"] == StageStatus::cached);
  CHECK(s["consensus"] == StageStatus::cached);
  CHECK(s["calibrate"] == StageStatus::cached);
  CHECK(s["embed-cluster"] == StageStatus::ran);
  CHECK(s["analytics"] == StageStatus::ran);

  // Same inputs in a fresh directory give the same report bytes.
  config.k = 4;
  config.output = tmp / "out2";
  config.threads = 3;
  CHECK(oracle::slurp(run_pipeline(config).report) == report);
}

TEST_CASE("pipeline without votes skips consensus and without embeddings skips clustering") {
  const auto schema = AttributeSchema::default_schema();
  oracle::TempDir tmp("pipeline-skip");
  const auto spec = small_spec(1500, false);
  const auto files = write_synthetic(generate_synthetic(spec, schema), spec, schema, tmp / "data");
  auto config = config_for(files, tmp / "out", false);
  config.embeddings.reset();
  const auto s = statuses(run_pipeline(config));
  CHECK(s.at("consensus") == StageStatus::skipped);
  CHECK(s.at("embed-cluster") == StageStatus::skipped);
  CHECK(s.at("calibrate") == StageStatus::ran);
  CHECK(s.at("analytics") == StageStatus::ran);
}

TEST_CASE("pipeline errors name the path or the stage") {
  const auto schema = AttributeSchema::default_schema();
  oracle::TempDir tmp("pipeline-errors");
  const auto spec = small_spec(300, false);
  const auto files = write_synthetic(generate_synthetic(spec, schema), spec, schema, tmp / "data");

  auto config = config_for(files, tmp / "out", false);
  config.corpus = tmp / "nowhere" / "corpus.ndjson";
  try {
    run_pipeline(config);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find((tmp / "nowhere" / "corpus.ndjson").string()) != std::string::npos);
  }

  // A truncated blob fails in ingest; nothing downstream runs.
  const auto blob = oracle::slurp(files.embeddings);
  write_text(tmp / "short.bin", blob.substr(0, blob.size() - 4));
  config = config_for(files, tmp / "out", false);
  config.embeddings = tmp / "short.bin";
  try {
    run_pipeline(config);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stage ingest") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(tmp / "out" / ".stages" / "ingest.key"));

  // A label naming an unknown class fails in the label stage; ingest output stays.
  write_text(tmp / "bad_labels.tsv", "p0000001\twearing_hat\tMaybe\n");
  config = config_for(files, tmp / "out", false);
  config.labels = tmp / "bad_labels.tsv";
  try {
    run_pipeline(config);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stage ") != std::string::npos);
  }
  CHECK(fs::exists(tmp / "out" / "ingest" / "bins.tsv"));
  CHECK(fs::exists(tmp / "out" / ".stages" / "ingest.key"));

  config.labels.reset();
  CHECK_THROWS_AS(run_pipeline(config), UsageError);
}
