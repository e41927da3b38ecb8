#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Outcome run(const oracle::TempDir& tmp, const std::string& args) {
  const auto out = tmp / "stdout.txt";
  const auto err = tmp / "stderr.txt";
  const std::string cmd = quote(STYLESCOPE_CLI) + " " + args + " >" + quote(out.string()) + " 2>" + quote(err.string());
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = oracle::slurp(out);
  o.err = oracle::slurp(err);
  return o;
}

std::string p(const fs::path& path) { return quote(path.string()); }

}  // namespace

TEST_CASE("help and usage errors") {
  oracle::TempDir tmp("cli-usage");
  auto o = run(tmp, "--help");
  CHECK(o.code == 0);
  CHECK(o.out.find("embed-cluster") != std::string::npos);

  o = run(tmp, "");
  CHECK(o.code == 1);
  CHECK(o.out.empty());
  CHECK_FALSE(o.err.empty());

  o = run(tmp, "ingest");
  CHECK(o.code == 1);
  CHECK(o.out.empty());
  CHECK(o.err.find("--corpus") != std::string::npos);

  o = run(tmp, "trends --corpus x --model y --attribute a --class b --min-n nope");
  CHECK(o.code == 1);
  CHECK(o.out.empty());

  o = run(tmp, "synth --out " + p(tmp / "s") + " --records 10 --threads 0");
  CHECK(o.code == 1);

  o = run(tmp, "run --set clustering.bogus=1");
  CHECK(o.code == 1);
  CHECK(o.err.find("bogus") != std::string::npos);
}

TEST_CASE("data errors exit with code 2 and name the file") {
  oracle::TempDir tmp("cli-data");
  const auto missing = tmp / "missing.ndjson";
  auto o = run(tmp, "ingest --corpus " + p(missing));
  CHECK(o.code == 2);
  CHECK(o.out.empty());
  CHECK(o.err.find(missing.string()) != std::string::npos);

  std::ofstream(tmp / "bad.ndjson") << "{not json\n";
  o = run(tmp, "ingest --corpus " + p(tmp / "bad.ndjson"));
  CHECK(o.code == 2);
  CHECK(o.err.find("bad.ndjson:1") != std::string::npos);

  o = run(tmp, "ingest --lenient --corpus " + p(tmp / "bad.ndjson"));
  CHECK(o.code == 0);
}

TEST_CASE("subcommands chain end to end") {
  oracle::TempDir tmp("cli-chain");
  const auto d = tmp / "data";
  auto o = run(tmp, "synth --out " + p(d) + " --records 1500 --dim 12 --labeled 600 --votes --seed 4");
  REQUIRE(o.code == 0);
  const auto corpus = p(d / "corpus.ndjson");
  const auto blob = p(d / "embeddings.bin");

  o = run(tmp, "ingest --corpus " + corpus + " --embeddings " + blob + " --out " + p(tmp / "bins.tsv"));
  CHECK(o.code == 0);
  CHECK(oracle::slurp(tmp / "bins.tsv").rfind("record_id\tcity\tweek_index", 0) == 0);

  o = run(tmp, "consense --votes " + p(d / "votes.tsv") + " --out " + p(tmp / "labels.tsv") + " --audit " +
                   p(tmp / "audit.json"));
  CHECK(o.code == 0);
  CHECK(oracle::slurp(tmp / "audit.json").find("w13") != std::string::npos);

  o = run(tmp, "calibrate --corpus " + corpus + " --labels " + p(tmp / "labels.tsv") + " --split all --out " +
                   p(tmp / "model.json"));
  CHECK(o.code == 0);
  o = run(tmp, "calibrate --corpus " + corpus + " --labels " + p(tmp / "labels.tsv") + " --method spline");
  CHECK(o.code == 1);

  o = run(tmp, "reliability --corpus " + corpus + " --labels " + p(tmp / "labels.tsv") + " --model " +
                   p(tmp / "model.json") + " --attribute wearing_hat --class Yes --bins 5");
  CHECK(o.code == 0);
  CHECK_FALSE(o.out.empty());

  o = run(tmp, "embed-cluster --corpus " + corpus + " --embeddings " + blob + " --k 4 --cap 100 --out " +
                   p(tmp / "style.bin") + " --assignments " + p(tmp / "assign.tsv"));
  CHECK(o.code == 0);
  o = run(tmp, "assign --corpus " + corpus + " --embeddings " + blob + " --model " + p(tmp / "style.bin") +
                   " --out " + p(tmp / "assign2.tsv"));
  CHECK(o.code == 0);
  CHECK(oracle::slurp(tmp / "assign.tsv") == oracle::slurp(tmp / "assign2.tsv"));

  o = run(tmp, "embed-cluster --corpus " + corpus + " --embeddings " + blob + " --k 5000 --out " + p(tmp / "x.bin"));
  CHECK(o.code == 2);
  CHECK(o.out.empty());

  o = run(tmp, "trends --corpus " + corpus + " --model " + p(tmp / "model.json") +
                   " --attribute wearing_hat --class Yes --min-n 5");
  CHECK(o.code == 0);
  CHECK(o.out.find("week_index\tmean") != std::string::npos);

  o = run(tmp, "correlate --corpus " + corpus + " --model " + p(tmp / "model.json") +
                   " --attribute wearing_hat --class Yes --min-n 2");
  CHECK(o.code == 0);

  o = run(tmp, "rank-clusters --corpus " + corpus + " --assignments " + p(tmp / "assign.tsv") + " --mode city-month");
  CHECK(o.code == 0);
  CHECK(o.out.find("entropy") != std::string::npos);
  o = run(tmp, "rank-clusters --corpus " + corpus + " --assignments " + p(tmp / "assign.tsv") + " --mode weekly");
  CHECK(o.code == 1);

  o = run(tmp, "distinctiveness --corpus " + corpus + " --assignments " + p(tmp / "assign.tsv") +
                   " --city Paris --top 2");
  CHECK(o.code == 0);
  CHECK(o.out.find("lift") != std::string::npos);
  o = run(tmp, "distinctiveness --corpus " + corpus + " --assignments " + p(tmp / "assign.tsv") + " --city Atlantis");
  CHECK(o.code == 2);

  std::ofstream(tmp / "run.conf") << "[paths]\ncorpus = data/corpus.ndjson\nembeddings = data/embeddings.bin\n"
                                     "votes = data/votes.tsv\noutput = out\n[clustering]\nk = 4\ncap = 100\n"
                                     "[analytics]\nmin_n = 5\n";
  o = run(tmp, "run --config " + p(tmp / "run.conf"));
  CHECK(o.code == 0);
  CHECK(fs::exists(tmp / "out" / "report.json"));
  o = run(tmp, "run --config " + p(tmp / "run.conf"));
  CHECK(o.code == 0);
  CHECK(o.out.find("stage ingest: cached") != std::string::npos);
  CHECK(o.out.find("stage analytics: cached") != std::string::npos);
  CHECK(o.err.empty());
}
