#include "stylescope/pipeline/config.hpp"

#include <cmath>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"
#include "stylescope/ingestion/binning.hpp"

namespace stylescope {

TrendTarget parse_trend_target(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw UsageError("trend target must be attribute/class: '" + std::string(text) + "'");
  TrendTarget t{std::string(trim(text.substr(0, slash))), std::string(trim(text.substr(slash + 1)))};
  if (t.attribute.empty() || t.class_label.empty()) {
    throw UsageError("trend target must be attribute/class: '" + std::string(text) + "'");
  }
  return t;
}

namespace {

std::string full_key(std::string_view section, std::string_view key) {
  return std::string(section) + "." + std::string(key);
}

// Value parsers that report problems as usage errors naming the key.
struct Reader {
  std::string name;
  std::string_view value;

  template <class F>
  auto wrap(F&& f) const {
    try {
      return f();
    } catch (const ValidationError& e) {
      throw UsageError(name + ": " + e.what());
    }
  }
  double real(double lo, double hi, bool lo_open = false) const {
    const double v = wrap([&] { return parse_double(value, name); });
    if (!std::isfinite(v) || v > hi || v < lo || (lo_open && v == lo)) {
      throw UsageError(name + " = " + std::string(value) + " is out of range");
    }
    return v;
  }
  std::size_t count(std::size_t lo) const {
    const auto v = wrap([&] { return parse_uint(value, name); });
    if (v < lo) throw UsageError(name + " must be at least " + std::to_string(lo));
    return static_cast<std::size_t>(v);
  }
  std::uint64_t u64() const {
    return wrap([&] { return parse_uint(value, name); });
  }
  bool boolean() const {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw UsageError(name + " must be true or false");
  }
  std::filesystem::path path(const std::filesystem::path& base) const {
    if (value.empty()) throw UsageError(name + " is empty");
    std::filesystem::path p{std::string(value)};
    return p.is_absolute() || base.empty() ? p : base / p;
  }
};

}  // namespace

void PipelineConfig::set(std::string_view section, std::string_view key, std::string_view value,
                         const std::filesystem::path& base_dir) {
  const Reader r{full_key(section, key), value};
  const auto& name = r.name;

  if (section == "paths") {
    if (key == "corpus") corpus = r.path(base_dir);
    else if (key == "embeddings") embeddings = r.path(base_dir);
    else if (key == "labels") labels = r.path(base_dir);
    else if (key == "votes") votes = r.path(base_dir);
    else if (key == "schema") schema = r.path(base_dir);
    else if (key == "cities") cities = r.path(base_dir);
    else if (key == "countries") countries = r.path(base_dir);
    else if (key == "external_series") external_series = r.path(base_dir);
    else if (key == "output") output = r.path(base_dir);
    else throw UsageError("unknown config key '" + name + "'");
  } else if (section == "run") {
    if (key == "threads") threads = r.count(1);
    else throw UsageError("unknown config key '" + name + "'");
  } else if (section == "ingest") {
    if (key == "epoch") {
      epoch = r.wrap([&] {
        return value.find('-', 1) != std::string_view::npos ? parse_iso8601(value) : parse_int(value, name);
      });
    } else if (key == "lenient") {
      lenient = r.boolean();
    } else {
      throw UsageError("unknown config key '" + name + "'");
    }
  } else if (section == "consensus") {
    if (key == "quorum") consensus.quorum = r.count(1);
    else if (key == "threshold") consensus.threshold = r.count(1);
    else if (key == "min_failures") gate.min_failures = r.count(0);
    else if (key == "max_failure_rate") gate.max_failure_rate = r.real(0.0, 1.0);
    else throw UsageError("unknown config key '" + name + "'");
  } else if (section == "calibration") {
    if (key == "method") {
      calibration_method = parse_calibration_method(value);
    } else if (key == "split_seed") {
      split_seed = r.u64();
    } else if (key == "fit_split") {
      if (value == "validation") fit_on_all_labels = false;
      else if (value == "all") fit_on_all_labels = true;
      else throw UsageError(name + " must be validation or all");
    } else if (key == "reliability_bins") {
      reliability_bins = r.count(1);
    } else {
      throw UsageError("unknown config key '" + name + "'");
    }
  } else if (section == "clustering") {
    if (key == "retain") retain = r.real(0.0, 1.0, true);
    else if (key == "k") k = r.count(1);
    else if (key == "cap") cap = r.count(1);
    else if (key == "seed") seed = r.u64();
    else if (key == "max_iterations") max_iterations = r.count(1);
    else if (key == "tolerance") tolerance = r.real(0.0, 1.0, true);
    else if (key == "variance_floor") variance_floor = r.real(0.0, 1.0, true);
    else if (key == "exemplars") exemplars = r.count(0);
    else if (key == "solver") {
      if (value == "exact") solver = PcaSolver::exact;
      else if (value == "randomized") solver = PcaSolver::randomized;
      else throw UsageError(name + " must be exact or randomized");
    } else {
      throw UsageError("unknown config key '" + name + "'");
    }
  } else if (section == "analytics") {
    if (key == "min_n") min_n = r.count(1);
    else if (key == "alpha") alpha = r.real(0.0, 1e9, true);
    else if (key == "min_country_photos") min_country_photos = r.count(1);
    else if (key == "normalization") normalization = parse_count_normalization(value);
    else if (key == "trends") {
      trends.clear();
      for (const auto& item : split_trimmed(value, ',')) {
        if (!item.empty()) trends.push_back(parse_trend_target(item));
      }
    } else {
      throw UsageError("unknown config key '" + name + "'");
    }
  } else {
    throw UsageError("unknown config section '" + std::string(section) + "'");
  }
}

void PipelineConfig::apply(const KvDocument& document, const std::filesystem::path& base_dir) {
  for (const auto& e : document.entries()) {
    try {
      set(e.section, e.key, e.value, base_dir);
    } catch (const UsageError& err) {
      throw UsageError(document.source() + ":" + std::to_string(e.line) + ": " + err.what());
    }
  }
}

void PipelineConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw UsageError("override must look like section.key=value: '" + std::string(assignment) + "'");
  }
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      trim(assignment.substr(eq + 1)));
}

KvDocument PipelineConfig::to_document(bool include_paths) const {
  KvDocument d;
  if (include_paths) {
    const auto opt = [&](const char* key, const std::optional<std::filesystem::path>& p) {
      if (p) d.add("paths", key, p->string());
    };
    d.add("paths", "corpus", corpus.string());
    opt("embeddings", embeddings);
    opt("labels", labels);
    opt("votes", votes);
    opt("schema", schema);
    opt("cities", cities);
    opt("countries", countries);
    opt("external_series", external_series);
    d.add("paths", "output", output.string());
  }
  d.add("ingest", "epoch", std::to_string(epoch));
  d.add("ingest", "lenient", lenient ? "true" : "false");
  d.add("consensus", "quorum", std::to_string(consensus.quorum));
  d.add("consensus", "threshold", std::to_string(consensus.threshold));
  d.add("consensus", "min_failures", std::to_string(gate.min_failures));
  d.add("consensus", "max_failure_rate", format_double(gate.max_failure_rate));
  d.add("calibration", "method", to_string(calibration_method));
  d.add("calibration", "split_seed", std::to_string(split_seed));
  d.add("calibration", "fit_split", fit_on_all_labels ? "all" : "validation");
  d.add("calibration", "reliability_bins", std::to_string(reliability_bins));
  d.add("clustering", "retain", format_double(retain));
  d.add("clustering", "k", std::to_string(k));
  d.add("clustering", "cap", std::to_string(cap));
  d.add("clustering", "seed", std::to_string(seed));
  d.add("clustering", "max_iterations", std::to_string(max_iterations));
  d.add("clustering", "tolerance", format_double(tolerance));
  d.add("clustering", "variance_floor", format_double(variance_floor));
  d.add("clustering", "solver", solver == PcaSolver::exact ? "exact" : "randomized");
  d.add("clustering", "exemplars", std::to_string(exemplars));
  d.add("analytics", "min_n", std::to_string(min_n));
  d.add("analytics", "alpha", format_double(alpha));
  d.add("analytics", "min_country_photos", std::to_string(min_country_photos));
  d.add("analytics", "normalization", to_string(normalization));
  std::string targets;
  for (const auto& t : trends) targets += (targets.empty() ? "" : ", ") + t.attribute + "/" + t.class_label;
  d.add("analytics", "trends", targets);
  return d;
}

PipelineConfig load_pipeline_config(const std::optional<std::filesystem::path>& file,
                                    const std::vector<std::string>& overrides) {
  PipelineConfig config;
  if (file) {
    const auto doc = KvDocument::load(*file);
    config.apply(doc, file->parent_path());
  }
  for (const auto& o : overrides) config.apply_override(o);
  return config;
}

}  // namespace stylescope
