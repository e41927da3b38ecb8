#include "stylescope/calibration/calibration.hpp"

#include <unordered_map>

#include "json.hpp"
#include "stylescope/calibration/platt.hpp"
#include "stylescope/core/error.hpp"
#include "stylescope/core/random.hpp"

namespace stylescope {

const char* to_string(CalibrationMethod method) {
  return method == CalibrationMethod::isotonic ? "isotonic" : "platt";
}

CalibrationMethod parse_calibration_method(std::string_view text) {
  if (text == "isotonic") return CalibrationMethod::isotonic;
  if (text == "platt") return CalibrationMethod::platt;
  throw UsageError("unknown calibration method '" + std::string(text) + "' (isotonic|platt)");
}

void CalibrationModel::set_attribute(std::string attribute, AttributeMaps maps) {
  if (maps.classes.size() != maps.maps.size()) throw ValidationError("calibration: classes and maps differ in length");
  attributes_[std::move(attribute)] = std::move(maps);
}

bool CalibrationModel::covers(std::string_view attribute) const { return attributes_.find(attribute) != attributes_.end(); }

bool CalibrationModel::covers(std::string_view attribute, std::string_view class_label) const {
  const auto it = attributes_.find(attribute);
  if (it == attributes_.end()) return false;
  const auto& cls = it->second.classes;
  return std::find(cls.begin(), cls.end(), class_label) != cls.end();
}

const CalibrationModel::AttributeMaps& CalibrationModel::attribute(std::string_view name) const {
  const auto it = attributes_.find(name);
  if (it == attributes_.end()) throw ValidationError("calibration model has no attribute '" + std::string(name) + "'");
  return it->second;
}

double CalibrationModel::calibrate_class(std::string_view attr, std::size_t class_index, double raw_score) const {
  const auto& a = attribute(attr);
  if (class_index >= a.maps.size()) throw ValidationError("calibration: class index out of range");
  return a.maps[class_index](raw_score);
}

std::vector<double> CalibrationModel::calibrate(std::string_view attr, std::span<const double> raw) const {
  const auto& a = attribute(attr);
  if (raw.size() != a.maps.size()) {
    throw ValidationError("calibration: '" + std::string(attr) + "' expects " + std::to_string(a.maps.size()) +
                          " scores, got " + std::to_string(raw.size()));
  }
  std::vector<double> out(raw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = a.maps[i](raw[i]);
    sum += out[i];
  }
  if (!(sum > 0.0)) {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
    return out;
  }
  for (double& v : out) v /= sum;
  return out;
}

std::string CalibrationModel::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "stylescope-calibration";
  j["version"] = 1;
  j["method"] = to_string(method_);
  auto& attrs = j["attributes"] = nlohmann::ordered_json::array();
  for (const auto& [name, a] : attributes_) {
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
      classes.push_back({{"label", a.classes[i]}, {"scores", a.maps[i].scores()}, {"values", a.maps[i].values()}});
    }
    attrs.push_back({{"name", name}, {"classes", std::move(classes)}});
  }
  return j.dump(1) + "\n";
}

CalibrationModel CalibrationModel::from_json(std::string_view text) {
  CalibrationModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "stylescope-calibration") throw ValidationError("not a calibration model file");
    if (j.at("version") != 1) throw ValidationError("unsupported calibration model version");
    m.method_ = parse_calibration_method(j.at("method").get<std::string>());
    for (const auto& a : j.at("attributes")) {
      AttributeMaps maps;
      for (const auto& c : a.at("classes")) {
        maps.classes.push_back(c.at("label").get<std::string>());
        maps.maps.emplace_back(c.at("scores").get<std::vector<double>>(), c.at("values").get<std::vector<double>>());
      }
      m.set_attribute(a.at("name").get<std::string>(), std::move(maps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed calibration model: ") + e.what());
  }
  return m;
}

CalibrationFit fit_calibration(std::span<const CalibrationSample> samples, const AttributeSchema& schema,
                               CalibrationMethod method) {
  CalibrationFit fit;
  fit.model.set_method(method);
  std::map<std::string, std::vector<const CalibrationSample*>, std::less<>> by_attribute;
  for (const auto& s : samples) {
    const auto& attr = schema.at(s.attribute);
    if (s.scores.size() != attr.class_count() || s.true_class >= attr.class_count()) {
      throw ValidationError("calibration sample for '" + s.attribute + "' does not match the schema");
    }
    by_attribute[s.attribute].push_back(&s);
  }

  for (const auto& attr : schema.attributes()) {
    const auto it = by_attribute.find(attr.name);
    if (it == by_attribute.end()) {
      fit.warnings.push_back(attr.name + ": no validation samples; attribute left uncalibrated");
      continue;
    }
    const auto& rows = it->second;
    CalibrationModel::AttributeMaps maps;
    maps.classes = attr.classes;
    for (std::size_t c = 0; c < attr.class_count(); ++c) {
      std::vector<IsotonicPoint> points;
      points.reserve(rows.size());
      std::size_t positives = 0;
      for (const auto* s : rows) {
        const bool pos = s->true_class == c;
        positives += pos;
        points.push_back({s->scores[c], pos ? 1.0 : 0.0, 1.0});
      }
      const double base_rate = static_cast<double>(positives) / static_cast<double>(rows.size());
      if (positives == 0 || positives == rows.size() || rows.size() < 2) {
        fit.warnings.push_back(attr.name + "/" + attr.classes[c] + ": " +
                               (positives == 0 ? "no positive" : "no negative") +
                               " validation examples; using constant base rate " + std::to_string(base_rate));
        maps.maps.push_back(MonotoneStepFunction::constant(base_rate));
        continue;
      }
      if (method == CalibrationMethod::isotonic) {
        maps.maps.push_back(fit_isotonic(points).function);
      } else {
        const auto platt = fit_platt(points);
        if (platt.a >= 0.0) {
          fit.warnings.push_back(attr.name + "/" + attr.classes[c] + ": sigmoid fit is decreasing; using base rate");
        }
        maps.maps.push_back(tabulate(platt, base_rate));
      }
    }
    fit.model.set_attribute(attr.name, std::move(maps));
  }
  return fit;
}

std::vector<CalibrationSample> join_labels(std::span<const LabeledExample> examples,
                                           std::span<const PersonRecord> records, const AttributeSchema& schema) {
  std::unordered_map<std::string_view, const PersonRecord*> index;
  index.reserve(records.size());
  for (const auto& r : records) index.emplace(r.record_id, &r);
  std::vector<CalibrationSample> out;
  for (const auto& e : examples) {
    const auto& attr = schema.at(e.attribute);
    const auto cls = attr.class_index(e.class_label);
    if (!cls) validate_example(e, schema);  // throws with a useful message
    const auto it = index.find(e.record_id);
    if (it == index.end()) continue;
    const auto* scores = it->second->scores_for(e.attribute);
    if (!scores) continue;
    out.push_back({e.attribute, *cls, *scores, e.record_id});
  }
  return out;
}

std::optional<double> calibrated_probability(const PersonRecord& record, std::string_view attribute,
                                             std::size_t class_index, const CalibrationModel& model) {
  const auto* scores = record.scores_for(attribute);
  if (!scores) return std::nullopt;
  return model.calibrate(attribute, *scores).at(class_index);
}

double calibrated_mean(std::span<const PersonRecord> records, std::string_view attribute,
                       std::string_view class_label, const CalibrationModel& model) {
  if (!model.covers(attribute, class_label)) {
    throw ValidationError("calibration model does not cover " + std::string(attribute) + "/" + std::string(class_label));
  }
  const auto& cls = model.attribute(attribute).classes;
  const auto class_index = static_cast<std::size_t>(std::find(cls.begin(), cls.end(), class_label) - cls.begin());
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : records) {
    if (const auto p = calibrated_probability(r, attribute, class_index, model)) {
      sum += *p;
      ++n;
    }
  }
  if (n == 0) throw ValidationError("calibrated mean: no records carry attribute '" + std::string(attribute) + "'");
  return sum / static_cast<double>(n);
}

DataSplit split_of(std::string_view record_id, std::uint64_t seed) {
  const std::uint64_t h = mix_seed(seed, stable_hash(record_id));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  if (u < 0.8) return DataSplit::train;
  if (u < 0.9) return DataSplit::validation;
  return DataSplit::test;
}

}  // namespace stylescope
