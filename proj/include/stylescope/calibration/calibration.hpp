#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stylescope/calibration/isotonic.hpp"
#include "stylescope/core/record.hpp"
#include "stylescope/core/schema.hpp"

namespace stylescope {

/// A labeled validation example joined with its raw score vector.
struct CalibrationSample {
  std::string attribute;
  std::size_t true_class = 0;
  std::vector<double> scores;
  std::string record_id;  // empty when not joined from a record
};

enum class CalibrationMethod { isotonic, platt };

const char* to_string(CalibrationMethod method);
CalibrationMethod parse_calibration_method(std::string_view text);

/// Per (attribute, class) monotone maps from raw class score to calibrated
/// probability. Multi-class vectors are renormalized at query time.
class CalibrationModel {
 public:
  struct AttributeMaps {
    std::vector<std::string> classes;
    std::vector<MonotoneStepFunction> maps;  // parallel to classes

    friend bool operator==(const AttributeMaps&, const AttributeMaps&) = default;
  };

  CalibrationModel() = default;

  void set_attribute(std::string attribute, AttributeMaps maps);
  CalibrationMethod method() const noexcept { return method_; }
  void set_method(CalibrationMethod m) noexcept { method_ = m; }

  bool covers(std::string_view attribute) const;
  bool covers(std::string_view attribute, std::string_view class_label) const;
  const AttributeMaps& attribute(std::string_view name) const;  // throws ValidationError
  const std::map<std::string, AttributeMaps, std::less<>>& attributes() const noexcept { return attributes_; }

  /// One class's calibrated score, before renormalization.
  double calibrate_class(std::string_view attribute, std::size_t class_index, double raw_score) const;
  /// All classes calibrated then renormalized to sum to 1. If every class
  /// calibrates to zero the uniform vector is returned.
  std::vector<double> calibrate(std::string_view attribute, std::span<const double> raw_scores) const;

  std::string to_json() const;
  static CalibrationModel from_json(std::string_view text);

  friend bool operator==(const CalibrationModel&, const CalibrationModel&) = default;

 private:
  CalibrationMethod method_ = CalibrationMethod::isotonic;
  std::map<std::string, AttributeMaps, std::less<>> attributes_;
};

struct CalibrationFit {
  CalibrationModel model;
  std::vector<std::string> warnings;
};

/// One-vs-rest fit per class of every attribute that has samples. A class
/// without positives (or without negatives) gets the constant base-rate map
/// and a warning.
CalibrationFit fit_calibration(std::span<const CalibrationSample> samples, const AttributeSchema& schema,
                               CalibrationMethod method = CalibrationMethod::isotonic);

/// Joins labeled examples to record scores by record id. Examples whose record
/// is missing or lacks scores for the attribute are skipped.
std::vector<CalibrationSample> join_labels(std::span<const LabeledExample> examples,
                                           std::span<const PersonRecord> records, const AttributeSchema& schema);

/// Calibrated, renormalized probability of `class_label` for one record, or
/// nullopt when the record carries no scores for the attribute.
std::optional<double> calibrated_probability(const PersonRecord& record, std::string_view attribute,
                                             std::size_t class_index, const CalibrationModel& model);

/// Mean calibrated probability over the records that carry the attribute.
/// Throws ValidationError if there are none or the model lacks the class.
double calibrated_mean(std::span<const PersonRecord> records, std::string_view attribute,
                       std::string_view class_label, const CalibrationModel& model);

/// Labeled-data split: 80% train, 10% validation, 10% test, decided per
/// record id so every attribute of a record lands in the same slice.
enum class DataSplit { train, validation, test };
DataSplit split_of(std::string_view record_id, std::uint64_t seed);

}  // namespace stylescope
