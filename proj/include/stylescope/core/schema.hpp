#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stylescope/core/kv_config.hpp"

namespace stylescope {

struct Attribute {
  std::string name;
  std::vector<std::string> classes;

  std::optional<std::size_t> class_index(std::string_view label) const;
  std::size_t class_count() const noexcept { return classes.size(); }

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

/// Ordered list of attributes and their ordered class labels. Every raw
/// score vector in a corpus is laid out in this class order.
class AttributeSchema {
 public:
  /// Throws ValidationError on duplicate names/labels or an empty class list.
  explicit AttributeSchema(std::vector<Attribute> attributes);

  /// The 12-attribute clothing schema (7 binary attributes, then major color,
  /// clothing category, sleeve length, neckline shape, clothing pattern).
  static AttributeSchema default_schema();

  const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
  std::size_t size() const noexcept { return attributes_.size(); }
  std::size_t total_classes() const noexcept;

  const Attribute* find(std::string_view name) const;
  const Attribute& at(std::string_view name) const;  // throws ValidationError

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;

 private:
  std::vector<Attribute> attributes_;
};

/// Reads the `[attributes]` section: `name = label, label, ...` in order.
AttributeSchema load_schema(const KvDocument& config);
AttributeSchema load_schema_file(const std::filesystem::path& path);
KvDocument schema_to_config(const AttributeSchema& schema);

/// Per-class annotation counts collected for the default schema, in class order.
/// Used as default prevalences by the synthetic generator.
std::vector<double> reference_class_counts(std::string_view attribute);

/// Held-out accuracy of the reference attribute classifier (overall accuracy,
/// mean class accuracy); nullopt for attributes outside the default schema.
struct ReferenceAccuracy {
  double accuracy;
  double mean_class_accuracy;
};
std::optional<ReferenceAccuracy> reference_accuracy(std::string_view attribute);

struct LabeledExample {
  std::string record_id;
  std::string attribute;
  std::string class_label;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

/// Throws ValidationError when the label is not a class of the attribute.
void validate_example(const LabeledExample& example, const AttributeSchema& schema);

}  // namespace stylescope
