#include "stylescope/core/schema.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

namespace {

struct ReferenceAttribute {
  const char* name;
  std::vector<std::pair<const char*, double>> classes;  // label, annotation count
  ReferenceAccuracy accuracy;
};

const std::vector<ReferenceAttribute>& reference_attributes() {
  static const std::vector<ReferenceAttribute> table = {
      {"wearing_jacket", {{"No", 18078}, {"Yes", 7113}}, {0.869, 0.848}},
      {"collar_presence", {{"No", 16774}, {"Yes", 7299}}, {0.869, 0.868}},
      {"wearing_scarf", {{"No", 23979}, {"Yes", 1452}}, {0.944, 0.772}},
      {"wearing_necktie", {{"No", 24843}, {"Yes", 827}}, {0.979, 0.826}},
      {"wearing_hat", {{"No", 23279}, {"Yes", 2255}}, {0.959, 0.917}},
      {"wearing_glasses", {{"No", 22058}, {"Yes", 3401}}, {0.982, 0.945}},
      {"multiple_layers", {{"No", 15921}, {"Yes", 8829}}, {0.830, 0.823}},
      {"major_color",
       {{"Black", 6545}, {"White", 4461}, {"2+ colors", 2439}, {"Blue", 2419}, {"Gray", 1345},
        {"Red", 1131}, {"Pink", 649}, {"Green", 526}, {"Yellow", 441}, {"Brown", 386},
        {"Purple", 170}, {"Orange", 162}, {"Cyan", 33}},
       {0.688, 0.568}},
      {"clothing_category",
       {{"Shirt", 4666}, {"Outerwear", 4580}, {"T-shirt", 4580}, {"Dress", 2558},
        {"Tank top", 1348}, {"Suit", 1143}, {"Sweater", 874}},
       {0.661, 0.627}},
      {"sleeve_length", {{"Long sleeve", 13410}, {"Short sleeve", 7145}, {"No sleeve", 3520}}, {0.794, 0.788}},
      {"neckline_shape", {{"Round", 9799}, {"Folded", 8119}, {"V-shape", 2017}}, {0.831, 0.766}},
      {"clothing_pattern",
       {{"Solid", 15933}, {"Graphics", 3832}, {"Striped", 1069}, {"Floral", 885}, {"Plaid", 532},
        {"Spotted", 241}},
       {0.853, 0.772}},
  };
  return table;
}

const ReferenceAttribute* find_reference(std::string_view name) {
  for (const auto& a : reference_attributes()) {
    if (name == a.name) return &a;
  }
  return nullptr;
}

}  // namespace

std::optional<std::size_t> Attribute::class_index(std::string_view label) const {
  const auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - classes.begin());
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
  std::set<std::string, std::less<>> names;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw ValidationError("schema: empty attribute name");
    if (!names.insert(a.name).second) throw ValidationError("schema: duplicate attribute '" + a.name + "'");
    if (a.classes.empty()) throw ValidationError("schema: attribute '" + a.name + "' has an empty class list");
    std::set<std::string, std::less<>> labels;
    for (const auto& c : a.classes) {
      if (c.empty()) throw ValidationError("schema: attribute '" + a.name + "' has an empty class label");
      if (c.find(',') != std::string::npos) {
        throw ValidationError("schema: class label '" + c + "' contains a comma");
      }
      if (!labels.insert(c).second) {
        throw ValidationError("schema: duplicate class '" + c + "' in attribute '" + a.name + "'");
      }
    }
  }
}

AttributeSchema AttributeSchema::default_schema() {
  std::vector<Attribute> attrs;
  for (const auto& ref : reference_attributes()) {
    Attribute a{ref.name, {}};
    for (const auto& [label, count] : ref.classes) a.classes.emplace_back(label);
    attrs.push_back(std::move(a));
  }
  return AttributeSchema(std::move(attrs));
}

std::size_t AttributeSchema::total_classes() const noexcept {
  std::size_t n = 0;
  for (const auto& a : attributes_) n += a.classes.size();
  return n;
}

const Attribute* AttributeSchema::find(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const Attribute& AttributeSchema::at(std::string_view name) const {
  if (const auto* a = find(name)) return *a;
  throw ValidationError("unknown attribute '" + std::string(name) + "'");
}

AttributeSchema load_schema(const KvDocument& config) {
  std::vector<Attribute> attrs;
  for (const auto& e : config.entries()) {
    if (e.section != "attributes") {
      throw ValidationError(config.source() + ":" + std::to_string(e.line) + ": unexpected key '" + e.key +
                            "' outside [attributes]");
    }
    attrs.push_back({e.key, split_trimmed(e.value, ',')});
  }
  if (attrs.empty()) throw ValidationError(config.source() + ": no attributes listed");
  return AttributeSchema(std::move(attrs));
}

AttributeSchema load_schema_file(const std::filesystem::path& path) {
  return load_schema(KvDocument::load(path));
}

KvDocument schema_to_config(const AttributeSchema& schema) {
  KvDocument doc;
  for (const auto& a : schema.attributes()) {
    std::string value;
    for (std::size_t i = 0; i < a.classes.size(); ++i) {
      if (i) value += ", ";
      value += a.classes[i];
    }
    doc.add("attributes", a.name, value);
  }
  return doc;
}

std::vector<double> reference_class_counts(std::string_view attribute) {
  const auto* ref = find_reference(attribute);
  if (!ref) throw ValidationError("no reference counts for attribute '" + std::string(attribute) + "'");
  std::vector<double> out;
  for (const auto& [label, count] : ref->classes) out.push_back(count);
  return out;
}

std::optional<ReferenceAccuracy> reference_accuracy(std::string_view attribute) {
  if (const auto* ref = find_reference(attribute)) return ref->accuracy;
  return std::nullopt;
}

void validate_example(const LabeledExample& example, const AttributeSchema& schema) {
  const auto& attr = schema.at(example.attribute);
  if (!attr.class_index(example.class_label)) {
    throw ValidationError("record " + example.record_id + ": '" + example.class_label +
                          "' is not a class of attribute '" + example.attribute + "'");
  }
}

}  // namespace stylescope
