#include "stylescope/consensus/votes_io.hpp"

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

namespace {

template <class F>
void for_each_row(std::string_view text, std::string_view source, std::size_t columns, F&& fn) {
  std::size_t line_no = 0;
  for (auto& line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    if (fields.size() != columns) {
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(columns) + " tab-separated fields, got " + std::to_string(fields.size()));
    }
    try {
      fn(fields);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<Vote> parse_votes(std::string_view text, std::string_view source) {
  std::vector<Vote> votes;
  for_each_row(text, source, 6, [&](std::vector<std::string>& f) {
    Vote v;
    v.worker_id = f[0];
    v.record_id = f[1];
    v.attribute = f[2];
    if (v.worker_id.empty() || v.record_id.empty() || v.attribute.empty()) {
      throw ValidationError("worker, record and attribute must be non-empty");
    }
    if (f[3] == faulty_answer) {
      v.faulty_detection = true;
    } else {
      v.label = f[3];
    }
    if (f[4] != "0" && f[4] != "1") throw ValidationError("is_sentinel must be 0 or 1");
    v.is_sentinel = f[4] == "1";
    if (!f[5].empty()) v.sentinel_truth = f[5];
    if (v.is_sentinel != v.sentinel_truth.has_value()) {
      throw ValidationError("sentinel_truth must be given exactly for sentinel votes");
    }
    votes.push_back(std::move(v));
  });
  return votes;
}

std::vector<Vote> read_votes(const std::filesystem::path& path) {
  return parse_votes(read_text_file(path), path.string());
}

std::string format_votes(std::span<const Vote> votes) {
  std::string out = "# worker_id\trecord_id\tattribute\tlabel\tis_sentinel\tsentinel_truth\n";
  for (const auto& v : votes) {
    out += v.worker_id + '\t' + v.record_id + '\t' + v.attribute + '\t' + v.answer() + '\t' +
           (v.is_sentinel ? "1" : "0") + '\t' + v.sentinel_truth.value_or("") + '\n';
  }
  return out;
}

void validate_votes(std::span<const Vote> votes, const AttributeSchema& schema) {
  for (const auto& v : votes) {
    const auto& attr = schema.at(v.attribute);
    if (!v.faulty_detection && !attr.class_index(v.label)) {
      throw ValidationError("vote by '" + v.worker_id + "': '" + v.label + "' is not a class of '" + v.attribute + "'");
    }
    if (v.sentinel_truth && !attr.class_index(*v.sentinel_truth)) {
      throw ValidationError("vote by '" + v.worker_id + "': sentinel truth '" + *v.sentinel_truth +
                            "' is not a class of '" + v.attribute + "'");
    }
  }
}

std::vector<LabeledExample> parse_labels(std::string_view text, std::string_view source) {
  std::vector<LabeledExample> out;
  for_each_row(text, source, 3, [&](std::vector<std::string>& f) {
    if (f[0].empty() || f[1].empty() || f[2].empty()) throw ValidationError("empty field in labeled example");
    out.push_back({f[0], f[1], f[2]});
  });
  return out;
}

std::vector<LabeledExample> read_labels(const std::filesystem::path& path) {
  return parse_labels(read_text_file(path), path.string());
}

std::string format_labels(std::span<const LabeledExample> examples) {
  std::string out = "# record_id\tattribute\tclass_label\n";
  for (const auto& e : examples) out += e.record_id + '\t' + e.attribute + '\t' + e.class_label + '\n';
  return out;
}

}  // namespace stylescope
