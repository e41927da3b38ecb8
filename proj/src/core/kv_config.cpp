#include "stylescope/core/kv_config.hpp"

#include <algorithm>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

KvDocument KvDocument::parse(std::string_view text, std::string_view source) {
  KvDocument doc;
  doc.source_ = std::string(source);
  std::string current_section;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError(doc.source_ + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      current_section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(doc.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ValidationError(doc.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    doc.entries_.push_back({current_section, std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
  }
  return doc;
}

KvDocument KvDocument::load(const std::filesystem::path& path) {
  return parse(read_text_file(path), path.string());
}

void KvDocument::add(std::string section, std::string key, std::string value) {
  entries_.push_back({std::move(section), std::move(key), std::move(value), 0});
}

std::vector<KvEntry> KvDocument::section(std::string_view name) const {
  std::vector<KvEntry> out;
  std::copy_if(entries_.begin(), entries_.end(), std::back_inserter(out),
               [&](const KvEntry& e) { return e.section == name; });
  return out;
}

std::vector<std::string> KvDocument::sections() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.section) == out.end()) out.push_back(e.section);
  }
  return out;
}

std::string KvDocument::serialize() const {
  std::string out;
  std::string current;
  bool first = true;
  for (const auto& e : entries_) {
    if (first || e.section != current) {
      if (!e.section.empty()) {
        if (!first) out += '\n';
        out += '[' + e.section + "]\n";
      }
      current = e.section;
      first = false;
    }
    out += e.key + " = " + e.value + '\n';
  }
  return out;
}

}  // namespace stylescope
