#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stylescope {

/// One `key = value` line. Keys may contain spaces (city names do).
struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// Ordered key-value document:
///
///   # comment
///   top_level = 1
///   [section]
///   some key = a, b, c
///
/// Entry order and duplicate keys are preserved; interpretation belongs to
/// the caller.
class KvDocument {
 public:
  KvDocument() = default;

  static KvDocument parse(std::string_view text, std::string_view source = "<config>");
  static KvDocument load(const std::filesystem::path& path);

  void add(std::string section, std::string key, std::string value);

  const std::vector<KvEntry>& entries() const noexcept { return entries_; }
  std::vector<KvEntry> section(std::string_view name) const;
  std::vector<std::string> sections() const;
  const std::string& source() const noexcept { return source_; }

  std::string serialize() const;

 private:
  std::vector<KvEntry> entries_;
  std::string source_;
};

}  // namespace stylescope
