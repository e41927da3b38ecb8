#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace stylescope {

/// Incremental SHA-256. Every `update` is length-prefixed so field boundaries
/// are part of the digest.
class ContentHasher {
 public:
  ContentHasher();
  ~ContentHasher();
  ContentHasher(const ContentHasher&) = delete;
  ContentHasher& operator=(const ContentHasher&) = delete;

  ContentHasher& update(std::string_view bytes);
  /// Hashes the file's bytes; throws ValidationError naming a missing file.
  ContentHasher& update_file(const std::filesystem::path& path);
  /// Lowercase hex digest; the hasher cannot be updated afterwards.
  std::string hex();

 private:
  void raw(const void* data, std::size_t size);
  struct State;
  std::unique_ptr<State> state_;
};

/// Plain SHA-256 of `bytes`, without the length prefix.
std::string sha256_hex(std::string_view bytes);

}  // namespace stylescope
