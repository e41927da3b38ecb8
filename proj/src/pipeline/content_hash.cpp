#include "stylescope/pipeline/content_hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>

#include "stylescope/core/error.hpp"

namespace stylescope {

struct ContentHasher::State {
  EVP_MD_CTX* ctx = nullptr;
  bool finished = false;
};

ContentHasher::ContentHasher() : state_(std::make_unique<State>()) {
  state_->ctx = EVP_MD_CTX_new();
  if (state_->ctx == nullptr || EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr) != 1) {
    throw NumericError("cannot initialize SHA-256");
  }
}

ContentHasher::~ContentHasher() { EVP_MD_CTX_free(state_->ctx); }

void ContentHasher::raw(const void* data, std::size_t size) {
  if (state_->finished) throw NumericError("hasher already finalized");
  if (EVP_DigestUpdate(state_->ctx, data, size) != 1) throw NumericError("SHA-256 update failed");
}

ContentHasher& ContentHasher::update(std::string_view bytes) {
  const std::uint64_t n = bytes.size();
  unsigned char prefix[8];
  for (int i = 0; i < 8; ++i) prefix[i] = static_cast<unsigned char>(n >> (8 * i));
  raw(prefix, sizeof prefix);
  raw(bytes.data(), bytes.size());
  return *this;
}

ContentHasher& ContentHasher::update_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open", path.string());
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw_io_error("cannot stat", path.string());
  update("file:" + std::to_string(size));
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) raw(buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (!in.eof()) throw_io_error("read failed", path.string());
  return *this;
}

namespace {

std::string to_hex(const unsigned char* digest, unsigned int length) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += digits[digest[i] >> 4];
    out += digits[digest[i] & 0xf];
  }
  return out;
}

}  // namespace

std::string ContentHasher::hex() {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (state_->finished || EVP_DigestFinal_ex(state_->ctx, digest, &length) != 1) {
    throw NumericError("SHA-256 finalize failed");
  }
  state_->finished = true;
  return to_hex(digest, length);
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw NumericError("SHA-256 failed");
  }
  return to_hex(digest, length);
}

}  // namespace stylescope
