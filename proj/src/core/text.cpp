#include "stylescope/core/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stylescope/core/error.hpp"

namespace stylescope {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_trimmed(std::string_view s, char delimiter) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  for (auto& piece : split(s, delimiter)) out.emplace_back(trim(piece));
  return out;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double value, int digits) {
  std::array<char, 128> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, digits);
  std::string out(buf.data(), res.ptr);
  // "-0.000000" and "0.000000" must print the same so reports stay byte-stable.
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

namespace {

template <class T>
T parse_number(std::string_view s, std::string_view field, const char* kind) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    std::ostringstream msg;
    msg << field << ": expected " << kind << ", got '" << s << "'";
    throw ValidationError(msg.str());
  }
  return value;
}

}  // namespace

double parse_double(std::string_view s, std::string_view field) {
  const double v = parse_number<double>(s, field, "a number");
  if (!std::isfinite(v)) throw ValidationError(std::string(field) + ": value is not finite");
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view field) {
  return parse_number<std::int64_t>(s, field, "an integer");
}

std::uint64_t parse_uint(std::string_view s, std::string_view field) {
  return parse_number<std::uint64_t>(s, field, "a non-negative integer");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io_error("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io_error("cannot write file", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw_io_error("write failed", path.string());
}

}  // namespace stylescope
