#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stylescope {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delimiter);
/// Splits on `delimiter` and trims every piece; an all-blank input yields no pieces.
std::vector<std::string> split_trimmed(std::string_view s, char delimiter);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
/// Fixed-precision form used by the tabular report writers.
std::string format_fixed(double value, int digits);

/// Strict parsers: the whole string must be consumed. Throw ValidationError naming `field`.
double parse_double(std::string_view s, std::string_view field);
std::int64_t parse_int(std::string_view s, std::string_view field);
std::uint64_t parse_uint(std::string_view s, std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace stylescope
