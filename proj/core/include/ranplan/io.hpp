#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ranplan {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a full token; throws parse_error on trailing junk.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ranplan
