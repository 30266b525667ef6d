#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wlsep::detail {

std::string_view trim(std::string_view s);
std::vector<std::string> split_csv_line(std::string_view line);
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Shortest round-trip text for a double ("%.17g" family, locale independent).
std::string format_double(double v);
std::string format_fixed(double v, int decimals);
double parse_double(std::string_view s);

}  // namespace wlsep::detail
