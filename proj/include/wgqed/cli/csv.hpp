#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wgqed::cli {

/// Shortest text that is guaranteed to round-trip: 17 significant digits.
std::string format_number(double value);

/// Joins fields with commas and terminates the row with '\n'. Fields that
/// contain a comma, quote or newline are quoted.
std::string csv_row(const std::vector<std::string>& fields);

void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace wgqed::cli
