#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace korpus {

// Minimal CSV support for the project's file formats: quoted fields,
// doubled quotes, commas inside quotes. Fields never span lines.

std::vector<std::string> split_csv_line(std::string_view line);

/// Quotes the field if it contains a comma, quote, or leading/trailing space.
std::string csv_escape(std::string_view field);

/// Whole file as rows of fields. Skips blank lines. Throws Error(IoError).
std::vector<std::vector<std::string>> read_csv(const std::string& path);

std::string trim(std::string_view s);

}  // namespace korpus
