#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace groove {

/// Writes `content` to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);
/// Fixed-point formatting with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Minimal CSV table: first row is the header, no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index for `name`; throws FormatError when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

/// Strict numeric parse; throws FormatError with `context` on failure.
double parse_double(std::string_view text, std::string_view context);

}  // namespace groove
