#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uavfl/app/errors.hpp"

namespace uavfl::app {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// RFC 4180 text: fields holding a comma, quote or newline are quoted.
std::string to_csv(const CsvTable& t);
/// Throws IoError on malformed input (unterminated quote, ragged rows).
CsvTable parse_csv(std::string_view text);

/// Throw IoError on failure.
void write_csv(const std::filesystem::path& path, const CsvTable& t);
CsvTable read_csv(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace uavfl::app
