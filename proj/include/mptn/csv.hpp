#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/core.h>

namespace mptn {

/// Splits one CSV line on commas. Quoting is not supported; trailing '\r' is dropped.
std::vector<std::string> split_csv_line(std::string_view line);

std::string trim(std::string_view s);

/// Shortest representation that parses back to the same double.
inline std::string fmt_real(double v) { return fmt::format("{}", v); }

/// Opens a file for writing with Unix newlines, throwing InputError on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace mptn
