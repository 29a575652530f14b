#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace emosphere {

// MissingFile when the path does not exist, IoFailure on read errors.
std::string read_file(const std::filesystem::path& path);

// IoFailure when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace emosphere
