#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace archsweep {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

// Strict parsers: the whole token must be consumed. Throw MalformedRow.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);
std::uint64_t parse_uint64(std::string_view token);

// Splits on commas. No quoting: none of the formats here emit quoted fields.
std::vector<std::string_view> split_csv_line(std::string_view line);

// Whole file as lines; LF and CRLF both accepted, terminators stripped.
std::vector<std::string> read_lines(const std::string& path);

void write_text_file(const std::string& path, std::string_view content);
std::string read_text_file(const std::string& path);

}  // namespace archsweep
