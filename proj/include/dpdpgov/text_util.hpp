#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dpdpgov::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, const std::string& sep);
bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);
// First position of needle in haystack, case-insensitive; npos when absent.
std::size_t find_ci(std::string_view haystack, std::string_view needle, std::size_t from = 0);

// Shortest round-trippable rendering of a double ("25", "12.5", "0.4837").
std::string format_number(double v);

}  // namespace dpdpgov::text
