#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "polyscat/types.hpp"

namespace polyscat::text {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

std::string format_vec(const Vec3& v, char sep = ' ');

double parse_double(std::string_view token);
long parse_long(std::string_view token);

// Whitespace tokenizer; empty tokens are skipped.
std::vector<std::string_view> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace polyscat::text
