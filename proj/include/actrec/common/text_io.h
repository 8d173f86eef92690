#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace actrec::io {

std::string read_file(const std::filesystem::path& path);
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

std::string trim(std::string_view s);

// 64-bit FNV-1a; used to fingerprint vocabularies in binary headers.
unsigned long long fnv1a64(std::string_view data);

}  // namespace actrec::io
