// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace revision {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view text);
bool starts_with(std::string_view s, std::string_view prefix);

// Replaces every occurrence of `from` with `to`, scanning left to right.
std::string replace_all(std::string_view s, std::string_view from,
                        std::string_view to);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// FNV-1a 64-bit. Stable across platforms; used for config hashes in run
// manifests, not for security.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

// Shortest round-trip decimal form of a double (std::to_chars). The same
// bits always format to the same bytes, which keeps emitted reports and
// loss traces reproducible.
std::string format_double(double v);

}  // namespace revision
