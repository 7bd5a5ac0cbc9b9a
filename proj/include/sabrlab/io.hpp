#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sabrlab {

/// Shortest round-trip decimal rendering of a double (deterministic).
std::string fmt_double(double v);

std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t v);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace sabrlab
