#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the codecs and the record validator.
namespace vmap::text {

std::vector<std::string_view> split(std::string_view s, char sep);

/// Strict decimal parse of the whole token; nullopt on any leftover bytes.
std::optional<double> parse_double(std::string_view token);
std::optional<std::int64_t> parse_int(std::string_view token);

/// Shortest round-tripping fixed-point rendering, never scientific.
/// Negative zero prints as "0".
std::string format_plain(double value);

/// Renders `units` in 1e-4 steps with trailing zeros (and a bare '.') trimmed.
std::string format_scaled4(std::int64_t units);

}  // namespace vmap::text
