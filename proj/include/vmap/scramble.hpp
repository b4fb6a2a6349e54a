#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace vmap {

/// Per-position multiplier in hundredths (e.g. -33 for -0.33). Position k = index0 + 2:
/// round(sin(sqrt3 k + sqrt7 cos(sqrt11 k)), 2), falling back to the cosine
/// variant when that rounds to zero. Throws ScrambleDegenerate if both do.
int scramble_multiplier_cents(std::size_t index0);
double scramble_multiplier(std::size_t index0);

/// signal (2 decimals) times the multiplier; the product has at most 4 decimals.
double scramble(double signal, std::size_t index0);

/// The scrambled value in exact 1e-4 units.
std::int64_t scramble_units(double signal, std::size_t index0);

double descramble(double scrambled, std::size_t index0);

/// Token form used by s.txt readers: empty means missing.
std::optional<double> descramble(std::string_view token, std::size_t index0);

}  // namespace vmap
