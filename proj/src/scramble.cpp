#include "vmap/scramble.hpp"

#include <cmath>
#include <string>

#include "vmap/core_model.hpp"
#include "vmap/text.hpp"

namespace vmap {

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSqrt7 = std::sqrt(7.0);
const double kSqrt11 = std::sqrt(11.0);

int cents(double x) { return static_cast<int>(std::round(x * 100.0)); }

std::int64_t signal_cents(double signal) { return std::llround(signal * 100.0); }

}  // namespace

int scramble_multiplier_cents(std::size_t index0) {
    const double k = static_cast<double>(index0) + 2.0;
    int m = cents(std::sin(kSqrt3 * k + kSqrt7 * std::cos(kSqrt11 * k)));
    if (m == 0) m = cents(std::cos(kSqrt3 * k + kSqrt7 * std::sin(kSqrt11 * k)));
    if (m == 0) throw Error(ErrorCode::ScrambleDegenerate, "zero scramble multiplier at index " + std::to_string(index0));
    return m;
}

double scramble_multiplier(std::size_t index0) { return scramble_multiplier_cents(index0) / 100.0; }

std::int64_t scramble_units(double signal, std::size_t index0) {
    return signal_cents(signal) * scramble_multiplier_cents(index0);
}

double scramble(double signal, std::size_t index0) {
    return static_cast<double>(scramble_units(signal, index0)) / 10000.0;
}

double descramble(double scrambled, std::size_t index0) {
    const double v = scrambled / scramble_multiplier(index0);
    const double r = std::round(v * 100.0) / 100.0;
    return r == 0.0 ? 0.0 : r;
}

std::optional<double> descramble(std::string_view token, std::size_t index0) {
    if (token.empty()) return std::nullopt;
    auto v = text::parse_double(token);
    if (!v || !std::isfinite(*v)) return std::nullopt;
    return descramble(*v, index0);
}

}  // namespace vmap
