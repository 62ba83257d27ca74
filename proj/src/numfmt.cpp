#include "phoenix/numfmt.hpp"

#include <charconv>
#include <cmath>

namespace phoenix {

namespace {

constexpr double kIntCutoff = 9007199254740992.0; // 2^53

bool prints_as_integer(double value) {
    return std::isfinite(value) && std::floor(value) == value &&
           std::fabs(value) < kIntCutoff;
}

} // namespace

std::string num_to_str(double value) {
    if (prints_as_integer(value)) {
        const long long n = static_cast<long long>(value);
        return std::to_string(n); // -0 folds to "0"
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string num_to_literal(double value) {
    if (prints_as_integer(value)) return num_to_str(value);
    // All doubles at or above 2^53 are integral, so the fixed form of any
    // remaining value stays short enough for the stack buffer.
    char buf[512];
    const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                   std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

} // namespace phoenix
