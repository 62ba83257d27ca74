#include "phoenix/runtime.hpp"

#include <charconv>
#include <istream>

namespace phoenix {

void runtime_fail(std::string code, std::string message) {
    throw RuntimeError{std::move(code), std::move(message)};
}

bool read_input_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::optional<double> parse_num_input(const std::string& line) {
    size_t lo = 0;
    size_t hi = line.size();
    auto is_blank = [](char c) { return c == ' ' || c == '\t'; };
    while (lo < hi && is_blank(line[lo])) ++lo;
    while (hi > lo && is_blank(line[hi - 1])) --hi;
    if (lo == hi) return std::nullopt;

    // Normalize Arabic-Indic digits (U+0660..U+0669, UTF-8 D9 A0..D9 A9).
    std::string ascii;
    ascii.reserve(hi - lo);
    for (size_t i = lo; i < hi;) {
        auto c = static_cast<unsigned char>(line[i]);
        if (c < 0x80) {
            if ((c >= '0' && c <= '9') || c == '.' || c == '+' || c == '-') {
                ascii.push_back(static_cast<char>(c));
                ++i;
                continue;
            }
            return std::nullopt;
        }
        if (c == 0xD9 && i + 1 < hi) {
            auto c1 = static_cast<unsigned char>(line[i + 1]);
            if (c1 >= 0xA0 && c1 <= 0xA9) {
                ascii.push_back(static_cast<char>('0' + (c1 - 0xA0)));
                i += 2;
                continue;
            }
        }
        return std::nullopt;
    }

    // [+-]? digits ('.' digits)?
    size_t p = 0;
    bool negative = false;
    if (ascii[p] == '+' || ascii[p] == '-') {
        negative = ascii[p] == '-';
        ++p;
    }
    size_t int_digits = 0;
    while (p < ascii.size() && ascii[p] >= '0' && ascii[p] <= '9') {
        ++p;
        ++int_digits;
    }
    if (int_digits == 0) return std::nullopt;
    if (p < ascii.size() && ascii[p] == '.') {
        ++p;
        size_t frac_digits = 0;
        while (p < ascii.size() && ascii[p] >= '0' && ascii[p] <= '9') {
            ++p;
            ++frac_digits;
        }
        if (frac_digits == 0) return std::nullopt;
    }
    if (p != ascii.size()) return std::nullopt;

    const char* first = ascii.data();
    if (*first == '+' || *first == '-') ++first;
    double magnitude = 0;
    auto [end, ec] =
        std::from_chars(first, ascii.data() + ascii.size(), magnitude);
    if (ec != std::errc() || end != ascii.data() + ascii.size()) {
        return std::nullopt;
    }
    return negative ? -magnitude : magnitude;
}

} // namespace phoenix
