#pragma once

#include <string>

namespace phoenix {

// Canonical text form of a numeric value, used by أعرض and by string
// concatenation. Integral values below 2^53 print with no decimal point;
// everything else prints the shortest form that parses back exactly.
std::string num_to_str(double value);

// Like num_to_str but never uses exponent notation, so the result is
// always lexable as a numeric literal. Requires a finite value.
std::string num_to_literal(double value);

} // namespace phoenix
