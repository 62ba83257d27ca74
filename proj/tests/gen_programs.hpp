#pragma once

#include <random>
#include <string>

namespace phoenix::test {

// Random syntactically valid source text drawn from the whole grammar.
// Not necessarily meaningful: names may be undeclared and types may clash.
std::string generate_syntax_program(std::mt19937& rng);

struct GeneratedTyped {
    std::string text;
    std::string input; // scripted stdin contents
};

// Random program that passes checking, terminates well inside the default
// step budget, and consumes exactly the scripted input. With inject_fault
// the program deliberately ends in one runtime error (division or modulo
// by zero, an out-of-range index, a bad numeric input, or a missing input
// line).
GeneratedTyped generate_typed_program(std::mt19937& rng, bool inject_fault);

} // namespace phoenix::test
