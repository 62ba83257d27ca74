#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace phoenix {

struct Obj;
using NumArray = std::vector<double>;
using StrArray = std::vector<std::string>;

// Runtime value; arrays and objects are handles shared by reference.
using Value = std::variant<double, std::string, std::shared_ptr<NumArray>,
                           std::shared_ptr<StrArray>, std::shared_ptr<Obj>>;

struct Obj {
    uint16_t class_index = 0;
    std::vector<Value> fields;
};

// Thrown for R-coded failures; the driver renders it to stderr and exits 2.
struct RuntimeError {
    std::string code;
    std::string message;
};

[[noreturn]] void runtime_fail(std::string code, std::string message);

// Reads one input line; false at end of stream. Strips one trailing '\r'.
bool read_input_line(std::istream& in, std::string& line);

// Strict numeric input: optional sign, digits, optional '.' fraction, in
// ASCII or Arabic-Indic digits; surrounding blanks ignored. nullopt if the
// line is not a number.
std::optional<double> parse_num_input(const std::string& line);

} // namespace phoenix
