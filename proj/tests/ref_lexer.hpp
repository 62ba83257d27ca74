#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phoenix::test {

struct RefToken {
    std::string kind; // token_kind_name vocabulary
    std::string lexeme;
    double num_value = 0;
    std::string str_value;
    uint32_t start = 0; // codepoint offsets
    uint32_t end = 0;

    bool operator==(const RefToken&) const = default;
};

struct RefReject {
    std::string code;
    uint32_t at = 0;
};

struct RefResult {
    std::vector<RefToken> tokens; // includes the EOF token
    std::optional<RefReject> reject;
};

// Reference scanner used to cross-check the DFA lexer: projects each
// codepoint onto a character-class alphabet and matches token shapes with
// regular expressions over that projection. Keeps its own keyword data.
// Input is preprocessed codepoints (markers present, digits folded).
RefResult ref_tokenize(const std::u32string& cps);

} // namespace phoenix::test
