#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phoenix/source.hpp"

namespace phoenix {

// Placeholder written over erased in-word diacritics so every span into the
// preprocessed text is still a valid span into the original file. The lexer
// skips it; inside an identifier it does not break the letter run.
inline constexpr char32_t kSkipMarker = U'\x01';

struct Normalization {
    uint32_t offset;
    char32_t original;
    char32_t replacement;
};

// Output of the preprocessing stage. Exactly as many codepoints as the
// input: every transformation is a 1:1 substitution.
struct PreprocessedSource {
    std::u32string codepoints;
    std::vector<Normalization> normalization_log;
};

// Blanks `//` comments (outside string literals) through end-of-line.
PreprocessedSource strip_comments(const SourceFile& src);

// Maps Arabic-Indic digits to ASCII, Arabic comma/semicolon to , and ;,
// and erases tatweel/harakat: inside a word they become the skip marker,
// between words a plain space. String literal interiors are untouched.
PreprocessedSource normalize_chars(const PreprocessedSource& src);

// strip_comments then normalize_chars.
PreprocessedSource preprocess(const SourceFile& src);

} // namespace phoenix
