#include "phoenix/preprocess.hpp"

namespace phoenix {

namespace {

bool is_arabic_letter(char32_t cp) {
    return cp >= 0x0621 && cp <= 0x064A && cp != 0x0640;
}

bool is_diacritic(char32_t cp) {
    return cp == 0x0640 || (cp >= 0x064B && cp <= 0x0652);
}

bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

} // namespace

PreprocessedSource strip_comments(const SourceFile& src) {
    PreprocessedSource out;
    out.codepoints = src.codepoints;
    auto& text = out.codepoints;
    bool in_string = false;
    uint32_t i = 0;
    while (i < text.size()) {
        const char32_t c = text[i];
        if (c == U'\n') {
            in_string = false; // unterminated string is the lexer's problem
        } else if (c == U'"') {
            in_string = !in_string;
        } else if (!in_string && c == U'/' && i + 1 < text.size() && text[i + 1] == U'/') {
            while (i < text.size() && text[i] != U'\n') {
                text[i] = U' ';
                ++i;
            }
            continue; // the newline (if any) is handled by the next iteration
        }
        ++i;
    }
    return out;
}

PreprocessedSource normalize_chars(const PreprocessedSource& src) {
    PreprocessedSource out;
    out.codepoints = src.codepoints;
    out.normalization_log = src.normalization_log;
    auto& text = out.codepoints;

    bool in_string = false;
    // True while the previous significant codepoint continues a word
    // (letter, digit, or a marker written for an in-word diacritic).
    bool in_word = false;

    auto substitute = [&](uint32_t i, char32_t replacement) {
        out.normalization_log.push_back({i, text[i], replacement});
        text[i] = replacement;
    };

    for (uint32_t i = 0; i < text.size(); ++i) {
        const char32_t c = text[i];
        if (c == U'\n') {
            in_string = false;
            in_word = false;
            continue;
        }
        if (c == U'"') {
            in_string = !in_string;
            in_word = false;
            continue;
        }
        if (in_string) continue; // string contents are user data

        if (c >= 0x0660 && c <= 0x0669) { // Arabic-Indic digits
            substitute(i, U'0' + (c - 0x0660));
            in_word = true;
        } else if (c == 0x060C) { // Arabic comma
            substitute(i, U',');
            in_word = false;
        } else if (c == 0x061B) { // Arabic semicolon
            substitute(i, U';');
            in_word = false;
        } else if (is_diacritic(c)) {
            if (in_word) {
                substitute(i, kSkipMarker); // stays word-internal
            } else {
                substitute(i, U' ');
            }
        } else if (is_arabic_letter(c) || is_ascii_digit(c) || c == U'_' ||
                   c == kSkipMarker) {
            in_word = true;
        } else {
            in_word = false;
        }
    }
    return out;
}

PreprocessedSource preprocess(const SourceFile& src) {
    return normalize_chars(strip_comments(src));
}

} // namespace phoenix
