#pragma once

#include <string>
#include <vector>

#include "phoenix/preprocess.hpp"
#include "phoenix/source.hpp"
#include "phoenix/token.hpp"

namespace phoenix {

// Lexical alphabet. Identifier letters are exactly U+0621..U+064A with the
// tatweel excluded (the preprocessor already erased it).
bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
bool is_ident_continue(char32_t cp); // letter | digit | '_' | skip marker
bool is_lex_whitespace(char32_t cp); // space, tab, CR, LF, skip marker

// DFA states for the three literal token classes.
enum class LexerState {
    Start,
    InIdent,
    InIntPart,
    InFracStart, // just consumed '.', a digit must follow
    InFracPart,
    InString,
    AcceptIdent,
    AcceptNum,
    AcceptString,
    Reject,
};

enum class CharClass {
    Letter,
    Digit,
    Underscore,
    Marker,
    Dot,
    Quote,
    Newline,
    Space,
    Other,
    EndOfInput,
};

CharClass classify(char32_t cp);
bool lexer_state_is_final(LexerState s);

// Total, deterministic transition function over (state, class).
LexerState lexer_step(LexerState state, CharClass cls);

// DFA scanner over preprocessed codepoints. Stops at the first error by
// throwing CompileError (E-LEX-001/002/003).
class Lexer {
public:
    Lexer(const SourceFile& file, const PreprocessedSource& pre);

    Token next_token();
    bool at_end() const { return pos_ >= text().size(); }

private:
    const std::u32string& text() const { return pre_.codepoints; }
    char32_t peek(uint32_t ahead = 0) const;

    Token scan_identifier_or_keyword();
    Token scan_number();
    Token scan_string();
    Token scan_operator();

    // Scans one identifier word starting at pos_; returns its skeleton
    // (markers dropped) and leaves pos_ one past the word.
    std::string scan_word();

    Span make_span(uint32_t start, uint32_t end) const;
    [[noreturn]] void fail(const std::string& code, const std::string& message,
                           uint32_t start, uint32_t end) const;

    const SourceFile& file_;
    const PreprocessedSource& pre_;
    uint32_t pos_ = 0;
};

// Runs the scanner to EOF; the EOF token is appended. Throws CompileError
// at the first lexical error.
std::vector<Token> tokenize(const SourceFile& file, const PreprocessedSource& pre);

// Convenience: preprocess + tokenize.
std::vector<Token> tokenize(const SourceFile& file);

// Token dump, one per line: KIND<TAB>lexeme<TAB>line:col
std::string dump_tokens(const std::vector<Token>& tokens);

} // namespace phoenix
