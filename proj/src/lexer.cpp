#include "phoenix/lexer.hpp"

#include <cstdlib>

namespace phoenix {

bool is_letter(char32_t cp) {
    return cp >= 0x0621 && cp <= 0x064A && cp != 0x0640;
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_ident_continue(char32_t cp) {
    return is_letter(cp) || is_digit(cp) || cp == U'_' || cp == kSkipMarker;
}

bool is_lex_whitespace(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' ||
           cp == kSkipMarker;
}

CharClass classify(char32_t cp) {
    if (is_letter(cp)) return CharClass::Letter;
    if (is_digit(cp)) return CharClass::Digit;
    if (cp == U'_') return CharClass::Underscore;
    if (cp == kSkipMarker) return CharClass::Marker;
    if (cp == U'.') return CharClass::Dot;
    if (cp == U'"') return CharClass::Quote;
    if (cp == U'\n') return CharClass::Newline;
    if (cp == U' ' || cp == U'\t' || cp == U'\r') return CharClass::Space;
    return CharClass::Other;
}

bool lexer_state_is_final(LexerState s) {
    return s == LexerState::AcceptIdent || s == LexerState::AcceptNum ||
           s == LexerState::AcceptString || s == LexerState::Reject;
}

LexerState lexer_step(LexerState state, CharClass cls) {
    switch (state) {
    case LexerState::Start:
        switch (cls) {
        case CharClass::Letter: return LexerState::InIdent;
        case CharClass::Digit: return LexerState::InIntPart;
        case CharClass::Quote: return LexerState::InString;
        default: return LexerState::Reject;
        }
    case LexerState::InIdent:
        switch (cls) {
        case CharClass::Letter:
        case CharClass::Digit:
        case CharClass::Underscore:
        case CharClass::Marker:
            return LexerState::InIdent;
        default: return LexerState::AcceptIdent;
        }
    case LexerState::InIntPart:
        switch (cls) {
        case CharClass::Digit: return LexerState::InIntPart;
        case CharClass::Dot: return LexerState::InFracStart;
        default: return LexerState::AcceptNum;
        }
    case LexerState::InFracStart:
        return cls == CharClass::Digit ? LexerState::InFracPart : LexerState::Reject;
    case LexerState::InFracPart:
        return cls == CharClass::Digit ? LexerState::InFracPart : LexerState::AcceptNum;
    case LexerState::InString:
        switch (cls) {
        case CharClass::Quote: return LexerState::AcceptString;
        case CharClass::Newline:
        case CharClass::EndOfInput:
            return LexerState::Reject;
        default: return LexerState::InString;
        }
    case LexerState::AcceptIdent:
    case LexerState::AcceptNum:
    case LexerState::AcceptString:
    case LexerState::Reject:
        return state;
    }
    return LexerState::Reject;
}

Lexer::Lexer(const SourceFile& file, const PreprocessedSource& pre)
    : file_(file), pre_(pre) {}

char32_t Lexer::peek(uint32_t ahead) const {
    const uint64_t i = uint64_t(pos_) + ahead;
    return i < text().size() ? text()[i] : 0;
}

Span Lexer::make_span(uint32_t start, uint32_t end) const {
    return Span::at(file_, start, end);
}

void Lexer::fail(const std::string& code, const std::string& message,
                 uint32_t start, uint32_t end) const {
    Diagnostic d;
    d.severity = Severity::Error;
    d.phase = Phase::Lex;
    d.code = code;
    d.message = message;
    d.span = make_span(start, end);
    throw CompileError{std::move(d)};
}

std::string Lexer::scan_word() {
    std::u32string skeleton;
    LexerState state = LexerState::Start;
    while (true) {
        const CharClass cls =
            pos_ < text().size() ? classify(text()[pos_]) : CharClass::EndOfInput;
        state = lexer_step(state, cls);
        if (lexer_state_is_final(state)) break;
        if (text()[pos_] != kSkipMarker) skeleton.push_back(text()[pos_]);
        ++pos_;
    }
    return utf8_encode(skeleton);
}

Token Lexer::scan_identifier_or_keyword() {
    const uint32_t start = pos_;
    const std::string first = scan_word();

    // Compound resolution: try to widen the word into a multi-word or
    // hyphen-joined keyword, longest candidate first.
    const KeywordEntry* best = nullptr;
    uint32_t best_end = pos_;
    for (const auto& entry : keyword_table()) {
        if (entry.words.size() < 2 || entry.words[0] != first) continue;
        if (best && entry.words.size() <= best->words.size()) continue;
        const uint32_t saved = pos_;
        bool matched = true;
        for (size_t k = 1; k < entry.words.size(); ++k) {
            const char32_t joiner = entry.joiners[k - 1];
            if (joiner == U' ') {
                uint32_t skipped = 0;
                while (peek() == U' ' || peek() == U'\t' || peek() == kSkipMarker) {
                    ++pos_;
                    ++skipped;
                }
                if (skipped == 0) { matched = false; break; }
            } else { // hyphen-joined: direct adjacency
                if (peek() != joiner) { matched = false; break; }
                ++pos_;
            }
            if (!is_letter(peek())) { matched = false; break; }
            if (scan_word() != entry.words[k]) { matched = false; break; }
        }
        if (matched) {
            best = &entry;
            best_end = pos_;
        }
        pos_ = saved;
    }

    Token t;
    if (best) {
        pos_ = best_end;
        t.kind = best->kind;
        t.lexeme = best->lexeme;
    } else if (auto kw = single_word_keyword(first)) {
        t.kind = *kw;
        t.lexeme = first;
    } else {
        t.kind = TokenKind::Ident;
        t.lexeme = first;
    }
    t.span = make_span(start, pos_);
    return t;
}

Token Lexer::scan_number() {
    const uint32_t start = pos_;
    std::string digits;
    LexerState state = LexerState::Start;
    while (true) {
        const CharClass cls =
            pos_ < text().size() ? classify(text()[pos_]) : CharClass::EndOfInput;
        const LexerState next = lexer_step(state, cls);
        if (next == LexerState::Reject) {
            // only reachable from InFracStart: '.' without a following digit
            fail("E-LEX-002", "numeric literal has a decimal point with no digits after it",
                 start, pos_);
        }
        state = next;
        if (lexer_state_is_final(state)) break;
        digits.push_back(static_cast<char>(text()[pos_]));
        ++pos_;
    }
    Token t;
    t.kind = TokenKind::Num;
    t.lexeme = digits;
    t.num_value = std::strtod(digits.c_str(), nullptr);
    t.span = make_span(start, pos_);
    return t;
}

Token Lexer::scan_string() {
    const uint32_t start = pos_;
    std::u32string interior;
    LexerState state = lexer_step(LexerState::Start, CharClass::Quote);
    ++pos_; // opening quote
    while (true) {
        const CharClass cls =
            pos_ < text().size() ? classify(text()[pos_]) : CharClass::EndOfInput;
        const LexerState next = lexer_step(state, cls);
        if (next == LexerState::Reject) {
            fail("E-LEX-003", "unterminated string literal", start, pos_);
        }
        state = next;
        if (state == LexerState::AcceptString) {
            ++pos_; // closing quote
            break;
        }
        interior.push_back(text()[pos_]);
        ++pos_;
    }
    Token t;
    t.kind = TokenKind::String;
    t.str_value = utf8_encode(interior);
    t.lexeme = t.str_value;
    t.span = make_span(start, pos_);
    return t;
}

Token Lexer::scan_operator() {
    const uint32_t start = pos_;
    const char32_t c0 = peek();
    const char32_t c1 = peek(1);

    auto two = [&](TokenKind kind, const char* lexeme) {
        pos_ += 2;
        Token t;
        t.kind = kind;
        t.lexeme = lexeme;
        t.span = make_span(start, pos_);
        return t;
    };
    auto one = [&](TokenKind kind, const char* lexeme) {
        pos_ += 1;
        Token t;
        t.kind = kind;
        t.lexeme = lexeme;
        t.span = make_span(start, pos_);
        return t;
    };

    // maximal munch: two-codepoint operators first
    if (c0 == U'=' && c1 == U'=') return two(TokenKind::Eq, "==");
    if (c0 == U'!' && c1 == U'=') return two(TokenKind::Neq, "!=");
    if (c0 == U'<' && c1 == U'=') return two(TokenKind::Le, "<=");
    if (c0 == U'>' && c1 == U'=') return two(TokenKind::Ge, ">=");
    if (c0 == U'&' && c1 == U'&') return two(TokenKind::And, "&&");
    if (c0 == U'|' && c1 == U'|') return two(TokenKind::Or, "||");

    switch (c0) {
    case U'+': return one(TokenKind::Plus, "+");
    case U'-': return one(TokenKind::Minus, "-");
    case 0x00D7: return one(TokenKind::Mul, "×"); // ×
    case U'*': return one(TokenKind::Mul, "×");   // ASCII alias
    case 0x00F7: return one(TokenKind::Div, "÷"); // ÷
    case U'/': return one(TokenKind::Div, "÷");   // ASCII alias
    case U'%': return one(TokenKind::Mod, "%");
    case U'&': return one(TokenKind::Concat, "&");
    case U'=': return one(TokenKind::Assign, "=");
    case U'<': return one(TokenKind::Lt, "<");
    case U'>': return one(TokenKind::Gt, ">");
    case U'(': return one(TokenKind::LParen, "(");
    case U')': return one(TokenKind::RParen, ")");
    case U'{': return one(TokenKind::LBrace, "{");
    case U'}': return one(TokenKind::RBrace, "}");
    case U'[': return one(TokenKind::LBracket, "[");
    case U']': return one(TokenKind::RBracket, "]");
    case U',': return one(TokenKind::Comma, ",");
    case U';': return one(TokenKind::Semi, ";");
    case U':': return one(TokenKind::Colon, ":");
    case U'.': return one(TokenKind::Dot, ".");
    default: break;
    }

    char buf[16];
    std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(c0));
    fail("E-LEX-001", std::string("no token can start with '") + utf8_encode(c0) +
                          "' (" + buf + ")",
         start, start + 1);
}

Token Lexer::next_token() {
    while (pos_ < text().size() && is_lex_whitespace(text()[pos_])) ++pos_;
    if (pos_ >= text().size()) {
        Token t;
        t.kind = TokenKind::Eof;
        t.span = make_span(pos_, pos_);
        return t;
    }
    const char32_t c = peek();
    if (is_letter(c)) return scan_identifier_or_keyword();
    if (is_digit(c)) return scan_number();
    if (c == U'"') return scan_string();
    return scan_operator();
}

std::vector<Token> tokenize(const SourceFile& file, const PreprocessedSource& pre) {
    Lexer lexer(file, pre);
    std::vector<Token> tokens;
    while (true) {
        Token t = lexer.next_token();
        const bool done = t.kind == TokenKind::Eof;
        tokens.push_back(std::move(t));
        if (done) break;
    }
    return tokens;
}

std::vector<Token> tokenize(const SourceFile& file) {
    return tokenize(file, preprocess(file));
}

std::string dump_tokens(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& t : tokens) {
        out += token_kind_name(t.kind);
        out += '\t';
        out += t.lexeme;
        out += '\t';
        out += std::to_string(t.span.line);
        out += ':';
        out += std::to_string(t.span.col);
        out += '\n';
    }
    return out;
}

} // namespace phoenix
