#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phoenix/source.hpp"

namespace phoenix {

enum class TokenKind : uint8_t {
    // keywords
    KwNum,      // رقم
    KwStr,      // كلمة
    KwNumList,  // قائمة-رقم
    KwStrList,  // قائمة-كلمة
    KwFunc,     // وظيفة
    KwEndFunc,  // نهاية الوظيفة
    KwClass,    // صنف
    KwPublic,   // عام
    KwPrivate,  // خاص
    KwIf,       // إذا
    KwElse,     // أما عدا ذلك
    KwWhile,    // كرر
    KwShow,     // أعرض
    KwInput,    // أدخل
    KwCall,     // إستدعاء
    KwReturn,   // عودة
    KwEntry,    // البداية

    // literals and names
    Num,
    String,
    Ident,

    // operators
    Plus,
    Minus,
    Mul,    // × or *
    Div,    // ÷ or /
    Mod,
    Concat, // &
    Assign, // =
    Eq,
    Neq,
    Lt,
    Gt,
    Le,
    Ge,
    And,
    Or,

    // punctuation
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,

    Eof,
};

std::string_view token_kind_name(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Eof;
    std::string lexeme;    // normalized skeleton for keywords/identifiers
    double num_value = 0;  // Num only
    std::string str_value; // String only, without the quotes
    Span span;

    bool is(TokenKind k) const { return kind == k; }
};

// A keyword entry: the canonical lexeme and its word skeletons with the
// joiners between them (' ' for space-joined, '-' for hyphen-joined).
struct KeywordEntry {
    TokenKind kind;
    std::string lexeme;               // canonical form, e.g. "نهاية الوظيفة"
    std::vector<std::string> words;   // bare skeletons, e.g. {"نهاية","الوظيفة"}
    std::vector<char32_t> joiners;    // size = words.size() - 1
};

const std::vector<KeywordEntry>& keyword_table();

// Single-word keyword lookup by skeleton; multi-word resolution is the
// lexer's compound rule.
std::optional<TokenKind> single_word_keyword(std::string_view skeleton);

bool is_type_keyword(TokenKind kind);

} // namespace phoenix
