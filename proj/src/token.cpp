#include "phoenix/token.hpp"

namespace phoenix {

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
    case TokenKind::KwNum: return "KW_NUM";
    case TokenKind::KwStr: return "KW_STR";
    case TokenKind::KwNumList: return "KW_NUMLIST";
    case TokenKind::KwStrList: return "KW_STRLIST";
    case TokenKind::KwFunc: return "KW_FUNC";
    case TokenKind::KwEndFunc: return "KW_ENDFUNC";
    case TokenKind::KwClass: return "KW_CLASS";
    case TokenKind::KwPublic: return "KW_PUBLIC";
    case TokenKind::KwPrivate: return "KW_PRIVATE";
    case TokenKind::KwIf: return "KW_IF";
    case TokenKind::KwElse: return "KW_ELSE";
    case TokenKind::KwWhile: return "KW_WHILE";
    case TokenKind::KwShow: return "KW_SHOW";
    case TokenKind::KwInput: return "KW_INPUT";
    case TokenKind::KwCall: return "KW_CALL";
    case TokenKind::KwReturn: return "KW_RETURN";
    case TokenKind::KwEntry: return "KW_ENTRY";
    case TokenKind::Num: return "NUM";
    case TokenKind::String: return "STRING";
    case TokenKind::Ident: return "IDENT";
    case TokenKind::Plus: return "PLUS";
    case TokenKind::Minus: return "MINUS";
    case TokenKind::Mul: return "MUL";
    case TokenKind::Div: return "DIV";
    case TokenKind::Mod: return "MOD";
    case TokenKind::Concat: return "CONCAT";
    case TokenKind::Assign: return "ASSIGN";
    case TokenKind::Eq: return "EQ";
    case TokenKind::Neq: return "NEQ";
    case TokenKind::Lt: return "LT";
    case TokenKind::Gt: return "GT";
    case TokenKind::Le: return "LE";
    case TokenKind::Ge: return "GE";
    case TokenKind::And: return "AND";
    case TokenKind::Or: return "OR";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::LBrace: return "LBRACE";
    case TokenKind::RBrace: return "RBRACE";
    case TokenKind::LBracket: return "LBRACKET";
    case TokenKind::RBracket: return "RBRACKET";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::Semi: return "SEMI";
    case TokenKind::Colon: return "COLON";
    case TokenKind::Dot: return "DOT";
    case TokenKind::Eof: return "EOF";
    }
    return "UNKNOWN";
}

namespace {

KeywordEntry make_entry(TokenKind kind, std::vector<std::string> words,
                        std::vector<char32_t> joiners) {
    KeywordEntry e;
    e.kind = kind;
    e.words = std::move(words);
    e.joiners = std::move(joiners);
    for (size_t i = 0; i < e.words.size(); ++i) {
        if (i > 0) e.lexeme += utf8_encode(e.joiners[i - 1]);
        e.lexeme += e.words[i];
    }
    return e;
}

std::vector<KeywordEntry> build_keyword_table() {
    std::vector<KeywordEntry> t;
    t.push_back(make_entry(TokenKind::KwNum, {"رقم"}, {}));
    t.push_back(make_entry(TokenKind::KwStr, {"كلمة"}, {}));
    t.push_back(make_entry(TokenKind::KwNumList, {"قائمة", "رقم"}, {U'-'}));
    t.push_back(make_entry(TokenKind::KwStrList, {"قائمة", "كلمة"}, {U'-'}));
    t.push_back(make_entry(TokenKind::KwFunc, {"وظيفة"}, {}));
    t.push_back(make_entry(TokenKind::KwEndFunc, {"نهاية", "الوظيفة"}, {U' '}));
    t.push_back(make_entry(TokenKind::KwClass, {"صنف"}, {}));
    t.push_back(make_entry(TokenKind::KwPublic, {"عام"}, {}));
    t.push_back(make_entry(TokenKind::KwPrivate, {"خاص"}, {}));
    t.push_back(make_entry(TokenKind::KwIf, {"إذا"}, {}));
    t.push_back(make_entry(TokenKind::KwElse, {"أما", "عدا", "ذلك"}, {U' ', U' '}));
    t.push_back(make_entry(TokenKind::KwWhile, {"كرر"}, {}));
    t.push_back(make_entry(TokenKind::KwShow, {"أعرض"}, {}));
    t.push_back(make_entry(TokenKind::KwInput, {"أدخل"}, {}));
    t.push_back(make_entry(TokenKind::KwCall, {"إستدعاء"}, {}));
    t.push_back(make_entry(TokenKind::KwReturn, {"عودة"}, {}));
    t.push_back(make_entry(TokenKind::KwEntry, {"البداية"}, {}));
    return t;
}

} // namespace

const std::vector<KeywordEntry>& keyword_table() {
    static const std::vector<KeywordEntry> table = build_keyword_table();
    return table;
}

std::optional<TokenKind> single_word_keyword(std::string_view skeleton) {
    for (const auto& e : keyword_table()) {
        if (e.words.size() == 1 && e.words[0] == skeleton) return e.kind;
    }
    return std::nullopt;
}

bool is_type_keyword(TokenKind kind) {
    return kind == TokenKind::KwNum || kind == TokenKind::KwStr ||
           kind == TokenKind::KwNumList || kind == TokenKind::KwStrList;
}

} // namespace phoenix
