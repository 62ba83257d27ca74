#include "phoenix/parser.hpp"

#include <cmath>

namespace phoenix {

namespace {

constexpr int kMaxNestingDepth = 200;

TypeName type_from_token(TokenKind kind) {
    switch (kind) {
    case TokenKind::KwNum: return TypeName::Num;
    case TokenKind::KwStr: return TypeName::Str;
    case TokenKind::KwNumList: return TypeName::NumList;
    case TokenKind::KwStrList: return TypeName::StrList;
    default: return TypeName::Num;
    }
}

bool is_relop(TokenKind kind) {
    switch (kind) {
    case TokenKind::Eq:
    case TokenKind::Neq:
    case TokenKind::Lt:
    case TokenKind::Gt:
    case TokenKind::Le:
    case TokenKind::Ge:
        return true;
    default: return false;
    }
}

CmpOp cmp_from_token(TokenKind kind) {
    switch (kind) {
    case TokenKind::Eq: return CmpOp::Eq;
    case TokenKind::Neq: return CmpOp::Ne;
    case TokenKind::Lt: return CmpOp::Lt;
    case TokenKind::Gt: return CmpOp::Gt;
    case TokenKind::Le: return CmpOp::Le;
    default: return CmpOp::Ge;
    }
}

ExprPtr make_expr(Span span) {
    auto e = std::make_unique<Expr>();
    e->span = span;
    return e;
}

} // namespace

struct Parser::DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
        if (++parser.depth_ > kMaxNestingDepth)
            parser.fail("E-PAR-007", "nesting too deep", parser.peek());
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
};

Parser::Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) {
        Token eof;
        eof.kind = TokenKind::Eof;
        tokens_.push_back(eof);
    }
}

const Token& Parser::peek(size_t ahead) const {
    const size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

const Token& Parser::advance() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

bool Parser::check(TokenKind kind) const { return peek().kind == kind; }

bool Parser::match(TokenKind kind) {
    if (!check(kind)) return false;
    advance();
    return true;
}

const Token& Parser::expect(TokenKind kind, const char* code, const std::string& what) {
    if (!check(kind)) fail(code, "expected " + what, peek());
    return advance();
}

void Parser::fail(const char* code, const std::string& message, const Token& at) const {
    Diagnostic d;
    d.severity = Severity::Error;
    d.phase = Phase::Parse;
    d.code = code;
    d.message = message + ", found " + std::string(token_kind_name(at.kind)) +
                (at.lexeme.empty() ? "" : " '" + at.lexeme + "'");
    d.span = at.span;
    throw CompileError{std::move(d)};
}

Program Parser::parse_program() {
    Program program;
    while (!check(TokenKind::Eof)) {
        Item item;
        if (check(TokenKind::KwFunc)) {
            item.node = parse_function_decl();
        } else if (check(TokenKind::KwClass)) {
            item.node = parse_class_decl();
        } else if (is_type_keyword(peek().kind) ||
                   (check(TokenKind::Ident) && peek(1).kind == TokenKind::Ident)) {
            item.node = parse_declaration_stmt();
        } else {
            fail("E-PAR-001", "expected a function, class, or declaration", peek());
        }
        program.items.push_back(std::move(item));
    }
    return program;
}

std::unique_ptr<FunctionDecl> Parser::parse_function_decl() {
    auto fn = std::make_unique<FunctionDecl>();
    const Token& kw = expect(TokenKind::KwFunc, "E-PAR-001", "وظيفة");
    fn->span = kw.span;
    fn->name = expect(TokenKind::Ident, "E-PAR-001", "function name").lexeme;
    expect(TokenKind::LParen, "E-PAR-004", "'('");
    if (match(TokenKind::Minus)) {
        // (-) empty parameter list
    } else if (check(TokenKind::RParen)) {
        fail("E-PAR-004", "empty parameter list must be written (-)", peek());
    } else {
        while (true) {
            if (!is_type_keyword(peek().kind))
                fail("E-PAR-004", "expected a parameter type", peek());
            Param p;
            p.type = type_from_token(advance().kind);
            const Token& name = expect(TokenKind::Ident, "E-PAR-004", "parameter name");
            p.name = name.lexeme;
            p.span = name.span;
            fn->params.push_back(std::move(p));
            if (!match(TokenKind::Comma)) break;
        }
    }
    expect(TokenKind::RParen, "E-PAR-004", "')'");
    expect(TokenKind::Colon, "E-PAR-001", "':' before the return type");
    const Token& rt = peek();
    switch (rt.kind) {
    case TokenKind::KwNum: fn->return_type = ReturnType::Num; break;
    case TokenKind::KwStr: fn->return_type = ReturnType::Str; break;
    case TokenKind::KwNumList: fn->return_type = ReturnType::NumList; break;
    case TokenKind::KwStrList: fn->return_type = ReturnType::StrList; break;
    case TokenKind::KwEntry: fn->return_type = ReturnType::Entry; break;
    default: fail("E-PAR-001", "expected a return type", rt);
    }
    advance();
    fn->body = parse_block();
    if (!check(TokenKind::KwEndFunc))
        fail("E-PAR-003", "expected نهاية الوظيفة after the function body", peek());
    const Token& end = advance();
    fn->span = span_merge(fn->span, end.span);
    return fn;
}

std::unique_ptr<ClassDecl> Parser::parse_class_decl() {
    auto cls = std::make_unique<ClassDecl>();
    const Token& kw = expect(TokenKind::KwClass, "E-PAR-001", "صنف");
    cls->span = kw.span;
    cls->name = expect(TokenKind::Ident, "E-PAR-001", "class name").lexeme;
    expect(TokenKind::LBrace, "E-PAR-001", "'{'");
    while (!check(TokenKind::RBrace)) {
        ClassMember member;
        if (check(TokenKind::KwPublic)) {
            member.access = Access::Public;
        } else if (check(TokenKind::KwPrivate)) {
            member.access = Access::Private;
        } else {
            fail("E-PAR-001", "expected عام or خاص before a class member", peek());
        }
        member.span = advance().span;
        if (check(TokenKind::KwFunc)) {
            member.method = parse_function_decl();
            member.span = span_merge(member.span, member.method->span);
        } else {
            member.field = parse_declaration_stmt();
            member.span = span_merge(member.span, member.field->span);
        }
        cls->members.push_back(std::move(member));
    }
    const Token& rb = advance();
    cls->span = span_merge(cls->span, rb.span);
    return cls;
}

Block Parser::parse_block() {
    DepthGuard guard(*this);
    Block block;
    const Token& lb = expect(TokenKind::LBrace, "E-PAR-001", "'{'");
    block.span = lb.span;
    while (!check(TokenKind::RBrace)) {
        if (check(TokenKind::Eof))
            fail("E-PAR-001", "expected '}' before end of file", peek());
        block.stmts.push_back(parse_statement());
    }
    const Token& rb = advance();
    block.span = span_merge(block.span, rb.span);
    return block;
}

StmtPtr Parser::parse_statement() {
    DepthGuard guard(*this);
    switch (peek().kind) {
    case TokenKind::KwNum:
    case TokenKind::KwStr:
    case TokenKind::KwNumList:
    case TokenKind::KwStrList:
        return parse_declaration_stmt();
    case TokenKind::KwIf: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        expect(TokenKind::Colon, "E-PAR-001", "':' after إذا");
        IfStmt node;
        node.cond = parse_bool_expression();
        node.then_block = parse_block();
        Span span = span_merge(kw.span, node.then_block.span);
        if (match(TokenKind::KwElse)) {
            node.else_block = parse_block();
            span = span_merge(span, node.else_block->span);
        }
        stmt->node = std::move(node);
        stmt->span = span;
        return stmt;
    }
    case TokenKind::KwWhile: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        expect(TokenKind::Colon, "E-PAR-001", "':' after كرر");
        WhileStmt node;
        node.cond = parse_bool_expression();
        node.body = parse_block();
        stmt->span = span_merge(kw.span, node.body.span);
        stmt->node = std::move(node);
        return stmt;
    }
    case TokenKind::KwShow: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        expect(TokenKind::Colon, "E-PAR-001", "':' after أعرض");
        ShowStmt node;
        node.value = parse_expression();
        const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
        stmt->span = span_merge(kw.span, semi.span);
        stmt->node = std::move(node);
        return stmt;
    }
    case TokenKind::KwInput: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        expect(TokenKind::Colon, "E-PAR-001", "':' after أدخل");
        InputStmt node;
        node.target = parse_lvalue();
        expect(TokenKind::Comma, "E-PAR-001", "',' between the target and the prompt");
        const Token& prompt = expect(TokenKind::String, "E-PAR-001", "a prompt string");
        node.prompt = prompt.str_value;
        node.prompt_span = prompt.span;
        const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
        stmt->span = span_merge(kw.span, semi.span);
        stmt->node = std::move(node);
        return stmt;
    }
    case TokenKind::KwCall: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        expect(TokenKind::Colon, "E-PAR-001", "':' after إستدعاء");
        CallStmt node;
        parse_call_tail(node.call);
        const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
        stmt->span = span_merge(kw.span, semi.span);
        stmt->node = std::move(node);
        return stmt;
    }
    case TokenKind::KwReturn: {
        auto stmt = std::make_unique<Stmt>();
        const Token& kw = advance();
        ReturnStmt node;
        if (match(TokenKind::Semi)) {
            stmt->span = kw.span;
        } else {
            expect(TokenKind::Colon, "E-PAR-001", "':' after عودة");
            node.value = parse_expression();
            const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
            stmt->span = span_merge(kw.span, semi.span);
        }
        stmt->node = std::move(node);
        return stmt;
    }
    case TokenKind::Ident:
        if (peek(1).kind == TokenKind::Ident) return parse_object_decl();
        return parse_assignment();
    default:
        fail("E-PAR-001", "expected a statement", peek());
    }
}

StmtPtr Parser::parse_declaration_stmt() {
    if (check(TokenKind::Ident)) return parse_object_decl();
    auto stmt = std::make_unique<Stmt>();
    const Token& type_tok = advance();
    const TypeName type = type_from_token(type_tok.kind);
    const Token& name = expect(TokenKind::Ident, "E-PAR-001", "a name to declare");

    if (type == TypeName::Num || type == TypeName::Str) {
        VarDecl node;
        node.type = type;
        node.name = name.lexeme;
        expect(TokenKind::Assign, "E-PAR-001", "'=' with an initializer");
        node.init = parse_literal();
        const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
        stmt->span = span_merge(type_tok.span, semi.span);
        stmt->node = std::move(node);
        return stmt;
    }

    ArrayDecl node;
    node.type = type;
    node.name = name.lexeme;
    expect(TokenKind::LBracket, "E-PAR-001", "'[' with the array size");
    const Token& size_tok = expect(TokenKind::Num, "E-PAR-006", "an array size literal");
    if (size_tok.num_value != std::floor(size_tok.num_value) ||
        size_tok.num_value < 0 || size_tok.num_value > 65535) {
        fail("E-PAR-006", "array size must be an integer in 0..65535", size_tok);
    }
    node.size = static_cast<uint32_t>(size_tok.num_value);
    expect(TokenKind::RBracket, "E-PAR-001", "']'");
    if (match(TokenKind::Assign)) {
        node.has_init = true;
        expect(TokenKind::LBrace, "E-PAR-001", "'{' opening the initializer list");
        if (!check(TokenKind::RBrace)) {
            while (true) {
                node.init.push_back(parse_literal());
                if (!match(TokenKind::Comma)) break;
            }
        }
        const Token& rb = expect(TokenKind::RBrace, "E-PAR-001", "'}'");
        if (node.init.size() != node.size) {
            fail("E-PAR-006",
                 "array initializer has " + std::to_string(node.init.size()) +
                     " values for declared size " + std::to_string(node.size),
                 rb);
        }
    }
    const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
    stmt->span = span_merge(type_tok.span, semi.span);
    stmt->node = std::move(node);
    return stmt;
}

StmtPtr Parser::parse_object_decl() {
    auto stmt = std::make_unique<Stmt>();
    const Token& cls = expect(TokenKind::Ident, "E-PAR-001", "a class name");
    const Token& name = expect(TokenKind::Ident, "E-PAR-001", "an object name");
    ObjectDecl node;
    node.class_name = cls.lexeme;
    node.name = name.lexeme;
    const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
    stmt->span = span_merge(cls.span, semi.span);
    stmt->node = std::move(node);
    return stmt;
}

LValue Parser::parse_lvalue() {
    LValue lv;
    const Token& name = expect(TokenKind::Ident, "E-PAR-001", "a variable name");
    lv.name = name.lexeme;
    lv.span = name.span;
    if (match(TokenKind::LBracket)) {
        lv.kind = LValue::Kind::Index;
        lv.index = parse_expression();
        const Token& rb = expect(TokenKind::RBracket, "E-PAR-001", "']'");
        lv.span = span_merge(lv.span, rb.span);
    } else if (match(TokenKind::Dot)) {
        lv.kind = LValue::Kind::Field;
        const Token& field = expect(TokenKind::Ident, "E-PAR-001", "a field name");
        lv.field = field.lexeme;
        lv.span = span_merge(lv.span, field.span);
    }
    return lv;
}

StmtPtr Parser::parse_assignment() {
    auto stmt = std::make_unique<Stmt>();
    AssignStmt node;
    node.target = parse_lvalue();
    expect(TokenKind::Assign, "E-PAR-001", "'='");
    node.value = parse_expression();
    const Token& semi = expect(TokenKind::Semi, "E-PAR-002", "';'");
    stmt->span = span_merge(node.target.span, semi.span);
    stmt->node = std::move(node);
    return stmt;
}

ExprPtr Parser::parse_literal() {
    const Token& t = peek();
    if (t.kind == TokenKind::Num || t.kind == TokenKind::String)
        return parse_primary();
    if ((t.kind == TokenKind::Plus || t.kind == TokenKind::Minus) &&
        peek(1).kind == TokenKind::Num) {
        return parse_unary();
    }
    fail("E-PAR-001", "expected a literal initializer", t);
}

// ---- expressions ----

ExprPtr Parser::parse_expression() {
    DepthGuard guard(*this);
    return parse_concat();
}

ExprPtr Parser::parse_concat() {
    ExprPtr lhs = parse_additive();
    while (check(TokenKind::Concat)) {
        advance();
        ExprPtr rhs = parse_additive();
        auto e = make_expr(span_merge(lhs->span, rhs->span));
        e->node = BinaryExpr{BinOp::Concat, std::move(lhs), std::move(rhs)};
        lhs = std::move(e);
    }
    return lhs;
}

ExprPtr Parser::parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
        const BinOp op = advance().kind == TokenKind::Plus ? BinOp::Add : BinOp::Sub;
        ExprPtr rhs = parse_multiplicative();
        auto e = make_expr(span_merge(lhs->span, rhs->span));
        e->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
        lhs = std::move(e);
    }
    return lhs;
}

ExprPtr Parser::parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (check(TokenKind::Mul) || check(TokenKind::Div) || check(TokenKind::Mod)) {
        BinOp op = BinOp::Mul;
        if (peek().kind == TokenKind::Div) op = BinOp::Div;
        if (peek().kind == TokenKind::Mod) op = BinOp::Mod;
        advance();
        ExprPtr rhs = parse_unary();
        auto e = make_expr(span_merge(lhs->span, rhs->span));
        e->node = BinaryExpr{op, std::move(lhs), std::move(rhs)};
        lhs = std::move(e);
    }
    return lhs;
}

ExprPtr Parser::parse_unary() {
    DepthGuard guard(*this);
    if (check(TokenKind::Plus) || check(TokenKind::Minus)) {
        const Token& op_tok = advance();
        const UnOp op = op_tok.kind == TokenKind::Plus ? UnOp::Plus : UnOp::Minus;
        ExprPtr operand = parse_unary();
        auto e = make_expr(span_merge(op_tok.span, operand->span));
        e->node = UnaryExpr{op, std::move(operand)};
        return e;
    }
    return parse_primary();
}

ExprPtr Parser::parse_primary() {
    DepthGuard guard(*this);
    const Token& t = peek();
    switch (t.kind) {
    case TokenKind::Num: {
        advance();
        auto e = make_expr(t.span);
        e->node = NumLit{t.num_value};
        return e;
    }
    case TokenKind::String: {
        advance();
        auto e = make_expr(t.span);
        e->node = StrLit{t.str_value};
        return e;
    }
    case TokenKind::Ident: {
        advance();
        if (match(TokenKind::LBracket)) {
            IndexRef node;
            node.name = t.lexeme;
            node.index = parse_expression();
            const Token& rb = expect(TokenKind::RBracket, "E-PAR-001", "']'");
            auto e = make_expr(span_merge(t.span, rb.span));
            e->node = std::move(node);
            return e;
        }
        if (match(TokenKind::Dot)) {
            const Token& field = expect(TokenKind::Ident, "E-PAR-001", "a field name");
            auto e = make_expr(span_merge(t.span, field.span));
            e->node = FieldRef{t.lexeme, field.lexeme, nullptr, nullptr};
            return e;
        }
        auto e = make_expr(t.span);
        e->node = NameRef{t.lexeme, nullptr};
        return e;
    }
    case TokenKind::LParen: {
        advance();
        ExprPtr inner = parse_expression();
        expect(TokenKind::RParen, "E-PAR-001", "')'");
        return inner; // grouping only; precedence is structural
    }
    case TokenKind::KwCall: {
        advance();
        CallExpr node;
        parse_call_tail(node);
        auto e = make_expr(span_merge(t.span, tokens_[pos_ - 1].span));
        e->node = std::move(node);
        return e;
    }
    default:
        fail("E-PAR-001", "expected an expression", t);
    }
}

void Parser::parse_call_tail(CallExpr& call) {
    const Token& first = expect(TokenKind::Ident, "E-PAR-001", "a callee name");
    if (match(TokenKind::Dot)) {
        call.base = first.lexeme;
        call.name = expect(TokenKind::Ident, "E-PAR-001", "a method name").lexeme;
    } else {
        call.name = first.lexeme;
    }
    expect(TokenKind::LParen, "E-PAR-001", "'('");
    if (check(TokenKind::Minus) && peek(1).kind == TokenKind::RParen) {
        advance(); // (-) empty argument list; a lone '-' before ')' is the
                   // marker, anything else after '-' is a unary expression
    } else if (check(TokenKind::RParen)) {
        fail("E-PAR-001", "empty argument list must be written (-)", peek());
    } else {
        while (true) {
            call.args.push_back(parse_expression());
            if (!match(TokenKind::Comma)) break;
        }
    }
    expect(TokenKind::RParen, "E-PAR-001", "')'");
}

// ---- boolean expressions ----

BoolExprPtr Parser::parse_bool_expression() {
    DepthGuard guard(*this);
    return parse_or();
}

BoolExprPtr Parser::parse_or() {
    BoolExprPtr lhs = parse_and();
    while (match(TokenKind::Or)) {
        BoolExprPtr rhs = parse_and();
        auto e = std::make_unique<BoolExpr>();
        e->span = span_merge(lhs->span, rhs->span);
        e->node = OrNode{std::move(lhs), std::move(rhs)};
        lhs = std::move(e);
    }
    return lhs;
}

BoolExprPtr Parser::parse_and() {
    BoolExprPtr lhs = parse_atom();
    while (match(TokenKind::And)) {
        BoolExprPtr rhs = parse_atom();
        auto e = std::make_unique<BoolExpr>();
        e->span = span_merge(lhs->span, rhs->span);
        e->node = AndNode{std::move(lhs), std::move(rhs)};
        lhs = std::move(e);
    }
    return lhs;
}

BoolExprPtr Parser::parse_atom() {
    DepthGuard guard(*this);
    if (check(TokenKind::LParen)) {
        // Either a parenthesized boolean or a parenthesized arithmetic
        // operand of a comparison. Try the boolean reading first; on
        // failure rewind and parse a comparison. The further error wins.
        const size_t saved = pos_;
        const Token& lp = peek();
        try {
            advance();
            BoolExprPtr inner = parse_or();
            const Token& rp = expect(TokenKind::RParen, "E-PAR-001", "')'");
            auto e = std::make_unique<BoolExpr>();
            e->span = span_merge(lp.span, rp.span);
            e->node = ParenNode{std::move(inner)};
            return e;
        } catch (CompileError& bool_err) {
            const size_t bool_pos = pos_;
            pos_ = saved;
            try {
                return parse_atom_comparison();
            } catch (CompileError& cmp_err) {
                throw pos_ >= bool_pos ? cmp_err : bool_err;
            }
        }
    }
    return parse_atom_comparison();
}

BoolExprPtr Parser::parse_atom_comparison() {
    ExprPtr lhs = parse_expression();
    if (!is_relop(peek().kind)) {
        fail("E-PAR-005", "comparison requires a relational operator", peek());
    }
    const CmpOp op = cmp_from_token(advance().kind);
    ExprPtr rhs = parse_expression();
    auto e = std::make_unique<BoolExpr>();
    e->span = span_merge(lhs->span, rhs->span);
    e->node = CmpNode{op, std::move(lhs), std::move(rhs)};
    return e;
}

Program parse_program(std::vector<Token> tokens) {
    Parser parser(std::move(tokens));
    return parser.parse_program();
}

} // namespace phoenix
