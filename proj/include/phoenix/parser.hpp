#pragma once

#include <vector>

#include "phoenix/ast.hpp"
#include "phoenix/token.hpp"

namespace phoenix {

// Recursive-descent parser. Stops at the first syntax error by throwing
// CompileError; no recovery, no partial trees.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens);

    Program parse_program();

    // Entry points used by tests.
    ExprPtr parse_expression();
    BoolExprPtr parse_bool_expression();
    std::unique_ptr<FunctionDecl> parse_function_decl();
    StmtPtr parse_statement();

private:
    const Token& peek(size_t ahead = 0) const;
    const Token& advance();
    bool check(TokenKind kind) const;
    bool match(TokenKind kind);
    const Token& expect(TokenKind kind, const char* code, const std::string& what);

    [[noreturn]] void fail(const char* code, const std::string& message,
                           const Token& at) const;

    StmtPtr parse_declaration_stmt();
    StmtPtr parse_object_decl();
    StmtPtr parse_assignment();
    LValue parse_lvalue();
    ExprPtr parse_literal();
    Block parse_block();
    std::unique_ptr<ClassDecl> parse_class_decl();

    ExprPtr parse_concat();
    ExprPtr parse_additive();
    ExprPtr parse_multiplicative();
    ExprPtr parse_unary();
    ExprPtr parse_primary();
    void parse_call_tail(CallExpr& call); // callee ( args | - )

    BoolExprPtr parse_or();
    BoolExprPtr parse_and();
    BoolExprPtr parse_atom();
    BoolExprPtr parse_atom_comparison();

    struct DepthGuard;
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    int depth_ = 0;
};

// Parses a full token stream into a Program.
Program parse_program(std::vector<Token> tokens);

// Deterministic indented AST dump: one node per line, `NodeKind key=value`.
// Structural only (no spans): two trees are equal iff their dumps are.
std::string dump_ast(const Program& program);
std::string dump_ast(const Expr& expr);
std::string dump_ast(const BoolExpr& expr);

} // namespace phoenix
