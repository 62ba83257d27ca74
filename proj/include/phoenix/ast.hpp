#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phoenix/source.hpp"

namespace phoenix {

struct Symbol; // defined in symbols.hpp; the checker fills the links below

// Declared types as written in source.
enum class TypeName : uint8_t { Num, Str, NumList, StrList };

// Function return types; Entry marks the program entry point.
enum class ReturnType : uint8_t { Num, Str, NumList, StrList, Entry };

// Checked type of an expression.
enum class ValueType : uint8_t { None, Num, Str, NumList, StrList, Object };

enum class BinOp : uint8_t { Add, Sub, Mul, Div, Mod, Concat };
enum class UnOp : uint8_t { Plus, Minus };
enum class CmpOp : uint8_t { Eq, Ne, Lt, Gt, Le, Ge };
enum class Access : uint8_t { Public, Private };

std::string_view type_name_lexeme(TypeName t);     // رقم, كلمة, ...
std::string_view return_type_lexeme(ReturnType t); // incl. البداية
std::string_view bin_op_lexeme(BinOp op);
std::string_view cmp_op_lexeme(CmpOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;
struct BoolExpr;
using BoolExprPtr = std::unique_ptr<BoolExpr>;
struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
struct FunctionDecl;

struct NumLit {
    double value = 0;
};

struct StrLit {
    std::string value;
};

// A bare name in expression position: variable, parameter, or an array
// passed as a call argument.
struct NameRef {
    std::string name;
    const Symbol* sym = nullptr;
};

struct IndexRef {
    std::string name;
    ExprPtr index;
    const Symbol* sym = nullptr;
};

// object.field — one level deep; base may itself be a field of the
// enclosing class resolved through scope.
struct FieldRef {
    std::string base;
    std::string field;
    const Symbol* base_sym = nullptr;
    const Symbol* field_sym = nullptr;
};

struct UnaryExpr {
    UnOp op;
    ExprPtr operand;
};

struct BinaryExpr {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};

// إستدعاء callee(args) in expression position; base names the receiver
// object for method calls and is empty for plain function calls.
struct CallExpr {
    std::string base;
    std::string name;
    std::vector<ExprPtr> args;
    const Symbol* base_sym = nullptr;
    const Symbol* fn_sym = nullptr;
};

struct Expr {
    std::variant<NumLit, StrLit, NameRef, IndexRef, FieldRef, UnaryExpr,
                 BinaryExpr, CallExpr>
        node;
    Span span;
    // checker annotations
    ValueType type = ValueType::None;
    bool convert_to_str = false; // NUM_TO_STR inserted above this expression
};

struct CmpNode {
    CmpOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct AndNode {
    BoolExprPtr lhs;
    BoolExprPtr rhs;
};
struct OrNode {
    BoolExprPtr lhs;
    BoolExprPtr rhs;
};
struct ParenNode {
    BoolExprPtr inner;
};

struct BoolExpr {
    std::variant<CmpNode, AndNode, OrNode, ParenNode> node;
    Span span;
};

struct Block {
    std::vector<StmtPtr> stmts;
    Span span;
};

// Assignment / input target.
struct LValue {
    enum class Kind : uint8_t { Name, Index, Field };
    Kind kind = Kind::Name;
    std::string name;  // variable name, or the base object for Field
    std::string field; // Field only
    ExprPtr index;     // Index only
    Span span;
    const Symbol* sym = nullptr;
    const Symbol* field_sym = nullptr;
};

struct VarDecl {
    TypeName type;
    std::string name;
    ExprPtr init; // literal: NumLit, StrLit, or signed NumLit
    const Symbol* sym = nullptr;
};

struct ArrayDecl {
    TypeName type; // NumList or StrList
    std::string name;
    uint32_t size = 0;
    bool has_init = false;
    std::vector<ExprPtr> init; // literals, length == size when present
    const Symbol* sym = nullptr;
};

struct ObjectDecl {
    std::string class_name;
    std::string name;
    const Symbol* sym = nullptr;
    const Symbol* class_sym = nullptr;
};

struct AssignStmt {
    LValue target;
    ExprPtr value;
};

struct IfStmt {
    BoolExprPtr cond;
    Block then_block;
    std::optional<Block> else_block;
};

struct WhileStmt {
    BoolExprPtr cond;
    Block body;
};

struct ShowStmt {
    ExprPtr value;
};

struct InputStmt {
    LValue target;
    std::string prompt;
    Span prompt_span;
};

struct CallStmt {
    CallExpr call;
};

struct ReturnStmt {
    ExprPtr value; // null for a bare عودة (entry early exit)
};

struct Stmt {
    std::variant<VarDecl, ArrayDecl, ObjectDecl, AssignStmt, IfStmt, WhileStmt,
                 ShowStmt, InputStmt, CallStmt, ReturnStmt>
        node;
    Span span;
};

struct Param {
    TypeName type;
    std::string name;
    Span span;
    const Symbol* sym = nullptr;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    ReturnType return_type = ReturnType::Num;
    Block body;
    Span span;
    const Symbol* sym = nullptr;
};

struct ClassMember {
    Access access = Access::Public;
    // exactly one of the two is set
    StmtPtr field; // VarDecl, ArrayDecl, or ObjectDecl
    std::unique_ptr<FunctionDecl> method;
    Span span;
};

struct ClassDecl {
    std::string name;
    std::vector<ClassMember> members;
    Span span;
    const Symbol* sym = nullptr;
};

struct Item {
    std::variant<std::unique_ptr<FunctionDecl>, StmtPtr, std::unique_ptr<ClassDecl>>
        node;
};

struct Program {
    std::vector<Item> items;
};

} // namespace phoenix
