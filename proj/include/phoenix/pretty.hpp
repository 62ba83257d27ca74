#pragma once

#include <string>

#include "phoenix/ast.hpp"

namespace phoenix {

// Canonical source form of a tree. Reparsing the result yields a tree
// with an identical dump, which is what the round-trip tests check.
std::string pretty_print(const Program& program);
std::string pretty_print(const FunctionDecl& fn);
std::string pretty_print(const Stmt& stmt);
std::string pretty_print(const Expr& expr);
std::string pretty_print(const BoolExpr& expr);

} // namespace phoenix
