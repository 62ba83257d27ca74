#pragma once

#include <memory>
#include <vector>

#include "phoenix/ast.hpp"
#include "phoenix/symbols.hpp"

namespace phoenix {

struct CheckOptions {
    // Remove variables that are never read (their writes included) and
    // report each removal as W-SEM-001.
    bool eliminate_unused = true;
};

// A checked program: the AST annotated with symbol links, expression types
// and string-conversion markers, plus the tables the generator walks.
struct TypedProgram {
    Program program;
    std::unique_ptr<SymbolStore> symbols;
    std::vector<Symbol*> globals;   // surviving globals, declaration order
    std::vector<Symbol*> functions; // index order: free functions and methods
    std::vector<Symbol*> classes;   // declaration order
    Symbol* entry = nullptr;
};

struct CheckResult {
    TypedProgram typed;
    std::vector<Diagnostic> diagnostics; // errors and warnings, source order
    bool ok = false;                     // true when nothing is an error
};

// Runs the checking passes in order: declarations, name resolution,
// call checking, type checking, unused-variable elimination, slot
// assignment. A pass that reports errors stops the pipeline.
CheckResult check_program(Program program, const CheckOptions& opts = {});

} // namespace phoenix
