#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "phoenix/ast.hpp"
#include "phoenix/source.hpp"

namespace phoenix {

enum class SymbolKind : uint8_t {
    Variable,
    Array,
    Object,
    Function,
    Class,
    Parameter,
};

std::string_view symbol_kind_name(SymbolKind kind);

struct Symbol {
    std::string name;
    SymbolKind kind = SymbolKind::Variable;
    ValueType type = ValueType::None; // data symbols; Object for object vars
    Span decl_span;
    uint32_t scope_id = 0;
    bool is_global = false;

    // objects: the class
    const Symbol* class_sym = nullptr;

    // arrays: declared length
    uint32_t array_len = 0;

    // class members
    Access access = Access::Public;
    const Symbol* owner_class = nullptr;

    // functions
    std::vector<ValueType> param_types;
    ReturnType return_type = ReturnType::Num;
    const FunctionDecl* decl = nullptr;
    uint16_t local_slot_count = 0; // params included; object slot included for methods

    // classes
    const ClassDecl* class_decl = nullptr;
    std::vector<Symbol*> fields;  // declaration order
    std::vector<Symbol*> methods; // declaration order

    // usage and placement
    bool used = false; // read at least once
    int32_t slot = -1; // local slot / global index / field index / function index / class index
};

// Owns every Symbol of one checked program; pointers stay valid for the
// lifetime of the store.
class SymbolStore {
public:
    Symbol* create() { return &arena_.emplace_back(); }
    size_t size() const { return arena_.size(); }

private:
    std::deque<Symbol> arena_;
};

// Chain of lexical scopes, innermost last. Iteration order within a scope
// is insertion order; resolution walks innermost to outermost.
class ScopeStack {
public:
    uint32_t push();
    void pop();
    uint32_t current_id() const;

    // Returns nullptr if the name is already taken in the current scope.
    Symbol* declare(SymbolStore& store, const std::string& name);

    // Inserts an existing symbol into the current scope.
    void adopt(Symbol* sym);

    // Innermost symbol with the name, or nullptr.
    Symbol* resolve(const std::string& name) const;

    // Lookup restricted to the current scope (duplicate detection).
    Symbol* find_here(const std::string& name) const;

private:
    struct Scope {
        uint32_t id;
        std::vector<Symbol*> symbols;
    };
    std::vector<Scope> scopes_;
    uint32_t next_id_ = 0;
};

} // namespace phoenix
