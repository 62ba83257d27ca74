#include "phoenix/symbols.hpp"

namespace phoenix {

std::string_view symbol_kind_name(SymbolKind kind) {
    switch (kind) {
    case SymbolKind::Variable: return "variable";
    case SymbolKind::Array: return "array";
    case SymbolKind::Object: return "object";
    case SymbolKind::Function: return "function";
    case SymbolKind::Class: return "class";
    case SymbolKind::Parameter: return "parameter";
    }
    return "?";
}

uint32_t ScopeStack::push() {
    scopes_.push_back({next_id_++, {}});
    return scopes_.back().id;
}

void ScopeStack::pop() {
    scopes_.pop_back();
}

uint32_t ScopeStack::current_id() const {
    return scopes_.back().id;
}

Symbol* ScopeStack::declare(SymbolStore& store, const std::string& name) {
    if (find_here(name) != nullptr) {
        return nullptr;
    }
    Symbol* sym = store.create();
    sym->name = name;
    sym->scope_id = scopes_.back().id;
    scopes_.back().symbols.push_back(sym);
    return sym;
}

void ScopeStack::adopt(Symbol* sym) {
    scopes_.back().symbols.push_back(sym);
}

Symbol* ScopeStack::resolve(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        for (auto sit = it->symbols.rbegin(); sit != it->symbols.rend(); ++sit) {
            if ((*sit)->name == name) {
                return *sit;
            }
        }
    }
    return nullptr;
}

Symbol* ScopeStack::find_here(const std::string& name) const {
    const Scope& top = scopes_.back();
    for (Symbol* sym : top.symbols) {
        if (sym->name == name) {
            return sym;
        }
    }
    return nullptr;
}

} // namespace phoenix
