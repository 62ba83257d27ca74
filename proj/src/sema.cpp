#include "phoenix/sema.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace phoenix {

namespace {

ValueType value_type_of(TypeName t) {
    switch (t) {
    case TypeName::Num: return ValueType::Num;
    case TypeName::Str: return ValueType::Str;
    case TypeName::NumList: return ValueType::NumList;
    case TypeName::StrList: return ValueType::StrList;
    }
    return ValueType::None;
}

ValueType value_type_of(ReturnType t) {
    switch (t) {
    case ReturnType::Num: return ValueType::Num;
    case ReturnType::Str: return ValueType::Str;
    case ReturnType::NumList: return ValueType::NumList;
    case ReturnType::StrList: return ValueType::StrList;
    case ReturnType::Entry: return ValueType::None;
    }
    return ValueType::None;
}

std::string type_desc(ValueType t) {
    switch (t) {
    case ValueType::Num: return "رقم";
    case ValueType::Str: return "كلمة";
    case ValueType::NumList: return "قائمة-رقم";
    case ValueType::StrList: return "قائمة-كلمة";
    case ValueType::Object: return "object";
    case ValueType::None: return "?";
    }
    return "?";
}

bool is_scalar(ValueType t) {
    return t == ValueType::Num || t == ValueType::Str;
}

bool is_list(ValueType t) {
    return t == ValueType::NumList || t == ValueType::StrList;
}

ValueType element_type(ValueType t) {
    if (t == ValueType::NumList) return ValueType::Num;
    if (t == ValueType::StrList) return ValueType::Str;
    return ValueType::None;
}

bool is_data_kind(SymbolKind k) {
    return k == SymbolKind::Variable || k == SymbolKind::Array ||
           k == SymbolKind::Object;
}

Symbol* mut(const Symbol* sym) {
    return const_cast<Symbol*>(sym);
}

bool expr_contains_call(const Expr& e) {
    bool found = false;
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, CallExpr>) {
                found = true;
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                found = expr_contains_call(*node.operand);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                found = expr_contains_call(*node.lhs) ||
                        expr_contains_call(*node.rhs);
            } else if constexpr (std::is_same_v<T, IndexRef>) {
                found = expr_contains_call(*node.index);
            }
        },
        e.node);
    return found;
}

class Checker {
public:
    Checker(Program program, const CheckOptions& opts)
        : program_(std::move(program)), opts_(opts),
          store_(std::make_unique<SymbolStore>()) {}

    CheckResult run() {
        declare_toplevel();
        if (!has_errors()) resolve_all();
        if (!has_errors()) check_calls();
        if (!has_errors()) type_check_all();
        if (!has_errors() && opts_.eliminate_unused) eliminate_unused();
        if (!has_errors()) assign_slots();

        std::stable_sort(diags_.begin(), diags_.end(),
                         [](const Diagnostic& a, const Diagnostic& b) {
                             uint32_t sa = a.span ? a.span->start : 0;
                             uint32_t sb = b.span ? b.span->start : 0;
                             return sa < sb;
                         });

        CheckResult result;
        result.ok = !has_errors();
        result.diagnostics = std::move(diags_);
        result.typed.program = std::move(program_);
        result.typed.symbols = std::move(store_);
        result.typed.globals = std::move(globals_);
        result.typed.functions = std::move(functions_);
        result.typed.classes = std::move(classes_);
        result.typed.entry = entry_;
        return result;
    }

private:
    Program program_;
    CheckOptions opts_;
    std::unique_ptr<SymbolStore> store_;
    std::vector<Diagnostic> diags_;
    bool errors_seen_ = false;

    ScopeStack scopes_;
    std::vector<Symbol*> globals_;
    std::vector<Symbol*> functions_;
    std::vector<Symbol*> classes_;
    Symbol* entry_ = nullptr;

    Symbol* current_class_ = nullptr;
    Symbol* current_fn_ = nullptr;

    struct CallSite {
        CallExpr* call;
        Span span;
    };
    std::vector<CallSite> call_sites_;

    bool has_errors() const { return errors_seen_; }

    void error(std::string code, Span span, std::string msg) {
        diags_.push_back({Severity::Error, Phase::Semantic, std::move(code),
                          std::move(msg), span});
        errors_seen_ = true;
    }

    void error(std::string code, std::string msg) {
        diags_.push_back({Severity::Error, Phase::Semantic, std::move(code),
                          std::move(msg), std::nullopt});
        errors_seen_ = true;
    }

    void warn(std::string code, Span span, std::string msg) {
        diags_.push_back({Severity::Warning, Phase::Semantic, std::move(code),
                          std::move(msg), span});
    }

    // ---- pass 1: top-level declarations -------------------------------

    void declare_toplevel() {
        scopes_.push();
        std::vector<Symbol*> entries;
        std::vector<ObjectDecl*> pending_objects;

        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                FunctionDecl& fn = **fp;
                Symbol* sym = scopes_.declare(*store_, fn.name);
                if (!sym) {
                    error("E-SEM-004", fn.span,
                          "'" + fn.name + "' is already declared in this scope");
                    continue;
                }
                fill_function_symbol(*sym, fn, nullptr);
                fn.sym = sym;
                if (fn.return_type == ReturnType::Entry) {
                    entries.push_back(sym);
                    if (!fn.params.empty()) {
                        error("E-SEM-013", fn.params[0].span,
                              "the entry function takes no parameters");
                    }
                }
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                ClassDecl& cls = **cp;
                Symbol* sym = scopes_.declare(*store_, cls.name);
                if (!sym) {
                    error("E-SEM-004", cls.span,
                          "'" + cls.name + "' is already declared in this scope");
                    continue;
                }
                sym->kind = SymbolKind::Class;
                sym->decl_span = cls.span;
                sym->is_global = true;
                sym->class_decl = &cls;
                cls.sym = sym;
                classes_.push_back(sym);
            } else {
                Stmt& stmt = *std::get<StmtPtr>(item.node);
                declare_global(stmt, pending_objects);
            }
        }

        for (Symbol* cls : classes_) {
            declare_members(*cls);
        }
        for (ObjectDecl* od : pending_objects) {
            Symbol* cls = resolve_class_name(od->class_name,
                                             mut(od->sym)->decl_span);
            od->class_sym = cls;
            mut(od->sym)->class_sym = cls;
        }

        if (entries.empty()) {
            error("E-SEM-011", "program has no entry function");
        } else {
            entry_ = entries.front();
            for (size_t i = 1; i < entries.size(); ++i) {
                error("E-SEM-011", entries[i]->decl_span,
                      "duplicate entry function");
            }
        }

        build_function_table();
        check_composition_cycles();
    }

    void fill_function_symbol(Symbol& sym, const FunctionDecl& fn, Symbol* owner) {
        sym.kind = SymbolKind::Function;
        sym.decl_span = fn.span;
        sym.is_global = owner == nullptr;
        sym.owner_class = owner;
        sym.return_type = fn.return_type;
        sym.decl = &fn;
        for (const auto& p : fn.params) {
            sym.param_types.push_back(value_type_of(p.type));
        }
    }

    void declare_global(Stmt& stmt, std::vector<ObjectDecl*>& pending) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Variable;
                        sym->type = value_type_of(node.type);
                        node.sym = sym;
                        globals_.push_back(sym);
                    }
                } else if constexpr (std::is_same_v<T, ArrayDecl>) {
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Array;
                        sym->type = value_type_of(node.type);
                        sym->array_len = node.size;
                        node.sym = sym;
                        globals_.push_back(sym);
                    }
                } else if constexpr (std::is_same_v<T, ObjectDecl>) {
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Object;
                        sym->type = ValueType::Object;
                        node.sym = sym;
                        globals_.push_back(sym);
                        pending.push_back(&node);
                    }
                }
            },
            stmt.node);
    }

    Symbol* declare_data(const std::string& name, Span span) {
        Symbol* sym = scopes_.declare(*store_, name);
        if (!sym) {
            error("E-SEM-004", span,
                  "'" + name + "' is already declared in this scope");
            return nullptr;
        }
        sym->decl_span = span;
        sym->is_global = scopes_.current_id() == 0;
        return sym;
    }

    void declare_members(Symbol& cls) {
        ClassDecl& decl = *const_cast<ClassDecl*>(cls.class_decl);
        auto find_member = [&](const std::string& name) -> Symbol* {
            for (Symbol* f : cls.fields)
                if (f->name == name) return f;
            for (Symbol* m : cls.methods)
                if (m->name == name) return m;
            return nullptr;
        };

        for (auto& member : decl.members) {
            if (member.method) {
                FunctionDecl& m = *member.method;
                if (find_member(m.name)) {
                    error("E-SEM-004", m.span,
                          "'" + m.name + "' is already declared in this scope");
                    continue;
                }
                Symbol* sym = store_->create();
                sym->name = m.name;
                fill_function_symbol(*sym, m, &cls);
                sym->access = member.access;
                m.sym = sym;
                cls.methods.push_back(sym);
                if (m.return_type == ReturnType::Entry) {
                    error("E-SEM-011", m.span,
                          "the entry function cannot be a class method");
                }
                continue;
            }

            Stmt& fs = *member.field;
            std::visit(
                [&](auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, VarDecl> ||
                                  std::is_same_v<T, ArrayDecl> ||
                                  std::is_same_v<T, ObjectDecl>) {
                        if (find_member(node.name)) {
                            error("E-SEM-004", fs.span,
                                  "'" + node.name +
                                      "' is already declared in this scope");
                            return;
                        }
                        Symbol* sym = store_->create();
                        sym->name = node.name;
                        sym->decl_span = fs.span;
                        sym->access = member.access;
                        sym->owner_class = &cls;
                        sym->slot = static_cast<int32_t>(cls.fields.size());
                        if constexpr (std::is_same_v<T, VarDecl>) {
                            sym->kind = SymbolKind::Variable;
                            sym->type = value_type_of(node.type);
                        } else if constexpr (std::is_same_v<T, ArrayDecl>) {
                            sym->kind = SymbolKind::Array;
                            sym->type = value_type_of(node.type);
                            sym->array_len = node.size;
                        } else {
                            sym->kind = SymbolKind::Object;
                            sym->type = ValueType::Object;
                            Symbol* target =
                                resolve_class_name(node.class_name, fs.span);
                            sym->class_sym = target;
                            node.class_sym = target;
                        }
                        node.sym = sym;
                        cls.fields.push_back(sym);
                    }
                },
                fs.node);
        }
    }

    Symbol* resolve_class_name(const std::string& name, Span span) {
        Symbol* sym = scopes_.resolve(name);
        if (!sym) {
            error("E-SEM-005", span, "unknown class '" + name + "'");
            return nullptr;
        }
        if (sym->kind != SymbolKind::Class) {
            error("E-SEM-005", span, "'" + name + "' is not a class");
            return nullptr;
        }
        return sym;
    }

    void build_function_table() {
        functions_.clear();
        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                if ((*fp)->sym) functions_.push_back(mut((*fp)->sym));
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                if ((*cp)->sym) {
                    for (Symbol* m : mut((*cp)->sym)->methods) {
                        functions_.push_back(m);
                    }
                }
            }
        }
    }

    void check_composition_cycles() {
        std::unordered_map<const Symbol*, int> color;
        for (Symbol* cls : classes_) {
            if (color[cls] == 0) cycle_dfs(cls, color);
        }
    }

    void cycle_dfs(Symbol* cls, std::unordered_map<const Symbol*, int>& color) {
        color[cls] = 1;
        for (Symbol* field : cls->fields) {
            if (field->kind != SymbolKind::Object || !field->class_sym) continue;
            Symbol* target = mut(field->class_sym);
            if (color[target] == 1) {
                error("E-SEM-012", field->decl_span,
                      "field '" + field->name + "' of class '" + cls->name +
                          "' creates a composition cycle");
            } else if (color[target] == 0) {
                cycle_dfs(target, color);
            }
        }
        color[cls] = 2;
    }

    // ---- pass 2: name resolution ---------------------------------------

    void resolve_all() {
        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                resolve_function(**fp);
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                ClassDecl& cls = **cp;
                if (!cls.sym) continue;
                Symbol* cls_sym = mut(cls.sym);
                scopes_.push();
                for (Symbol* f : cls_sym->fields) scopes_.adopt(f);
                for (Symbol* m : cls_sym->methods) scopes_.adopt(m);
                current_class_ = cls_sym;
                for (auto& member : cls.members) {
                    if (member.method) resolve_function(*member.method);
                }
                current_class_ = nullptr;
                scopes_.pop();
            }
        }
    }

    void resolve_function(FunctionDecl& fn) {
        current_fn_ = mut(fn.sym);
        // parameters share the scope of the body's top level
        scopes_.push();
        for (auto& p : fn.params) {
            Symbol* sym = scopes_.declare(*store_, p.name);
            if (!sym) {
                error("E-SEM-004", p.span,
                      "'" + p.name + "' is already declared in this scope");
                continue;
            }
            sym->kind = SymbolKind::Parameter;
            sym->type = value_type_of(p.type);
            sym->decl_span = p.span;
            p.sym = sym;
        }
        for (auto& sp : fn.body.stmts) resolve_stmt(*sp);
        scopes_.pop();
        current_fn_ = nullptr;
    }

    void resolve_block(Block& block) {
        scopes_.push();
        for (auto& sp : block.stmts) resolve_stmt(*sp);
        scopes_.pop();
    }

    void resolve_stmt(Stmt& stmt) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (node.init) resolve_expr(*node.init);
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Variable;
                        sym->type = value_type_of(node.type);
                        node.sym = sym;
                    }
                } else if constexpr (std::is_same_v<T, ArrayDecl>) {
                    for (auto& init : node.init) resolve_expr(*init);
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Array;
                        sym->type = value_type_of(node.type);
                        sym->array_len = node.size;
                        node.sym = sym;
                    }
                } else if constexpr (std::is_same_v<T, ObjectDecl>) {
                    Symbol* cls = resolve_class_name(node.class_name, stmt.span);
                    node.class_sym = cls;
                    if (Symbol* sym = declare_data(node.name, stmt.span)) {
                        sym->kind = SymbolKind::Object;
                        sym->type = ValueType::Object;
                        sym->class_sym = cls;
                        node.sym = sym;
                    }
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    resolve_lvalue(node.target);
                    resolve_expr(*node.value);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    resolve_bool(*node.cond);
                    resolve_block(node.then_block);
                    if (node.else_block) resolve_block(*node.else_block);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    resolve_bool(*node.cond);
                    resolve_block(node.body);
                } else if constexpr (std::is_same_v<T, ShowStmt>) {
                    resolve_expr(*node.value);
                } else if constexpr (std::is_same_v<T, InputStmt>) {
                    resolve_lvalue(node.target);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    resolve_call(node.call, stmt.span);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (node.value) resolve_expr(*node.value);
                }
            },
            stmt.node);
    }

    void resolve_expr(Expr& e) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NameRef>) {
                    node.sym = resolve_value_name(node.name, e.span);
                } else if constexpr (std::is_same_v<T, IndexRef>) {
                    node.sym = resolve_value_name(node.name, e.span);
                    resolve_expr(*node.index);
                } else if constexpr (std::is_same_v<T, FieldRef>) {
                    auto [base, field] =
                        resolve_member(node.base, node.field, e.span);
                    node.base_sym = base;
                    node.field_sym = field;
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    resolve_expr(*node.operand);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    resolve_expr(*node.lhs);
                    resolve_expr(*node.rhs);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    resolve_call(node, e.span);
                }
            },
            e.node);
    }

    void resolve_bool(BoolExpr& b) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, CmpNode>) {
                    resolve_expr(*node.lhs);
                    resolve_expr(*node.rhs);
                } else if constexpr (std::is_same_v<T, AndNode> ||
                                     std::is_same_v<T, OrNode>) {
                    resolve_bool(*node.lhs);
                    resolve_bool(*node.rhs);
                } else if constexpr (std::is_same_v<T, ParenNode>) {
                    resolve_bool(*node.inner);
                }
            },
            b.node);
    }

    void resolve_lvalue(LValue& lv) {
        switch (lv.kind) {
        case LValue::Kind::Name:
            lv.sym = resolve_value_name(lv.name, lv.span);
            break;
        case LValue::Kind::Index:
            lv.sym = resolve_value_name(lv.name, lv.span);
            resolve_expr(*lv.index);
            break;
        case LValue::Kind::Field: {
            auto [base, field] = resolve_member(lv.name, lv.field, lv.span);
            lv.sym = base;
            lv.field_sym = field;
            break;
        }
        }
    }

    Symbol* resolve_value_name(const std::string& name, Span span) {
        Symbol* sym = scopes_.resolve(name);
        if (!sym) {
            error("E-SEM-001", span, "undeclared name '" + name + "'");
            return nullptr;
        }
        // Variables must be declared textually before use; functions,
        // classes, parameters, and class fields are exempt.
        if (is_data_kind(sym->kind) && sym->owner_class == nullptr &&
            span.start < sym->decl_span.start) {
            error("E-SEM-001", span,
                  "'" + name + "' is used before its declaration");
        }
        return sym;
    }

    std::pair<Symbol*, Symbol*> resolve_member(const std::string& base_name,
                                               const std::string& field_name,
                                               Span span) {
        Symbol* base = resolve_value_name(base_name, span);
        if (!base) return {nullptr, nullptr};
        if (base->kind != SymbolKind::Object) {
            error("E-SEM-003", span, "'" + base_name + "' is not an object");
            return {base, nullptr};
        }
        Symbol* cls = mut(base->class_sym);
        if (!cls) return {base, nullptr};
        for (Symbol* f : cls->fields) {
            if (f->name == field_name) {
                check_access(f, cls, field_name, span);
                return {base, f};
            }
        }
        for (Symbol* m : cls->methods) {
            if (m->name == field_name) {
                error("E-SEM-003", span,
                      "'" + field_name + "' is a method, not a field");
                return {base, nullptr};
            }
        }
        error("E-SEM-001", span, "class '" + cls->name + "' has no member '" +
                                     field_name + "'");
        return {base, nullptr};
    }

    void check_access(const Symbol* member, const Symbol* cls,
                      const std::string& name, Span span) {
        if (member->access == Access::Private && current_class_ != cls) {
            error("E-SEM-008", span, "private member '" + name + "' of class '" +
                                         cls->name + "' is not accessible here");
        }
    }

    void resolve_call(CallExpr& call, Span span) {
        if (call.base.empty()) {
            Symbol* sym = scopes_.resolve(call.name);
            if (!sym) {
                error("E-SEM-007", span, "unknown function '" + call.name + "'");
            } else if (sym->kind != SymbolKind::Function) {
                error("E-SEM-007", span, "'" + call.name + "' is not a function");
            } else {
                call.fn_sym = sym;
            }
        } else {
            Symbol* base = resolve_value_name(call.base, span);
            call.base_sym = base;
            if (base && base->kind != SymbolKind::Object) {
                error("E-SEM-003", span, "'" + call.base + "' is not an object");
            } else if (base && base->class_sym) {
                Symbol* cls = mut(base->class_sym);
                Symbol* method = nullptr;
                for (Symbol* m : cls->methods) {
                    if (m->name == call.name) {
                        method = m;
                        break;
                    }
                }
                if (!method) {
                    bool is_field = false;
                    for (Symbol* f : cls->fields) {
                        if (f->name == call.name) {
                            is_field = true;
                            break;
                        }
                    }
                    if (is_field) {
                        error("E-SEM-007", span,
                              "'" + call.name + "' is a field, not a method");
                    } else {
                        error("E-SEM-007", span, "class '" + cls->name +
                                                     "' has no method '" +
                                                     call.name + "'");
                    }
                } else {
                    check_access(method, cls, call.name, span);
                    call.fn_sym = method;
                }
            }
        }
        for (auto& arg : call.args) resolve_expr(*arg);
        call_sites_.push_back({&call, span});
    }

    // ---- pass 3: call shapes -------------------------------------------

    void check_calls() {
        for (const CallSite& site : call_sites_) {
            const Symbol* fn = site.call->fn_sym;
            if (!fn) continue;
            if (fn->return_type == ReturnType::Entry) {
                error("E-SEM-007", site.span,
                      "the entry function cannot be called");
                continue;
            }
            size_t want = fn->param_types.size();
            size_t got = site.call->args.size();
            if (want != got) {
                error("E-SEM-002", site.span,
                      "function '" + fn->name + "' expects " +
                          std::to_string(want) + " argument(s), got " +
                          std::to_string(got));
            }
        }
    }

    // ---- pass 4: types ---------------------------------------------------

    void type_check_all() {
        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                type_check_function(**fp);
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                ClassDecl& cls = **cp;
                current_class_ = mut(cls.sym);
                for (auto& member : cls.members) {
                    if (member.method) {
                        type_check_function(*member.method);
                    } else {
                        check_decl_inits(*member.field);
                    }
                }
                current_class_ = nullptr;
            } else {
                check_decl_inits(*std::get<StmtPtr>(item.node));
            }
        }
    }

    void type_check_function(FunctionDecl& fn) {
        current_fn_ = mut(fn.sym);
        check_block(fn.body);
        current_fn_ = nullptr;
    }

    void check_block(Block& block) {
        for (auto& sp : block.stmts) check_stmt(*sp);
    }

    void check_decl_inits(Stmt& stmt) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (!node.init) return;
                    ValueType want = value_type_of(node.type);
                    ValueType got = check_expr(*node.init);
                    if (got != ValueType::None && got != want) {
                        error("E-SEM-003", node.init->span,
                              "type mismatch: expected " + type_desc(want) +
                                  ", found " + type_desc(got));
                    }
                } else if constexpr (std::is_same_v<T, ArrayDecl>) {
                    ValueType want = element_type(value_type_of(node.type));
                    for (auto& init : node.init) {
                        ValueType got = check_expr(*init);
                        if (got != ValueType::None && got != want) {
                            error("E-SEM-003", init->span,
                                  "type mismatch: expected " + type_desc(want) +
                                      ", found " + type_desc(got));
                        }
                    }
                }
            },
            stmt.node);
    }

    void check_stmt(Stmt& stmt) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl> ||
                              std::is_same_v<T, ArrayDecl>) {
                    check_decl_inits(stmt);
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    ValueType target = check_target(node.target);
                    ValueType got = check_expr(*node.value);
                    if (target == ValueType::None || got == ValueType::None)
                        return;
                    if (got == target) return;
                    if (target == ValueType::Str && got == ValueType::Num) {
                        node.value->convert_to_str = true;
                        return;
                    }
                    error("E-SEM-003", node.value->span,
                          "cannot assign " + type_desc(got) + " to " +
                              type_desc(target));
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    check_bool(*node.cond);
                    check_block(node.then_block);
                    if (node.else_block) check_block(*node.else_block);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    check_bool(*node.cond);
                    check_block(node.body);
                } else if constexpr (std::is_same_v<T, ShowStmt>) {
                    ValueType t = check_expr(*node.value);
                    if (t == ValueType::Num) {
                        node.value->convert_to_str = true;
                    } else if (t != ValueType::Str && t != ValueType::None) {
                        error("E-SEM-003", node.value->span,
                              "أعرض requires رقم or كلمة, found " + type_desc(t));
                    }
                } else if constexpr (std::is_same_v<T, InputStmt>) {
                    check_target(node.target, /*for_input=*/true);
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    check_call_expr(node.call, stmt.span);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    check_return(node, stmt.span);
                }
            },
            stmt.node);
    }

    void check_return(ReturnStmt& ret, Span span) {
        if (!current_fn_) return;
        if (current_fn_->return_type == ReturnType::Entry) {
            if (ret.value) {
                check_expr(*ret.value);
                error("E-SEM-009", ret.value->span,
                      "the entry function does not return a value");
            }
            return;
        }
        if (!ret.value) {
            error("E-SEM-009", span, "missing return value");
            return;
        }
        ValueType want = value_type_of(current_fn_->return_type);
        ValueType got = check_expr(*ret.value);
        if (got != ValueType::None && got != want) {
            error("E-SEM-009", ret.value->span,
                  "return type mismatch: expected " + type_desc(want) +
                      ", found " + type_desc(got));
        }
    }

    ValueType check_target(LValue& lv, bool for_input = false) {
        const std::string input_msg = "أدخل target must be رقم or كلمة";
        switch (lv.kind) {
        case LValue::Kind::Name: {
            if (!lv.sym) return ValueType::None;
            const Symbol* sym = lv.sym;
            if (sym->kind == SymbolKind::Variable ||
                sym->kind == SymbolKind::Parameter) {
                if (is_scalar(sym->type)) return sym->type;
                error("E-SEM-003", lv.span,
                      for_input ? input_msg
                                : "cannot assign to '" + lv.name + "' as a whole");
                return ValueType::None;
            }
            if (sym->kind == SymbolKind::Array) {
                error("E-SEM-003", lv.span,
                      for_input
                          ? input_msg
                          : "cannot assign to array '" + lv.name + "' as a whole");
            } else if (sym->kind == SymbolKind::Object) {
                error("E-SEM-003", lv.span,
                      for_input ? input_msg
                                : "cannot assign to object '" + lv.name + "'");
            } else {
                error("E-SEM-003", lv.span, "'" + lv.name + "' is not assignable");
            }
            return ValueType::None;
        }
        case LValue::Kind::Index: {
            ValueType it = check_expr(*lv.index);
            if (it != ValueType::None && it != ValueType::Num) {
                error("E-SEM-003", lv.index->span, "array index must be رقم");
            }
            if (!lv.sym) return ValueType::None;
            if (!is_list(lv.sym->type)) {
                error("E-SEM-003", lv.span, "'" + lv.name + "' is not an array");
                return ValueType::None;
            }
            return element_type(lv.sym->type);
        }
        case LValue::Kind::Field: {
            if (lv.sym) mut(lv.sym)->used = true;
            if (!lv.field_sym) return ValueType::None;
            ValueType t = lv.field_sym->type;
            if (is_scalar(t)) return t;
            if (for_input) {
                error("E-SEM-003", lv.span, input_msg);
            } else if (t == ValueType::Object) {
                error("E-SEM-003", lv.span,
                      "cannot assign to object '" + lv.field + "'");
            } else {
                error("E-SEM-003", lv.span,
                      "cannot assign to array '" + lv.field + "' as a whole");
            }
            return ValueType::None;
        }
        }
        return ValueType::None;
    }

    ValueType check_expr(Expr& e) {
        ValueType t = std::visit(
            [&](auto& node) -> ValueType {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumLit>) {
                    return ValueType::Num;
                } else if constexpr (std::is_same_v<T, StrLit>) {
                    return ValueType::Str;
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    if (!node.sym) return ValueType::None;
                    Symbol* sym = mut(node.sym);
                    if (sym->kind == SymbolKind::Function) {
                        error("E-SEM-003", e.span,
                              "'" + node.name + "' is a function, not a value");
                        return ValueType::None;
                    }
                    if (sym->kind == SymbolKind::Class) {
                        error("E-SEM-003", e.span,
                              "'" + node.name + "' is a class, not a value");
                        return ValueType::None;
                    }
                    sym->used = true;
                    return sym->type;
                } else if constexpr (std::is_same_v<T, IndexRef>) {
                    ValueType it = check_expr(*node.index);
                    if (it != ValueType::None && it != ValueType::Num) {
                        error("E-SEM-003", node.index->span,
                              "array index must be رقم");
                    }
                    if (!node.sym) return ValueType::None;
                    Symbol* sym = mut(node.sym);
                    sym->used = true;
                    if (!is_list(sym->type)) {
                        error("E-SEM-003", e.span,
                              "'" + node.name + "' is not an array");
                        return ValueType::None;
                    }
                    return element_type(sym->type);
                } else if constexpr (std::is_same_v<T, FieldRef>) {
                    if (node.base_sym) mut(node.base_sym)->used = true;
                    if (!node.field_sym) return ValueType::None;
                    mut(node.field_sym)->used = true;
                    ValueType t = node.field_sym->type;
                    if (t == ValueType::Object) {
                        error("E-SEM-003", e.span,
                              "object field '" + node.field +
                                  "' cannot be used as a value");
                        return ValueType::None;
                    }
                    return t;
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    ValueType t = check_expr(*node.operand);
                    if (t == ValueType::None) return ValueType::None;
                    if (t != ValueType::Num) {
                        error("E-SEM-003", node.operand->span,
                              "sign operator requires رقم, found " + type_desc(t));
                        return ValueType::None;
                    }
                    return ValueType::Num;
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    ValueType lt = check_expr(*node.lhs);
                    ValueType rt = check_expr(*node.rhs);
                    if (node.op == BinOp::Concat) {
                        bool bad = false;
                        for (auto* side : {node.lhs.get(), node.rhs.get()}) {
                            ValueType t = side->type;
                            if (t == ValueType::None) {
                                bad = true;
                            } else if (t == ValueType::Num) {
                                side->convert_to_str = true;
                            } else if (t != ValueType::Str) {
                                error("E-SEM-003", side->span,
                                      "operator '&' requires رقم or كلمة, found " +
                                          type_desc(t));
                                bad = true;
                            }
                        }
                        return bad ? ValueType::None : ValueType::Str;
                    }
                    bool bad = false;
                    if (lt == ValueType::None) {
                        bad = true;
                    } else if (lt != ValueType::Num) {
                        error("E-SEM-003", node.lhs->span,
                              std::string("operator '") +
                                  std::string(bin_op_lexeme(node.op)) +
                                  "' requires رقم operands, found " +
                                  type_desc(lt));
                        bad = true;
                    }
                    if (rt == ValueType::None) {
                        bad = true;
                    } else if (rt != ValueType::Num) {
                        error("E-SEM-003", node.rhs->span,
                              std::string("operator '") +
                                  std::string(bin_op_lexeme(node.op)) +
                                  "' requires رقم operands, found " +
                                  type_desc(rt));
                        bad = true;
                    }
                    return bad ? ValueType::None : ValueType::Num;
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    return check_call_expr(node, e.span);
                }
            },
            e.node);
        e.type = t;
        return t;
    }

    ValueType check_call_expr(CallExpr& call, Span span) {
        (void)span;
        std::vector<ValueType> arg_types;
        arg_types.reserve(call.args.size());
        for (auto& arg : call.args) arg_types.push_back(check_expr(*arg));
        if (call.base_sym) mut(call.base_sym)->used = true;
        const Symbol* fn = call.fn_sym;
        if (!fn) return ValueType::None;
        size_t n = std::min(arg_types.size(), fn->param_types.size());
        for (size_t i = 0; i < n; ++i) {
            if (arg_types[i] == ValueType::None) continue;
            if (arg_types[i] != fn->param_types[i]) {
                error("E-SEM-006", call.args[i]->span,
                      "argument " + std::to_string(i + 1) + " of '" + fn->name +
                          "' must be " + type_desc(fn->param_types[i]) +
                          ", found " + type_desc(arg_types[i]));
            }
        }
        return value_type_of(fn->return_type);
    }

    void check_bool(BoolExpr& b) {
        std::visit(
            [&](auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, CmpNode>) {
                    ValueType lt = check_expr(*node.lhs);
                    ValueType rt = check_expr(*node.rhs);
                    bool relational = node.op == CmpOp::Lt ||
                                      node.op == CmpOp::Gt ||
                                      node.op == CmpOp::Le ||
                                      node.op == CmpOp::Ge;
                    if (relational) {
                        for (auto* side : {node.lhs.get(), node.rhs.get()}) {
                            ValueType t = side->type;
                            if (t == ValueType::Str) {
                                error("E-SEM-010", side->span,
                                      std::string(
                                          "string operand in numeric comparison '") +
                                          std::string(cmp_op_lexeme(node.op)) +
                                          "'");
                            } else if (t != ValueType::Num &&
                                       t != ValueType::None) {
                                error("E-SEM-003", side->span,
                                      "comparison requires رقم operands, found " +
                                          type_desc(t));
                            }
                        }
                    } else {
                        for (auto* side : {node.lhs.get(), node.rhs.get()}) {
                            ValueType t = side->type;
                            if (t != ValueType::None && !is_scalar(t)) {
                                error("E-SEM-003", side->span,
                                      "comparison requires رقم or كلمة operands, "
                                      "found " +
                                          type_desc(t));
                            }
                        }
                        if (is_scalar(lt) && is_scalar(rt) && lt != rt) {
                            error("E-SEM-003", node.rhs->span,
                                  "cannot compare " + type_desc(lt) + " with " +
                                      type_desc(rt));
                        }
                    }
                } else if constexpr (std::is_same_v<T, AndNode> ||
                                     std::is_same_v<T, OrNode>) {
                    check_bool(*node.lhs);
                    check_bool(*node.rhs);
                } else if constexpr (std::is_same_v<T, ParenNode>) {
                    check_bool(*node.inner);
                }
            },
            b.node);
    }

    // ---- pass 5: unused-variable elimination ------------------------------

    struct Usage {
        size_t reads = 0;
        bool input_target = false;
        bool call_write = false;
        std::vector<const Stmt*> writes;
        const Stmt* decl = nullptr;
    };
    using UsageMap = std::unordered_map<const Symbol*, Usage>;

    std::set<const Stmt*> dead_;

    void eliminate_unused() {
        std::vector<Symbol*> removed;
        for (;;) {
            UsageMap use;
            scan_program(use);
            std::vector<Symbol*> round;
            for (auto& [sym, usage] : use) {
                if (sym->kind != SymbolKind::Variable) continue;
                if (sym->owner_class != nullptr) continue;
                if (!usage.decl) continue;
                if (usage.reads > 0 || usage.input_target || usage.call_write)
                    continue;
                round.push_back(mut(sym));
            }
            if (round.empty()) break;
            for (Symbol* sym : round) {
                const Usage& usage = use[sym];
                dead_.insert(usage.decl);
                for (const Stmt* w : usage.writes) dead_.insert(w);
                removed.push_back(sym);
            }
        }
        if (removed.empty()) return;

        prune_program();
        std::set<const Symbol*> gone(removed.begin(), removed.end());
        std::erase_if(globals_, [&](Symbol* s) { return gone.count(s) != 0; });
        std::sort(removed.begin(), removed.end(),
                  [](const Symbol* a, const Symbol* b) {
                      return a->decl_span.start < b->decl_span.start;
                  });
        for (const Symbol* sym : removed) {
            warn("W-SEM-001", sym->decl_span,
                 "unused variable '" + sym->name + "' removed");
        }
    }

    void scan_program(UsageMap& use) {
        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                scan_block((*fp)->body, use);
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                for (auto& member : (*cp)->members) {
                    if (member.method) scan_block(member.method->body, use);
                }
            } else {
                Stmt& stmt = *std::get<StmtPtr>(item.node);
                if (dead_.count(&stmt) == 0) scan_stmt(stmt, use);
            }
        }
    }

    void scan_block(const Block& block, UsageMap& use) {
        for (const auto& sp : block.stmts) {
            if (dead_.count(sp.get()) == 0) scan_stmt(*sp, use);
        }
    }

    void scan_stmt(const Stmt& stmt, UsageMap& use) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    if (node.sym) use[node.sym].decl = &stmt;
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    const LValue& lv = node.target;
                    if (lv.kind == LValue::Kind::Name && lv.sym &&
                        lv.sym->kind == SymbolKind::Variable &&
                        lv.sym->owner_class == nullptr) {
                        Usage& u = use[lv.sym];
                        u.writes.push_back(&stmt);
                        if (expr_contains_call(*node.value)) u.call_write = true;
                    } else {
                        scan_lvalue(lv, use);
                    }
                    scan_expr(*node.value, use);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    scan_bool(*node.cond, use);
                    scan_block(node.then_block, use);
                    if (node.else_block) scan_block(*node.else_block, use);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    scan_bool(*node.cond, use);
                    scan_block(node.body, use);
                } else if constexpr (std::is_same_v<T, ShowStmt>) {
                    scan_expr(*node.value, use);
                } else if constexpr (std::is_same_v<T, InputStmt>) {
                    const LValue& lv = node.target;
                    if (lv.kind == LValue::Kind::Name && lv.sym) {
                        use[lv.sym].input_target = true;
                    } else {
                        scan_lvalue(lv, use);
                    }
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    for (const auto& arg : node.call.args) scan_expr(*arg, use);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    if (node.value) scan_expr(*node.value, use);
                }
            },
            stmt.node);
    }

    void scan_lvalue(const LValue& lv, UsageMap& use) {
        if (lv.kind == LValue::Kind::Index && lv.index) {
            scan_expr(*lv.index, use);
        }
    }

    void scan_expr(const Expr& e, UsageMap& use) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NameRef>) {
                    if (node.sym) use[node.sym].reads++;
                } else if constexpr (std::is_same_v<T, IndexRef>) {
                    if (node.sym) use[node.sym].reads++;
                    scan_expr(*node.index, use);
                } else if constexpr (std::is_same_v<T, FieldRef>) {
                    if (node.base_sym) use[node.base_sym].reads++;
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    scan_expr(*node.operand, use);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    scan_expr(*node.lhs, use);
                    scan_expr(*node.rhs, use);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    if (node.base_sym) use[node.base_sym].reads++;
                    for (const auto& arg : node.args) scan_expr(*arg, use);
                }
            },
            e.node);
    }

    void scan_bool(const BoolExpr& b, UsageMap& use) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, CmpNode>) {
                    scan_expr(*node.lhs, use);
                    scan_expr(*node.rhs, use);
                } else if constexpr (std::is_same_v<T, AndNode> ||
                                     std::is_same_v<T, OrNode>) {
                    scan_bool(*node.lhs, use);
                    scan_bool(*node.rhs, use);
                } else if constexpr (std::is_same_v<T, ParenNode>) {
                    scan_bool(*node.inner, use);
                }
            },
            b.node);
    }

    void prune_program() {
        std::erase_if(program_.items, [&](const Item& item) {
            if (const auto* sp = std::get_if<StmtPtr>(&item.node)) {
                return dead_.count(sp->get()) != 0;
            }
            return false;
        });
        for (auto& item : program_.items) {
            if (auto* fp = std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                prune_block((*fp)->body);
            } else if (auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                for (auto& member : (*cp)->members) {
                    if (member.method) prune_block(member.method->body);
                }
            }
        }
    }

    void prune_block(Block& block) {
        std::erase_if(block.stmts, [&](const StmtPtr& sp) {
            return dead_.count(sp.get()) != 0;
        });
        for (auto& sp : block.stmts) {
            std::visit(
                [&](auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, IfStmt>) {
                        prune_block(node.then_block);
                        if (node.else_block) prune_block(*node.else_block);
                    } else if constexpr (std::is_same_v<T, WhileStmt>) {
                        prune_block(node.body);
                    }
                },
                sp->node);
        }
    }

    // ---- pass 6: storage layout -------------------------------------------

    void assign_slots() {
        for (size_t i = 0; i < globals_.size(); ++i) {
            globals_[i]->slot = static_cast<int32_t>(i);
        }
        for (size_t i = 0; i < functions_.size(); ++i) {
            functions_[i]->slot = static_cast<int32_t>(i);
        }
        for (size_t i = 0; i < classes_.size(); ++i) {
            classes_[i]->slot = static_cast<int32_t>(i);
        }
        for (Symbol* fn : functions_) {
            uint32_t next = fn->owner_class ? 1 : 0;
            const FunctionDecl& decl = *fn->decl;
            for (const auto& p : decl.params) {
                if (p.sym) mut(p.sym)->slot = static_cast<int32_t>(next++);
            }
            assign_block_slots(decl.body, next);
            fn->local_slot_count = static_cast<uint16_t>(next);
        }
    }

    void assign_block_slots(const Block& block, uint32_t& next) {
        for (const auto& sp : block.stmts) {
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, VarDecl> ||
                                  std::is_same_v<T, ArrayDecl> ||
                                  std::is_same_v<T, ObjectDecl>) {
                        if (node.sym) mut(node.sym)->slot =
                            static_cast<int32_t>(next++);
                    } else if constexpr (std::is_same_v<T, IfStmt>) {
                        assign_block_slots(node.then_block, next);
                        if (node.else_block)
                            assign_block_slots(*node.else_block, next);
                    } else if constexpr (std::is_same_v<T, WhileStmt>) {
                        assign_block_slots(node.body, next);
                    }
                },
                sp->node);
        }
    }
};

} // namespace

CheckResult check_program(Program program, const CheckOptions& opts) {
    Checker checker(std::move(program), opts);
    return checker.run();
}

} // namespace phoenix
