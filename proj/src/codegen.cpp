#include "phoenix/codegen.hpp"

#include <bit>
#include <limits>
#include <unordered_map>

#include "phoenix/source.hpp"
#include "phoenix/symbols.hpp"

namespace phoenix {

namespace {

[[noreturn]] void gen_fail(const char* code, std::string msg) {
    throw CompileError{{Severity::Error, Phase::Codegen, code, std::move(msg),
                        std::nullopt}};
}

template <class... Ts> struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

// Declaration initializers are literals by grammar; fold the optional sign.
double fold_num(const Expr& e) {
    if (const auto* n = std::get_if<NumLit>(&e.node)) return n->value;
    if (const auto* u = std::get_if<UnaryExpr>(&e.node)) {
        double v = fold_num(*u->operand);
        return u->op == UnOp::Minus ? -v : v;
    }
    gen_fail("E-GEN-003", "declaration initializer is not a literal");
}

const std::string& fold_str(const Expr& e) {
    if (const auto* s = std::get_if<StrLit>(&e.node)) return s->value;
    gen_fail("E-GEN-003", "declaration initializer is not a literal");
}

uint16_t table_slot(const Symbol* sym) {
    return static_cast<uint16_t>(sym->slot);
}

class Generator {
public:
    explicit Generator(const TypedProgram& typed) : typed_(typed) {}

    ProgramImage run() {
        build_globals();
        build_classes();
        image_.functions.resize(typed_.functions.size());
        for (const auto& item : typed_.program.items) {
            if (const auto* fp =
                    std::get_if<std::unique_ptr<FunctionDecl>>(&item.node)) {
                gen_function(**fp);
            } else if (const auto* cp =
                           std::get_if<std::unique_ptr<ClassDecl>>(&item.node)) {
                for (const auto& member : (*cp)->members) {
                    if (member.method) gen_function(*member.method);
                }
            }
        }
        image_.entry = table_slot(typed_.entry);
        return std::move(image_);
    }

private:
    const TypedProgram& typed_;
    ProgramImage image_;
    std::unordered_map<uint64_t, uint16_t> num_index_;
    std::unordered_map<std::string, uint16_t> str_index_;

    std::vector<uint8_t>* code_ = nullptr;
    bool in_entry_ = false;
    bool used_scratch_ = false;
    uint16_t scratch_slot_ = 0;

    // ---- constant pools ----------------------------------------------------

    uint16_t num_const(double v) {
        uint64_t key = std::bit_cast<uint64_t>(v);
        auto it = num_index_.find(key);
        if (it != num_index_.end()) return it->second;
        if (image_.num_pool.size() >= 0xFFFF) {
            gen_fail("E-GEN-002", "number pool exceeds 65535 entries");
        }
        auto idx = static_cast<uint16_t>(image_.num_pool.size());
        image_.num_pool.push_back(v);
        num_index_.emplace(key, idx);
        return idx;
    }

    uint16_t str_const(const std::string& s) {
        auto it = str_index_.find(s);
        if (it != str_index_.end()) return it->second;
        if (image_.str_pool.size() >= 0xFFFF) {
            gen_fail("E-GEN-002", "string pool exceeds 65535 entries");
        }
        auto idx = static_cast<uint16_t>(image_.str_pool.size());
        image_.str_pool.push_back(s);
        str_index_.emplace(s, idx);
        return idx;
    }

    // ---- emission ----------------------------------------------------------

    void op(Op o) { code_->push_back(static_cast<uint8_t>(o)); }
    void u8(uint8_t v) { code_->push_back(v); }
    void u16(uint16_t v) {
        code_->push_back(static_cast<uint8_t>(v));
        code_->push_back(static_cast<uint8_t>(v >> 8));
    }

    size_t here() const { return code_->size(); }

    // Emits a jump with a placeholder offset; returns the fixup position.
    size_t emit_jump(Op o) {
        op(o);
        size_t at = code_->size();
        for (int i = 0; i < 4; ++i) code_->push_back(0);
        return at;
    }

    void patch_jump_to(size_t at, size_t target) {
        int64_t rel = static_cast<int64_t>(target) -
                      (static_cast<int64_t>(at) + 4);
        if (rel < std::numeric_limits<int32_t>::min() ||
            rel > std::numeric_limits<int32_t>::max()) {
            gen_fail("E-GEN-001", "jump distance exceeds the 32-bit range");
        }
        auto u = static_cast<uint32_t>(static_cast<int32_t>(rel));
        for (int i = 0; i < 4; ++i)
            (*code_)[at + i] = static_cast<uint8_t>(u >> (8 * i));
    }

    void patch_jump(size_t at) { patch_jump_to(at, here()); }

    void jump_back(Op o, size_t target) {
        size_t at = emit_jump(o);
        patch_jump_to(at, target);
    }

    void push_num(double v) {
        op(Op::PushNum);
        u16(num_const(v));
    }

    void push_str(const std::string& s) {
        op(Op::PushStr);
        u16(str_const(s));
    }

    // ---- symbol access -----------------------------------------------------

    // Pushes the value of a variable, parameter, array, or object symbol.
    void load_sym(const Symbol* sym) {
        if (sym->owner_class) { // bare field name inside a method
            op(Op::Load);
            u16(0);
            op(Op::GetField);
            u16(table_slot(sym));
        } else if (sym->is_global) {
            op(Op::LoadGlobal);
            u16(table_slot(sym));
        } else {
            op(Op::Load);
            u16(table_slot(sym));
        }
    }

    // Stores the value on top of the stack into a non-field symbol.
    void store_plain(const Symbol* sym) {
        op(sym->is_global ? Op::StoreGlobal : Op::Store);
        u16(table_slot(sym));
    }

    static uint8_t element_kind(ValueType list_type) {
        return list_type == ValueType::NumList ? 0 : 1;
    }

    static uint8_t input_kind(ValueType scalar) {
        return scalar == ValueType::Num ? 0 : 1;
    }

    uint16_t scratch() {
        used_scratch_ = true;
        return scratch_slot_;
    }

    // ---- expressions -------------------------------------------------------

    void gen_expr(const Expr& e) {
        std::visit(
            overloaded{
                [&](const NumLit& n) { push_num(n.value); },
                [&](const StrLit& s) { push_str(s.value); },
                [&](const NameRef& n) { load_sym(n.sym); },
                [&](const IndexRef& ix) {
                    load_sym(ix.sym);
                    gen_expr(*ix.index);
                    op(Op::LoadIdx);
                },
                [&](const FieldRef& fr) {
                    load_sym(fr.base_sym);
                    op(Op::GetField);
                    u16(table_slot(fr.field_sym));
                },
                [&](const UnaryExpr& un) {
                    gen_expr(*un.operand);
                    if (un.op == UnOp::Minus) op(Op::Neg);
                },
                [&](const BinaryExpr& b) {
                    gen_expr(*b.lhs);
                    gen_expr(*b.rhs);
                    switch (b.op) {
                    case BinOp::Add: op(Op::Add); break;
                    case BinOp::Sub: op(Op::Sub); break;
                    case BinOp::Mul: op(Op::Mul); break;
                    case BinOp::Div: op(Op::Div); break;
                    case BinOp::Mod: op(Op::Mod); break;
                    case BinOp::Concat: op(Op::Concat); break;
                    }
                },
                [&](const CallExpr& c) { gen_call(c); },
            },
            e.node);
        if (e.convert_to_str) op(Op::NumToStr);
    }

    void gen_call(const CallExpr& c) {
        const Symbol* fn = c.fn_sym;
        size_t argc = c.args.size();
        if (fn->owner_class) {
            if (c.base_sym) {
                load_sym(c.base_sym);
            } else { // bare method call: reuse the current receiver
                op(Op::Load);
                u16(0);
            }
            argc += 1;
        }
        for (const auto& arg : c.args) gen_expr(*arg);
        if (argc > 255) {
            gen_fail("E-GEN-003",
                     "call to '" + fn->name + "' exceeds 255 arguments");
        }
        op(Op::Call);
        u16(table_slot(fn));
        u8(static_cast<uint8_t>(argc));
    }

    // Leaves 1 for true, 0 for false; && and || short-circuit.
    void gen_bool(const BoolExpr& b) {
        std::visit(
            overloaded{
                [&](const CmpNode& c) {
                    gen_expr(*c.lhs);
                    gen_expr(*c.rhs);
                    switch (c.op) {
                    case CmpOp::Eq: op(Op::CmpEq); break;
                    case CmpOp::Ne: op(Op::CmpNe); break;
                    case CmpOp::Lt: op(Op::CmpLt); break;
                    case CmpOp::Gt: op(Op::CmpGt); break;
                    case CmpOp::Le: op(Op::CmpLe); break;
                    case CmpOp::Ge: op(Op::CmpGe); break;
                    }
                },
                [&](const AndNode& a) {
                    gen_bool(*a.lhs);
                    size_t to_false = emit_jump(Op::JmpIfFalse);
                    gen_bool(*a.rhs);
                    size_t to_end = emit_jump(Op::Jmp);
                    patch_jump(to_false);
                    push_num(0.0);
                    patch_jump(to_end);
                },
                [&](const OrNode& o) {
                    gen_bool(*o.lhs);
                    size_t to_rhs = emit_jump(Op::JmpIfFalse);
                    push_num(1.0);
                    size_t to_end = emit_jump(Op::Jmp);
                    patch_jump(to_rhs);
                    gen_bool(*o.rhs);
                    patch_jump(to_end);
                },
                [&](const ParenNode& p) { gen_bool(*p.inner); },
            },
            b.node);
    }

    // ---- statements --------------------------------------------------------

    void gen_block(const Block& block) {
        for (const auto& sp : block.stmts) gen_stmt(*sp);
    }

    void gen_stmt(const Stmt& s) {
        std::visit(
            overloaded{
                [&](const VarDecl& d) { gen_var_decl(d); },
                [&](const ArrayDecl& d) { gen_array_decl(d); },
                [&](const ObjectDecl& d) {
                    op(Op::NewObj);
                    u16(table_slot(d.class_sym));
                    store_plain(d.sym);
                },
                [&](const AssignStmt& a) {
                    gen_store(a.target, [&] { gen_expr(*a.value); });
                },
                [&](const IfStmt& i) {
                    gen_bool(*i.cond);
                    size_t to_else = emit_jump(Op::JmpIfFalse);
                    gen_block(i.then_block);
                    if (i.else_block) {
                        size_t to_end = emit_jump(Op::Jmp);
                        patch_jump(to_else);
                        gen_block(*i.else_block);
                        patch_jump(to_end);
                    } else {
                        patch_jump(to_else);
                    }
                },
                [&](const WhileStmt& w) {
                    size_t head = here();
                    gen_bool(*w.cond);
                    size_t to_end = emit_jump(Op::JmpIfFalse);
                    gen_block(w.body);
                    jump_back(Op::Jmp, head);
                    patch_jump(to_end);
                },
                [&](const ShowStmt& sh) {
                    gen_expr(*sh.value);
                    op(Op::Show);
                },
                [&](const InputStmt& in) { gen_input(in); },
                [&](const CallStmt& c) {
                    gen_call(c.call);
                    op(Op::Store); // the result of a call statement is unused
                    u16(scratch());
                },
                [&](const ReturnStmt& r) {
                    if (in_entry_) {
                        op(Op::Halt);
                    } else {
                        gen_expr(*r.value);
                        op(Op::Ret);
                    }
                },
            },
            s.node);
    }

    void gen_var_decl(const VarDecl& d) {
        if (d.type == TypeName::Num) {
            push_num(fold_num(*d.init));
        } else {
            push_str(fold_str(*d.init));
        }
        store_plain(d.sym);
    }

    void gen_array_decl(const ArrayDecl& d) {
        const Symbol* sym = d.sym;
        op(Op::NewArr);
        u8(element_kind(sym->type));
        u16(static_cast<uint16_t>(d.size));
        store_plain(sym);
        for (size_t i = 0; i < d.init.size(); ++i) {
            load_sym(sym);
            push_num(static_cast<double>(i));
            if (d.type == TypeName::NumList) {
                push_num(fold_num(*d.init[i]));
            } else {
                push_str(fold_str(*d.init[i]));
            }
            op(Op::StoreIdx);
        }
    }

    // Emits a store to any lvalue; value_fn pushes exactly one value at the
    // point in the sequence where the stored value belongs.
    template <typename Fn>
    void gen_store(const LValue& lv, Fn&& value_fn) {
        switch (lv.kind) {
        case LValue::Kind::Name:
            if (lv.sym->owner_class) { // bare field inside a method
                op(Op::Load);
                u16(0);
                value_fn();
                op(Op::SetField);
                u16(table_slot(lv.sym));
            } else {
                value_fn();
                store_plain(lv.sym);
            }
            break;
        case LValue::Kind::Index:
            load_sym(lv.sym);
            gen_expr(*lv.index);
            value_fn();
            op(Op::StoreIdx);
            break;
        case LValue::Kind::Field:
            load_sym(lv.sym);
            value_fn();
            op(Op::SetField);
            u16(table_slot(lv.field_sym));
            break;
        }
    }

    void gen_input(const InputStmt& in) {
        ValueType slot_type = ValueType::None;
        switch (in.target.kind) {
        case LValue::Kind::Name:
            slot_type = in.target.sym->type;
            break;
        case LValue::Kind::Index:
            slot_type = in.target.sym->type == ValueType::NumList
                            ? ValueType::Num
                            : ValueType::Str;
            break;
        case LValue::Kind::Field:
            slot_type = in.target.field_sym->type;
            break;
        }
        gen_store(in.target, [&] {
            push_str(in.prompt);
            op(Op::Input);
            u8(input_kind(slot_type));
        });
    }

    // ---- declarations ------------------------------------------------------

    void build_globals() {
        image_.globals.reserve(typed_.globals.size());
        for (const Symbol* g : typed_.globals) {
            GlobalInfo info;
            info.name = g->name;
            switch (g->kind) {
            case SymbolKind::Variable:
                info.type = g->type == ValueType::Num ? SlotType::Num
                                                      : SlotType::Str;
                break;
            case SymbolKind::Array:
                info.type = g->type == ValueType::NumList ? SlotType::NumList
                                                          : SlotType::StrList;
                info.aux = static_cast<uint16_t>(g->array_len);
                break;
            default:
                info.type = SlotType::Object;
                info.aux = table_slot(g->class_sym);
                break;
            }
            image_.globals.push_back(std::move(info));
        }
    }

    void build_classes() {
        image_.classes.resize(typed_.classes.size());
        for (const auto& item : typed_.program.items) {
            const auto* cp = std::get_if<std::unique_ptr<ClassDecl>>(&item.node);
            if (!cp) continue;
            const ClassDecl& cls = **cp;
            ClassInfo& info = image_.classes[table_slot(cls.sym)];
            info.name = cls.name;
            for (const auto& member : cls.members) {
                if (!member.field) continue;
                info.fields.push_back(field_info(*member.field));
            }
        }
    }

    FieldInfo field_info(const Stmt& field) {
        FieldInfo info;
        std::visit(
            overloaded{
                [&](const VarDecl& d) {
                    info.name = d.name;
                    if (d.type == TypeName::Num) {
                        info.type = SlotType::Num;
                        info.num_default = fold_num(*d.init);
                    } else {
                        info.type = SlotType::Str;
                        info.str_default = fold_str(*d.init);
                    }
                },
                [&](const ArrayDecl& d) {
                    info.name = d.name;
                    info.aux = static_cast<uint16_t>(d.size);
                    if (d.type == TypeName::NumList) {
                        info.type = SlotType::NumList;
                        info.num_list_default.assign(d.size, 0.0);
                        for (size_t i = 0; i < d.init.size(); ++i)
                            info.num_list_default[i] = fold_num(*d.init[i]);
                    } else {
                        info.type = SlotType::StrList;
                        info.str_list_default.assign(d.size, std::string());
                        for (size_t i = 0; i < d.init.size(); ++i)
                            info.str_list_default[i] = fold_str(*d.init[i]);
                    }
                },
                [&](const ObjectDecl& d) {
                    info.name = d.name;
                    info.type = SlotType::Object;
                    info.aux = table_slot(d.class_sym);
                },
                [&](const auto&) {},
            },
            field.node);
        return info;
    }

    // Global declarations run at the top of the entry chunk, in program order.
    void gen_global_inits() {
        for (const auto& item : typed_.program.items) {
            if (const auto* sp = std::get_if<StmtPtr>(&item.node)) {
                gen_stmt(**sp);
            }
        }
    }

    void gen_function(const FunctionDecl& fn) {
        const Symbol* sym = fn.sym;
        FunctionChunk chunk;
        chunk.name = sym->name;

        size_t params = fn.params.size() + (sym->owner_class ? 1 : 0);
        if (params > 255) {
            gen_fail("E-GEN-003",
                     "function '" + sym->name + "' exceeds 255 parameters");
        }
        chunk.param_count = static_cast<uint8_t>(params);

        code_ = &chunk.code;
        in_entry_ = sym == typed_.entry;
        used_scratch_ = false;
        scratch_slot_ = sym->local_slot_count;

        if (in_entry_) {
            gen_global_inits();
            gen_block(fn.body);
            op(Op::Halt);
        } else {
            gen_block(fn.body);
            switch (sym->return_type) {
            case ReturnType::Num: push_num(0.0); break;
            case ReturnType::Str: push_str(std::string()); break;
            case ReturnType::NumList:
                op(Op::NewArr);
                u8(0);
                u16(0);
                break;
            case ReturnType::StrList:
                op(Op::NewArr);
                u8(1);
                u16(0);
                break;
            case ReturnType::Entry: break; // unreachable
            }
            op(Op::Ret);
        }

        uint32_t slots = sym->local_slot_count + (used_scratch_ ? 1u : 0u);
        if (slots > 0xFFFF) {
            gen_fail("E-GEN-003",
                     "function '" + sym->name + "' exceeds 65535 local slots");
        }
        chunk.local_slot_count = static_cast<uint16_t>(slots);
        code_ = nullptr;

        image_.functions[table_slot(sym)] = std::move(chunk);
    }
};

} // namespace

ProgramImage generate_image(const TypedProgram& typed) {
    Generator gen(typed);
    return gen.run();
}

} // namespace phoenix
