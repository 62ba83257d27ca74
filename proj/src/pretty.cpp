#include "phoenix/pretty.hpp"

#include <cmath>

#include "phoenix/numfmt.hpp"
#include "phoenix/parser.hpp"

namespace phoenix {

namespace {

// Binding strength used to decide where parentheses are required.
// Higher binds tighter; parens appear when a child binds looser than
// its context demands.
int expr_level(const Expr& e) {
    if (const auto* bin = std::get_if<BinaryExpr>(&e.node)) {
        switch (bin->op) {
        case BinOp::Concat: return 1;
        case BinOp::Add:
        case BinOp::Sub: return 2;
        default: return 3;
        }
    }
    if (std::holds_alternative<UnaryExpr>(e.node)) return 4;
    return 5;
}

void print_expr(std::string& out, const Expr& e, int ctx);

void print_call(std::string& out, const CallExpr& call) {
    out += "إستدعاء ";
    if (!call.base.empty()) {
        out += call.base;
        out += '.';
    }
    out += call.name;
    out += " ( ";
    if (call.args.empty()) {
        out += '-';
    } else {
        for (size_t i = 0; i < call.args.size(); ++i) {
            if (i) out += " , ";
            print_expr(out, *call.args[i], 0);
        }
    }
    out += " )";
}

void print_expr(std::string& out, const Expr& e, int ctx) {
    const int lvl = expr_level(e);
    const bool paren = lvl < ctx;
    if (paren) out += "( ";
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, NumLit>) {
                if (node.value < 0 || std::signbit(node.value)) {
                    out += '-';
                    out += num_to_literal(-node.value);
                } else {
                    out += num_to_literal(node.value);
                }
            } else if constexpr (std::is_same_v<T, StrLit>) {
                out += '"';
                out += node.value;
                out += '"';
            } else if constexpr (std::is_same_v<T, NameRef>) {
                out += node.name;
            } else if constexpr (std::is_same_v<T, IndexRef>) {
                out += node.name;
                out += '[';
                print_expr(out, *node.index, 0);
                out += ']';
            } else if constexpr (std::is_same_v<T, FieldRef>) {
                out += node.base;
                out += '.';
                out += node.field;
            } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                out += node.op == UnOp::Plus ? '+' : '-';
                print_expr(out, *node.operand, 4);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                print_expr(out, *node.lhs, lvl);
                out += ' ';
                out += bin_op_lexeme(node.op);
                out += ' ';
                print_expr(out, *node.rhs, lvl + 1);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                print_call(out, node);
            }
        },
        e.node);
    if (paren) out += " )";
}

void print_bool(std::string& out, const BoolExpr& b);

// A bare and/or child on the right, or an or under an and, needs parens
// to keep its meaning. Canonical trees carry explicit ParenNode there,
// so this fires only on hand-built trees.
void print_bool_child(std::string& out, const BoolExpr& child, bool need_paren) {
    if (need_paren && !std::holds_alternative<ParenNode>(child.node) &&
        !std::holds_alternative<CmpNode>(child.node)) {
        out += "( ";
        print_bool(out, child);
        out += " )";
        return;
    }
    print_bool(out, child);
}

void print_bool(std::string& out, const BoolExpr& b) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, CmpNode>) {
                print_expr(out, *node.lhs, 0);
                out += ' ';
                out += cmp_op_lexeme(node.op);
                out += ' ';
                print_expr(out, *node.rhs, 0);
            } else if constexpr (std::is_same_v<T, AndNode>) {
                const bool lhs_paren = std::holds_alternative<OrNode>(node.lhs->node);
                print_bool_child(out, *node.lhs, lhs_paren);
                out += " && ";
                print_bool_child(out, *node.rhs, true);
            } else if constexpr (std::is_same_v<T, OrNode>) {
                print_bool_child(out, *node.lhs, false);
                out += " || ";
                // an and-chain binds tighter than ||, so only a bare or
                // on the right would change meaning unparenthesized
                print_bool_child(out, *node.rhs,
                                 std::holds_alternative<OrNode>(node.rhs->node));
            } else if constexpr (std::is_same_v<T, ParenNode>) {
                out += "( ";
                print_bool(out, *node.inner);
                out += " )";
            }
        },
        b.node);
}

std::string print_lvalue(const LValue& lv) {
    std::string out = lv.name;
    if (lv.kind == LValue::Kind::Index) {
        out += '[';
        print_expr(out, *lv.index, 0);
        out += ']';
    } else if (lv.kind == LValue::Kind::Field) {
        out += '.';
        out += lv.field;
    }
    return out;
}

struct Printer {
    std::string out;
    int indent = 0;

    void begin_line() { out.append(static_cast<size_t>(indent) * 4, ' '); }
    void end_line() { out += '\n'; }

    void stmt(const Stmt& s) {
        std::visit([&](const auto& node) { emit(node); }, s.node);
    }

    void block_body(const Block& b) {
        ++indent;
        for (const auto& s : b.stmts) stmt(*s);
        --indent;
    }

    void emit(const VarDecl& node) {
        begin_line();
        out += type_name_lexeme(node.type);
        out += ' ';
        out += node.name;
        out += " = ";
        print_expr(out, *node.init, 0);
        out += " ;";
        end_line();
    }

    void emit(const ArrayDecl& node) {
        begin_line();
        out += type_name_lexeme(node.type);
        out += ' ';
        out += node.name;
        out += '[';
        out += std::to_string(node.size);
        out += ']';
        if (node.has_init) {
            out += " = { ";
            for (size_t i = 0; i < node.init.size(); ++i) {
                if (i) out += " , ";
                print_expr(out, *node.init[i], 0);
            }
            if (!node.init.empty()) out += ' ';
            out += '}';
        }
        out += " ;";
        end_line();
    }

    void emit(const ObjectDecl& node) {
        begin_line();
        out += node.class_name;
        out += ' ';
        out += node.name;
        out += " ;";
        end_line();
    }

    void emit(const AssignStmt& node) {
        begin_line();
        out += print_lvalue(node.target);
        out += " = ";
        print_expr(out, *node.value, 0);
        out += " ;";
        end_line();
    }

    void emit(const IfStmt& node) {
        begin_line();
        out += "إذا : ";
        print_bool(out, *node.cond);
        out += " {";
        end_line();
        block_body(node.then_block);
        begin_line();
        out += '}';
        if (node.else_block) {
            out += " أما عدا ذلك {";
            end_line();
            block_body(*node.else_block);
            begin_line();
            out += '}';
        }
        end_line();
    }

    void emit(const WhileStmt& node) {
        begin_line();
        out += "كرر : ";
        print_bool(out, *node.cond);
        out += " {";
        end_line();
        block_body(node.body);
        begin_line();
        out += '}';
        end_line();
    }

    void emit(const ShowStmt& node) {
        begin_line();
        out += "أعرض : ";
        print_expr(out, *node.value, 0);
        out += " ;";
        end_line();
    }

    void emit(const InputStmt& node) {
        begin_line();
        out += "أدخل : ";
        out += print_lvalue(node.target);
        out += " , \"";
        out += node.prompt;
        out += "\" ;";
        end_line();
    }

    void emit(const CallStmt& node) {
        begin_line();
        out += "إستدعاء : ";
        if (!node.call.base.empty()) {
            out += node.call.base;
            out += '.';
        }
        out += node.call.name;
        out += " ( ";
        if (node.call.args.empty()) {
            out += '-';
        } else {
            for (size_t i = 0; i < node.call.args.size(); ++i) {
                if (i) out += " , ";
                print_expr(out, *node.call.args[i], 0);
            }
        }
        out += " ) ;";
        end_line();
    }

    void emit(const ReturnStmt& node) {
        begin_line();
        if (node.value) {
            out += "عودة : ";
            print_expr(out, *node.value, 0);
            out += " ;";
        } else {
            out += "عودة ;";
        }
        end_line();
    }

    void function(const FunctionDecl& fn) {
        begin_line();
        out += "وظيفة ";
        out += fn.name;
        out += " ( ";
        if (fn.params.empty()) {
            out += '-';
        } else {
            for (size_t i = 0; i < fn.params.size(); ++i) {
                if (i) out += " , ";
                out += type_name_lexeme(fn.params[i].type);
                out += ' ';
                out += fn.params[i].name;
            }
        }
        out += " ) : ";
        out += return_type_lexeme(fn.return_type);
        end_line();
        begin_line();
        out += '{';
        end_line();
        block_body(fn.body);
        begin_line();
        out += '}';
        end_line();
        begin_line();
        out += "نهاية الوظيفة";
        end_line();
    }

    void class_decl(const ClassDecl& cls) {
        begin_line();
        out += "صنف ";
        out += cls.name;
        out += " {";
        end_line();
        ++indent;
        for (const auto& m : cls.members) {
            begin_line();
            out += m.access == Access::Public ? "عام" : "خاص";
            end_line();
            if (m.method) {
                function(*m.method);
            } else {
                stmt(*m.field);
            }
        }
        --indent;
        begin_line();
        out += '}';
        end_line();
    }

    void program(const Program& p) {
        bool first = true;
        for (const auto& item : p.items) {
            if (!first) out += '\n';
            first = false;
            std::visit(
                [&](const auto& node) {
                    using T = std::decay_t<decltype(node)>;
                    if constexpr (std::is_same_v<T, std::unique_ptr<FunctionDecl>>) {
                        function(*node);
                    } else if constexpr (std::is_same_v<T, StmtPtr>) {
                        stmt(*node);
                    } else {
                        class_decl(*node);
                    }
                },
                item.node);
        }
    }
};

} // namespace

std::string pretty_print(const Program& program) {
    Printer p;
    p.program(program);
    return p.out;
}

std::string pretty_print(const FunctionDecl& fn) {
    Printer p;
    p.function(fn);
    return p.out;
}

std::string pretty_print(const Stmt& stmt) {
    Printer p;
    p.stmt(stmt);
    return p.out;
}

std::string pretty_print(const Expr& expr) {
    std::string out;
    print_expr(out, expr, 0);
    return out;
}

std::string pretty_print(const BoolExpr& expr) {
    std::string out;
    print_bool(out, expr);
    return out;
}

// ---- structural dump ----

namespace {

std::string dump_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    if (v == 0 && std::signbit(v)) return "-0";
    return num_to_str(v);
}

struct Dumper {
    std::string out;
    int depth = 0;

    void line(const std::string& text) {
        out.append(static_cast<size_t>(depth) * 2, ' ');
        out += text;
        out += '\n';
    }

    void expr(const Expr& e) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumLit>) {
                    line("Num " + dump_num(node.value));
                } else if constexpr (std::is_same_v<T, StrLit>) {
                    line("Str \"" + node.value + "\"");
                } else if constexpr (std::is_same_v<T, NameRef>) {
                    line("Name " + node.name);
                } else if constexpr (std::is_same_v<T, IndexRef>) {
                    line("Index " + node.name);
                    child(*node.index);
                } else if constexpr (std::is_same_v<T, FieldRef>) {
                    line("Field " + node.base + "." + node.field);
                } else if constexpr (std::is_same_v<T, UnaryExpr>) {
                    line(std::string("Unary ") +
                         (node.op == UnOp::Plus ? "+" : "-"));
                    child(*node.operand);
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    line("Binary " + std::string(bin_op_lexeme(node.op)));
                    child(*node.lhs);
                    child(*node.rhs);
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    call(node);
                }
            },
            e.node);
    }

    void call(const CallExpr& node) {
        std::string head = "Call ";
        if (!node.base.empty()) head += node.base + ".";
        head += node.name;
        line(head);
        ++depth;
        for (const auto& a : node.args) expr(*a);
        --depth;
    }

    void child(const Expr& e) {
        ++depth;
        expr(e);
        --depth;
    }

    void boolx(const BoolExpr& b) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, CmpNode>) {
                    line("Cmp " + std::string(cmp_op_lexeme(node.op)));
                    child(*node.lhs);
                    child(*node.rhs);
                } else if constexpr (std::is_same_v<T, AndNode>) {
                    line("And");
                    bool_child(*node.lhs);
                    bool_child(*node.rhs);
                } else if constexpr (std::is_same_v<T, OrNode>) {
                    line("Or");
                    bool_child(*node.lhs);
                    bool_child(*node.rhs);
                } else if constexpr (std::is_same_v<T, ParenNode>) {
                    line("BoolParen");
                    bool_child(*node.inner);
                }
            },
            b.node);
    }

    void bool_child(const BoolExpr& b) {
        ++depth;
        boolx(b);
        --depth;
    }

    void lvalue(const LValue& lv) {
        switch (lv.kind) {
        case LValue::Kind::Name: line("LName " + lv.name); break;
        case LValue::Kind::Index:
            line("LIndex " + lv.name);
            child(*lv.index);
            break;
        case LValue::Kind::Field:
            line("LField " + lv.name + "." + lv.field);
            break;
        }
    }

    void block(const Block& b) {
        line("Block");
        ++depth;
        for (const auto& s : b.stmts) stmt(*s);
        --depth;
    }

    void stmt(const Stmt& s) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, VarDecl>) {
                    line("VarDecl " + std::string(type_name_lexeme(node.type)) +
                         " " + node.name);
                    child(*node.init);
                } else if constexpr (std::is_same_v<T, ArrayDecl>) {
                    line("ArrayDecl " + std::string(type_name_lexeme(node.type)) +
                         " " + node.name + " size=" + std::to_string(node.size) +
                         (node.has_init ? " init" : ""));
                    ++depth;
                    for (const auto& e : node.init) expr(*e);
                    --depth;
                } else if constexpr (std::is_same_v<T, ObjectDecl>) {
                    line("ObjectDecl " + node.class_name + " " + node.name);
                } else if constexpr (std::is_same_v<T, AssignStmt>) {
                    line("Assign");
                    ++depth;
                    lvalue(node.target);
                    expr(*node.value);
                    --depth;
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    line("If");
                    ++depth;
                    boolx(*node.cond);
                    block(node.then_block);
                    if (node.else_block) block(*node.else_block);
                    --depth;
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    line("While");
                    ++depth;
                    boolx(*node.cond);
                    block(node.body);
                    --depth;
                } else if constexpr (std::is_same_v<T, ShowStmt>) {
                    line("Show");
                    child(*node.value);
                } else if constexpr (std::is_same_v<T, InputStmt>) {
                    line("Input \"" + node.prompt + "\"");
                    ++depth;
                    lvalue(node.target);
                    --depth;
                } else if constexpr (std::is_same_v<T, CallStmt>) {
                    line("CallStmt");
                    ++depth;
                    call(node.call);
                    --depth;
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    line("Return");
                    if (node.value) child(*node.value);
                }
            },
            s.node);
    }

    void function(const FunctionDecl& fn) {
        line("Function " + fn.name + " : " +
             std::string(return_type_lexeme(fn.return_type)));
        ++depth;
        for (const auto& p : fn.params)
            line("Param " + std::string(type_name_lexeme(p.type)) + " " + p.name);
        block(fn.body);
        --depth;
    }

    void class_decl(const ClassDecl& cls) {
        line("Class " + cls.name);
        ++depth;
        for (const auto& m : cls.members) {
            line(m.access == Access::Public ? "Public" : "Private");
            ++depth;
            if (m.method) {
                function(*m.method);
            } else {
                stmt(*m.field);
            }
            --depth;
        }
        --depth;
    }
};

} // namespace

std::string dump_ast(const Program& program) {
    Dumper d;
    d.line("Program");
    ++d.depth;
    for (const auto& item : program.items) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, std::unique_ptr<FunctionDecl>>) {
                    d.function(*node);
                } else if constexpr (std::is_same_v<T, StmtPtr>) {
                    d.stmt(*node);
                } else {
                    d.class_decl(*node);
                }
            },
            item.node);
    }
    return d.out;
}

std::string dump_ast(const Expr& expr) {
    Dumper d;
    d.expr(expr);
    return d.out;
}

std::string dump_ast(const BoolExpr& expr) {
    Dumper d;
    d.boolx(expr);
    return d.out;
}

} // namespace phoenix
