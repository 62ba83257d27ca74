#include "phoenix/ast.hpp"

namespace phoenix {

std::string_view type_name_lexeme(TypeName t) {
    switch (t) {
    case TypeName::Num: return "رقم";
    case TypeName::Str: return "كلمة";
    case TypeName::NumList: return "قائمة-رقم";
    case TypeName::StrList: return "قائمة-كلمة";
    }
    return "";
}

std::string_view return_type_lexeme(ReturnType t) {
    switch (t) {
    case ReturnType::Num: return "رقم";
    case ReturnType::Str: return "كلمة";
    case ReturnType::NumList: return "قائمة-رقم";
    case ReturnType::StrList: return "قائمة-كلمة";
    case ReturnType::Entry: return "البداية";
    }
    return "";
}

std::string_view bin_op_lexeme(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "×";
    case BinOp::Div: return "÷";
    case BinOp::Mod: return "%";
    case BinOp::Concat: return "&";
    }
    return "";
}

std::string_view cmp_op_lexeme(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    }
    return "";
}

} // namespace phoenix
