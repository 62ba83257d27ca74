#include "phoenix/bytecode.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

#include "phoenix/numfmt.hpp"
#include "phoenix/source.hpp"

namespace phoenix {

namespace {

constexpr char kMagic[4] = {'P', 'H', 'X', 'C'};
constexpr uint16_t kVersion = 1;

[[noreturn]] void link_fail(const char* code, std::string msg) {
    throw CompileError{{Severity::Error, Phase::Link, code, std::move(msg),
                        std::nullopt}};
}

[[noreturn]] void gen_fail(const char* code, std::string msg) {
    throw CompileError{{Severity::Error, Phase::Codegen, code, std::move(msg),
                        std::nullopt}};
}

int operand_bytes(Op op) {
    switch (op) {
    case Op::PushNum:
    case Op::PushStr:
    case Op::Load:
    case Op::Store:
    case Op::LoadGlobal:
    case Op::StoreGlobal:
    case Op::NewObj:
    case Op::GetField:
    case Op::SetField:
        return 2;
    case Op::NewArr:
    case Op::Call:
        return 3;
    case Op::Jmp:
    case Op::JmpIfFalse:
        return 4;
    case Op::Input:
        return 1;
    default:
        return 0;
    }
}

// Stack pops and pushes; Call pops its encoded argument count.
void stack_effect(const Instr& ins, int& pops, int& pushes) {
    switch (ins.op) {
    case Op::PushNum:
    case Op::PushStr:
    case Op::Load:
    case Op::LoadGlobal:
    case Op::NewArr:
    case Op::NewObj:
        pops = 0;
        pushes = 1;
        break;
    case Op::Store:
    case Op::StoreGlobal:
    case Op::Show:
    case Op::JmpIfFalse:
    case Op::Ret:
        pops = 1;
        pushes = 0;
        break;
    case Op::LoadIdx:
        pops = 2;
        pushes = 1;
        break;
    case Op::StoreIdx:
        pops = 3;
        pushes = 0;
        break;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Mod:
    case Op::Concat:
    case Op::CmpEq:
    case Op::CmpNe:
    case Op::CmpLt:
    case Op::CmpGt:
    case Op::CmpLe:
    case Op::CmpGe:
        pops = 2;
        pushes = 1;
        break;
    case Op::Neg:
    case Op::NumToStr:
    case Op::Input:
    case Op::GetField:
        pops = 1;
        pushes = 1;
        break;
    case Op::SetField:
        pops = 2;
        pushes = 0;
        break;
    case Op::Call:
        pops = static_cast<int>(ins.b);
        pushes = 1;
        break;
    case Op::Jmp:
    case Op::Halt:
        pops = 0;
        pushes = 0;
        break;
    }
}

std::string hex4(size_t offset) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04zx", offset);
    return buf;
}

class ByteWriter {
public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v));
        out_.push_back(static_cast<uint8_t>(v >> 8));
    }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i)
            out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void f64(double v) {
        uint64_t bits = std::bit_cast<uint64_t>(v);
        for (int i = 0; i < 8; ++i)
            out_.push_back(static_cast<uint8_t>(bits >> (8 * i)));
    }
    void raw(const void* data, size_t n) {
        const auto* p = static_cast<const uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    std::vector<uint8_t> take() { return std::move(out_); }

private:
    std::vector<uint8_t> out_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& data) : data_(data) {}

    void need(size_t n, const char* what) {
        if (data_.size() - pos_ < n) {
            link_fail("E-LNK-003",
                      std::string("malformed image: truncated ") + what);
        }
    }
    uint8_t u8(const char* what) {
        need(1, what);
        return data_[pos_++];
    }
    uint16_t u16(const char* what) {
        need(2, what);
        uint16_t v = static_cast<uint16_t>(data_[pos_] |
                                           (data_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }
    uint32_t u32(const char* what) {
        need(4, what);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }
    double f64(const char* what) {
        need(8, what);
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return std::bit_cast<double>(bits);
    }
    std::string str(const char* what) {
        uint32_t n = u32(what);
        need(n, what);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    std::vector<uint8_t> blob(size_t n, const char* what) {
        need(n, what);
        std::vector<uint8_t> out(data_.begin() + static_cast<long>(pos_),
                                 data_.begin() + static_cast<long>(pos_ + n));
        pos_ += n;
        return out;
    }
    bool done() const { return pos_ == data_.size(); }

private:
    const std::vector<uint8_t>& data_;
    size_t pos_ = 0;
};

SlotType read_slot_type(ByteReader& r, const char* what) {
    uint8_t b = r.u8(what);
    if (b > 4) {
        link_fail("E-LNK-003", std::string("malformed image: bad storage type in ") + what);
    }
    return static_cast<SlotType>(b);
}

void check_aux(SlotType type, uint16_t aux, size_t class_count,
               const std::string& where) {
    switch (type) {
    case SlotType::Num:
    case SlotType::Str:
        if (aux != 0) {
            link_fail("E-LNK-003",
                      "malformed image: nonzero aux for scalar " + where);
        }
        break;
    case SlotType::NumList:
    case SlotType::StrList:
        break;
    case SlotType::Object:
        if (aux >= class_count) {
            link_fail("E-LNK-003",
                      "malformed image: class index out of range in " + where);
        }
        break;
    }
}

void check_class_cycles(const ProgramImage& image) {
    std::vector<int> color(image.classes.size(), 0);
    // iterative DFS: object fields form the composition graph
    for (size_t root = 0; root < image.classes.size(); ++root) {
        if (color[root] != 0) continue;
        std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
        color[root] = 1;
        while (!stack.empty()) {
            auto& [ci, fi] = stack.back();
            const ClassInfo& cls = image.classes[ci];
            bool descended = false;
            while (fi < cls.fields.size()) {
                const FieldInfo& f = cls.fields[fi++];
                if (f.type != SlotType::Object) continue;
                size_t target = f.aux;
                if (color[target] == 1) {
                    link_fail("E-LNK-003",
                              "malformed image: recursive composition in class '" +
                                  cls.name + "'");
                }
                if (color[target] == 0) {
                    color[target] = 1;
                    stack.push_back({target, 0});
                    descended = true;
                    break;
                }
            }
            if (!descended && (stack.back().second >= cls.fields.size())) {
                color[ci] = 2;
                stack.pop_back();
            }
        }
    }
}

void validate_chunk(const ProgramImage& image, const FunctionChunk& f) {
    const auto& code = f.code;
    std::vector<bool> boundary(code.size() + 1, false);
    std::vector<std::pair<size_t, Instr>> jumps;

    size_t off = 0;
    while (off < code.size()) {
        boundary[off] = true;
        Instr ins;
        if (!decode_instr(code, off, ins)) {
            link_fail("E-LNK-003", "malformed image: bad instruction at offset " +
                                       hex4(off) + " in '" + f.name + "'");
        }
        switch (ins.op) {
        case Op::PushNum:
            if (ins.a >= image.num_pool.size())
                link_fail("E-LNK-003", "malformed image: number index out of range in '" +
                                           f.name + "'");
            break;
        case Op::PushStr:
            if (ins.a >= image.str_pool.size())
                link_fail("E-LNK-003", "malformed image: string index out of range in '" +
                                           f.name + "'");
            break;
        case Op::Load:
        case Op::Store:
            if (ins.a >= f.local_slot_count)
                link_fail("E-LNK-003", "malformed image: local slot out of range in '" +
                                           f.name + "'");
            break;
        case Op::LoadGlobal:
        case Op::StoreGlobal:
            if (ins.a >= image.globals.size())
                link_fail("E-LNK-003", "malformed image: global index out of range in '" +
                                           f.name + "'");
            break;
        case Op::NewArr:
            if (ins.a > 1)
                link_fail("E-LNK-003", "malformed image: bad element type in '" +
                                           f.name + "'");
            break;
        case Op::Input:
            if (ins.a > 1)
                link_fail("E-LNK-003", "malformed image: bad input kind in '" +
                                           f.name + "'");
            break;
        case Op::NewObj:
            if (ins.a >= image.classes.size())
                link_fail("E-LNK-003", "malformed image: class index out of range in '" +
                                           f.name + "'");
            break;
        case Op::Call:
            if (ins.a >= image.functions.size())
                link_fail("E-LNK-001", "call to unresolved function index " +
                                           std::to_string(ins.a) + " in '" +
                                           f.name + "'");
            if (ins.b != image.functions[ins.a].param_count)
                link_fail("E-LNK-003",
                          "malformed image: call argument count mismatch in '" +
                              f.name + "'");
            break;
        case Op::Jmp:
        case Op::JmpIfFalse:
            jumps.push_back({off, ins});
            break;
        default:
            break;
        }
        off += ins.size;
    }
    boundary[code.size()] = true; // only as a guard value, never a target

    for (const auto& [joff, ins] : jumps) {
        int64_t target = static_cast<int64_t>(joff) + ins.size + ins.rel;
        if (target < 0 || target >= static_cast<int64_t>(code.size()) ||
            !boundary[static_cast<size_t>(target)]) {
            link_fail("E-LNK-003", "malformed image: jump target out of range at offset " +
                                       hex4(joff) + " in '" + f.name + "'");
        }
    }
}

void validate_image(const ProgramImage& image) {
    for (const GlobalInfo& g : image.globals) {
        check_aux(g.type, g.aux, image.classes.size(), "global '" + g.name + "'");
    }
    for (const ClassInfo& c : image.classes) {
        for (const FieldInfo& f : c.fields) {
            check_aux(f.type, f.aux, image.classes.size(),
                      "field '" + c.name + "." + f.name + "'");
            if (f.type == SlotType::NumList &&
                f.num_list_default.size() != f.aux) {
                link_fail("E-LNK-003", "malformed image: array default length mismatch in '" +
                                           c.name + "." + f.name + "'");
            }
            if (f.type == SlotType::StrList &&
                f.str_list_default.size() != f.aux) {
                link_fail("E-LNK-003", "malformed image: array default length mismatch in '" +
                                           c.name + "." + f.name + "'");
            }
        }
    }
    check_class_cycles(image);

    if (image.functions.empty() || image.entry >= image.functions.size()) {
        link_fail("E-LNK-002", "missing entry function");
    }
    if (image.functions[image.entry].param_count != 0) {
        link_fail("E-LNK-003", "malformed image: entry function takes parameters");
    }
    for (const FunctionChunk& f : image.functions) {
        validate_chunk(image, f);
    }
}

} // namespace

std::string_view op_name(Op op) {
    switch (op) {
    case Op::PushNum: return "PUSH_NUM";
    case Op::PushStr: return "PUSH_STR";
    case Op::Load: return "LOAD";
    case Op::Store: return "STORE";
    case Op::LoadGlobal: return "LOAD_GLOBAL";
    case Op::StoreGlobal: return "STORE_GLOBAL";
    case Op::NewArr: return "NEW_ARR";
    case Op::LoadIdx: return "LOAD_IDX";
    case Op::StoreIdx: return "STORE_IDX";
    case Op::Add: return "ADD";
    case Op::Sub: return "SUB";
    case Op::Mul: return "MUL";
    case Op::Div: return "DIV";
    case Op::Mod: return "MOD";
    case Op::Neg: return "NEG";
    case Op::Concat: return "CONCAT";
    case Op::NumToStr: return "NUM_TO_STR";
    case Op::CmpEq: return "CMP_EQ";
    case Op::CmpNe: return "CMP_NE";
    case Op::CmpLt: return "CMP_LT";
    case Op::CmpGt: return "CMP_GT";
    case Op::CmpLe: return "CMP_LE";
    case Op::CmpGe: return "CMP_GE";
    case Op::Jmp: return "JMP";
    case Op::JmpIfFalse: return "JMP_IF_FALSE";
    case Op::Call: return "CALL";
    case Op::Ret: return "RET";
    case Op::Show: return "SHOW";
    case Op::Input: return "INPUT";
    case Op::NewObj: return "NEW_OBJ";
    case Op::GetField: return "GET_FIELD";
    case Op::SetField: return "SET_FIELD";
    case Op::Halt: return "HALT";
    }
    return "?";
}

bool decode_instr(const std::vector<uint8_t>& code, size_t offset, Instr& out) {
    if (offset >= code.size()) return false;
    uint8_t byte = code[offset];
    if (byte < 0x01 || byte > 0x21) return false;
    Op op = static_cast<Op>(byte);
    size_t nbytes = static_cast<size_t>(operand_bytes(op));
    if (code.size() - offset < 1 + nbytes) return false;

    out = Instr{};
    out.op = op;
    out.size = static_cast<uint32_t>(1 + nbytes);
    const uint8_t* p = code.data() + offset + 1;
    auto rd16 = [&](size_t at) {
        return static_cast<uint32_t>(p[at]) |
               (static_cast<uint32_t>(p[at + 1]) << 8);
    };
    switch (op) {
    case Op::PushNum:
    case Op::PushStr:
    case Op::Load:
    case Op::Store:
    case Op::LoadGlobal:
    case Op::StoreGlobal:
    case Op::NewObj:
    case Op::GetField:
    case Op::SetField:
        out.a = rd16(0);
        break;
    case Op::NewArr:
        out.a = p[0];
        out.b = rd16(1);
        break;
    case Op::Call:
        out.a = rd16(0);
        out.b = p[2];
        break;
    case Op::Jmp:
    case Op::JmpIfFalse: {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(p[i]) << (8 * i);
        out.rel = static_cast<int32_t>(v);
        break;
    }
    case Op::Input:
        out.a = p[0];
        break;
    default:
        break;
    }
    return true;
}

std::vector<uint8_t> serialize_image(const ProgramImage& image) {
    if (image.num_pool.size() > 0xFFFF || image.str_pool.size() > 0xFFFF) {
        gen_fail("E-GEN-002", "constant pool exceeds 65535 entries");
    }
    if (image.globals.size() > 0xFFFF || image.classes.size() > 0xFFFF ||
        image.functions.size() > 0xFFFF) {
        gen_fail("E-GEN-003", "table exceeds 65535 entries");
    }

    ByteWriter w;
    w.raw(kMagic, 4);
    w.u16(kVersion);

    w.u16(static_cast<uint16_t>(image.num_pool.size()));
    for (double v : image.num_pool) w.f64(v);

    w.u16(static_cast<uint16_t>(image.str_pool.size()));
    for (const std::string& s : image.str_pool) w.str(s);

    w.u16(static_cast<uint16_t>(image.globals.size()));
    for (const GlobalInfo& g : image.globals) {
        w.u8(static_cast<uint8_t>(g.type));
        w.u16(g.aux);
        w.str(g.name);
    }

    w.u16(static_cast<uint16_t>(image.classes.size()));
    for (const ClassInfo& c : image.classes) {
        if (c.fields.size() > 0xFFFF) {
            gen_fail("E-GEN-003", "class '" + c.name + "' exceeds 65535 fields");
        }
        w.str(c.name);
        w.u16(static_cast<uint16_t>(c.fields.size()));
        for (const FieldInfo& f : c.fields) {
            w.str(f.name);
            w.u8(static_cast<uint8_t>(f.type));
            w.u16(f.aux);
            switch (f.type) {
            case SlotType::Num:
                w.f64(f.num_default);
                break;
            case SlotType::Str:
                w.str(f.str_default);
                break;
            case SlotType::NumList:
                w.u32(static_cast<uint32_t>(f.num_list_default.size()));
                for (double v : f.num_list_default) w.f64(v);
                break;
            case SlotType::StrList:
                w.u32(static_cast<uint32_t>(f.str_list_default.size()));
                for (const std::string& s : f.str_list_default) w.str(s);
                break;
            case SlotType::Object:
                break;
            }
        }
    }

    w.u16(static_cast<uint16_t>(image.functions.size()));
    for (const FunctionChunk& f : image.functions) {
        w.str(f.name);
        w.u8(f.param_count);
        w.u16(f.local_slot_count);
        w.u32(static_cast<uint32_t>(f.code.size()));
        w.raw(f.code.data(), f.code.size());
    }

    w.u16(image.entry);
    return w.take();
}

ProgramImage load_image(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    r.need(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        link_fail("E-LNK-003", "malformed image: bad magic");
    }
    (void)r.blob(4, "magic");
    uint16_t version = r.u16("version");
    if (version != kVersion) {
        link_fail("E-LNK-003", "malformed image: unsupported version " +
                                   std::to_string(version));
    }

    ProgramImage image;

    uint16_t num_count = r.u16("number pool");
    image.num_pool.reserve(num_count);
    for (uint16_t i = 0; i < num_count; ++i)
        image.num_pool.push_back(r.f64("number pool"));

    uint16_t str_count = r.u16("string pool");
    image.str_pool.reserve(str_count);
    for (uint16_t i = 0; i < str_count; ++i)
        image.str_pool.push_back(r.str("string pool"));

    uint16_t global_count = r.u16("global table");
    image.globals.reserve(global_count);
    for (uint16_t i = 0; i < global_count; ++i) {
        GlobalInfo g;
        g.type = read_slot_type(r, "global table");
        g.aux = r.u16("global table");
        g.name = r.str("global table");
        image.globals.push_back(std::move(g));
    }

    uint16_t class_count = r.u16("class table");
    image.classes.reserve(class_count);
    for (uint16_t i = 0; i < class_count; ++i) {
        ClassInfo c;
        c.name = r.str("class table");
        uint16_t field_count = r.u16("class table");
        c.fields.reserve(field_count);
        for (uint16_t j = 0; j < field_count; ++j) {
            FieldInfo f;
            f.name = r.str("class field");
            f.type = read_slot_type(r, "class field");
            f.aux = r.u16("class field");
            switch (f.type) {
            case SlotType::Num:
                f.num_default = r.f64("field default");
                break;
            case SlotType::Str:
                f.str_default = r.str("field default");
                break;
            case SlotType::NumList: {
                uint32_t n = r.u32("field default");
                f.num_list_default.reserve(n);
                for (uint32_t k = 0; k < n; ++k)
                    f.num_list_default.push_back(r.f64("field default"));
                break;
            }
            case SlotType::StrList: {
                uint32_t n = r.u32("field default");
                f.str_list_default.reserve(n);
                for (uint32_t k = 0; k < n; ++k)
                    f.str_list_default.push_back(r.str("field default"));
                break;
            }
            case SlotType::Object:
                break;
            }
            c.fields.push_back(std::move(f));
        }
        image.classes.push_back(std::move(c));
    }

    uint16_t fn_count = r.u16("function table");
    image.functions.reserve(fn_count);
    for (uint16_t i = 0; i < fn_count; ++i) {
        FunctionChunk f;
        f.name = r.str("function table");
        f.param_count = r.u8("function table");
        f.local_slot_count = r.u16("function table");
        uint32_t code_len = r.u32("function table");
        std::vector<uint8_t> code = r.blob(code_len, "function code");
        f.code = std::move(code);
        image.functions.push_back(std::move(f));
    }

    image.entry = r.u16("entry index");
    if (!r.done()) {
        link_fail("E-LNK-003", "malformed image: trailing bytes");
    }

    validate_image(image);
    return image;
}

std::string disassemble(const ProgramImage& image) {
    std::string out;
    auto line = [&](const std::string& s) {
        out += s;
        out += '\n';
    };

    line("numbers: " + std::to_string(image.num_pool.size()));
    for (size_t i = 0; i < image.num_pool.size(); ++i) {
        line("  [" + std::to_string(i) + "] " + num_to_str(image.num_pool[i]));
    }
    line("strings: " + std::to_string(image.str_pool.size()));
    for (size_t i = 0; i < image.str_pool.size(); ++i) {
        line("  [" + std::to_string(i) + "] \"" + image.str_pool[i] + "\"");
    }

    auto slot_desc = [&](SlotType type, uint16_t aux) -> std::string {
        switch (type) {
        case SlotType::Num: return "num";
        case SlotType::Str: return "str";
        case SlotType::NumList: return "num[" + std::to_string(aux) + "]";
        case SlotType::StrList: return "str[" + std::to_string(aux) + "]";
        case SlotType::Object:
            return "obj " + (aux < image.classes.size()
                                 ? image.classes[aux].name
                                 : "?" + std::to_string(aux));
        }
        return "?";
    };

    line("globals: " + std::to_string(image.globals.size()));
    for (size_t i = 0; i < image.globals.size(); ++i) {
        const GlobalInfo& g = image.globals[i];
        line("  [" + std::to_string(i) + "] " + slot_desc(g.type, g.aux) + " " +
             g.name);
    }

    line("classes: " + std::to_string(image.classes.size()));
    for (size_t i = 0; i < image.classes.size(); ++i) {
        const ClassInfo& c = image.classes[i];
        line("class " + std::to_string(i) + ": " + c.name);
        for (size_t j = 0; j < c.fields.size(); ++j) {
            const FieldInfo& f = c.fields[j];
            std::string s = "  field " + std::to_string(j) + ": " +
                            slot_desc(f.type, f.aux) + " " + f.name;
            switch (f.type) {
            case SlotType::Num:
                s += " = " + num_to_str(f.num_default);
                break;
            case SlotType::Str:
                s += " = \"" + f.str_default + "\"";
                break;
            case SlotType::NumList:
                s += " = {";
                for (size_t k = 0; k < f.num_list_default.size(); ++k) {
                    s += (k ? ", " : " ") + num_to_str(f.num_list_default[k]);
                }
                s += " }";
                break;
            case SlotType::StrList:
                s += " = {";
                for (size_t k = 0; k < f.str_list_default.size(); ++k) {
                    s += (k ? ", \"" : " \"") + f.str_list_default[k] + "\"";
                }
                s += " }";
                break;
            case SlotType::Object:
                break;
            }
            line(s);
        }
    }

    line("functions: " + std::to_string(image.functions.size()) + ", entry " +
         std::to_string(image.entry));

    for (size_t fi = 0; fi < image.functions.size(); ++fi) {
        const FunctionChunk& f = image.functions[fi];
        line("");
        line("function " + std::to_string(fi) + ": " + f.name + " (params " +
             std::to_string(f.param_count) + ", locals " +
             std::to_string(f.local_slot_count) + ")");

        size_t off = 0;
        while (off < f.code.size()) {
            Instr ins;
            if (!decode_instr(f.code, off, ins)) {
                line("  " + hex4(off) + ": ??");
                break;
            }
            std::string text(op_name(ins.op));
            std::string comment;
            switch (ins.op) {
            case Op::PushNum:
                text += " " + std::to_string(ins.a);
                if (ins.a < image.num_pool.size())
                    comment = num_to_str(image.num_pool[ins.a]);
                break;
            case Op::PushStr:
                text += " " + std::to_string(ins.a);
                if (ins.a < image.str_pool.size())
                    comment = "\"" + image.str_pool[ins.a] + "\"";
                break;
            case Op::Load:
            case Op::Store:
            case Op::GetField:
            case Op::SetField:
                text += " " + std::to_string(ins.a);
                break;
            case Op::LoadGlobal:
            case Op::StoreGlobal:
                text += " " + std::to_string(ins.a);
                if (ins.a < image.globals.size())
                    comment = image.globals[ins.a].name;
                break;
            case Op::NewArr:
                text += std::string(" ") + (ins.a == 0 ? "num" : "str") + " " +
                        std::to_string(ins.b);
                break;
            case Op::Call:
                text += " " + std::to_string(ins.a) + " " + std::to_string(ins.b);
                if (ins.a < image.functions.size())
                    comment = image.functions[ins.a].name;
                break;
            case Op::Input:
                text += std::string(" ") + (ins.a == 0 ? "num" : "str");
                break;
            case Op::NewObj:
                text += " " + std::to_string(ins.a);
                if (ins.a < image.classes.size())
                    comment = image.classes[ins.a].name;
                break;
            case Op::Jmp:
            case Op::JmpIfFalse: {
                text += " " + std::string(ins.rel >= 0 ? "+" : "") +
                        std::to_string(ins.rel);
                int64_t target =
                    static_cast<int64_t>(off) + ins.size + ins.rel;
                comment = "-> " + hex4(static_cast<size_t>(target));
                break;
            }
            default:
                break;
            }
            std::string row = "  " + hex4(off) + ": " + text;
            if (!comment.empty()) {
                size_t pad = row.size() < 34 ? 34 - row.size() : 1;
                row += std::string(pad, ' ') + "; " + comment;
            }
            line(row);
            off += ins.size;
        }
    }
    return out;
}

std::optional<std::string> verify_stack_discipline(const ProgramImage& image) {
    for (const FunctionChunk& f : image.functions) {
        const auto& code = f.code;
        if (code.empty()) {
            return "function '" + f.name + "': empty code";
        }
        std::vector<int32_t> depth(code.size(), -1);
        std::vector<size_t> work;
        depth[0] = 0;
        work.push_back(0);

        std::optional<std::string> problem;
        auto fail = [&](size_t off, const std::string& what) {
            problem = "function '" + f.name + "': " + what + " at offset " +
                      hex4(off);
        };

        while (!work.empty() && !problem) {
            size_t off = work.back();
            work.pop_back();
            int32_t d = depth[static_cast<size_t>(off)];

            Instr ins;
            if (!decode_instr(code, off, ins)) {
                fail(off, "undecodable instruction");
                break;
            }

            if (ins.op == Op::Ret) {
                if (d != 1) {
                    fail(off, "stack depth " + std::to_string(d) +
                                  " before RET, expected 1");
                }
                continue;
            }
            if (ins.op == Op::Halt) {
                if (d != 0) {
                    fail(off, "stack depth " + std::to_string(d) +
                                  " at HALT, expected 0");
                }
                continue;
            }

            int pops = 0, pushes = 0;
            stack_effect(ins, pops, pushes);
            if (d < pops) {
                fail(off, "stack underflow");
                break;
            }
            int32_t d2 = d - pops + pushes;

            auto flow_to = [&](int64_t target, int32_t nd) {
                if (problem) return;
                if (target == static_cast<int64_t>(code.size())) {
                    fail(off, "execution runs past the end");
                    return;
                }
                if (target < 0 || target > static_cast<int64_t>(code.size())) {
                    fail(off, "jump out of range");
                    return;
                }
                auto t = static_cast<size_t>(target);
                if (depth[t] == -1) {
                    depth[t] = nd;
                    work.push_back(t);
                } else if (depth[t] != nd) {
                    problem = "function '" + f.name +
                              "': inconsistent stack depth at offset " + hex4(t);
                }
            };

            if (ins.op == Op::Jmp) {
                flow_to(static_cast<int64_t>(off) + ins.size + ins.rel, d2);
            } else if (ins.op == Op::JmpIfFalse) {
                flow_to(static_cast<int64_t>(off) + ins.size + ins.rel, d2);
                flow_to(static_cast<int64_t>(off) + ins.size, d2);
            } else {
                flow_to(static_cast<int64_t>(off) + ins.size, d2);
            }
        }
        if (problem) return problem;
    }
    return std::nullopt;
}

} // namespace phoenix
