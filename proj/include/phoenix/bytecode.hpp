#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phoenix {

// One byte opcode, fixed-size little-endian operands.
enum class Op : uint8_t {
    PushNum = 0x01,     // u16 number-pool index
    PushStr = 0x02,     // u16 string-pool index
    Load = 0x03,        // u16 local slot
    Store = 0x04,       // u16 local slot
    LoadGlobal = 0x05,  // u16 global index
    StoreGlobal = 0x06, // u16 global index
    NewArr = 0x07,      // u8 element type (0 num, 1 str), u16 length
    LoadIdx = 0x08,     // pops index, array; pushes element
    StoreIdx = 0x09,    // pops value, index, array
    Add = 0x0A,
    Sub = 0x0B,
    Mul = 0x0C,
    Div = 0x0D,
    Mod = 0x0E,
    Neg = 0x0F,
    Concat = 0x10,
    NumToStr = 0x11,
    CmpEq = 0x12,
    CmpNe = 0x13,
    CmpLt = 0x14,
    CmpGt = 0x15,
    CmpLe = 0x16,
    CmpGe = 0x17,
    Jmp = 0x18,        // i32 relative to the byte after the operand
    JmpIfFalse = 0x19, // i32, pops the condition
    Call = 0x1A,       // u16 function index, u8 argument count
    Ret = 0x1B,        // pops the return value
    Show = 0x1C,       // pops a string, writes it plus newline
    Input = 0x1D,      // u8 kind (0 num, 1 str); pops prompt, pushes value
    NewObj = 0x1E,     // u16 class index
    GetField = 0x1F,   // u16 field index; pops object, pushes value
    SetField = 0x20,   // u16 field index; pops value, object
    Halt = 0x21,
};

std::string_view op_name(Op op);

// Storage type byte used by the global and class tables.
enum class SlotType : uint8_t {
    Num = 0,
    Str = 1,
    NumList = 2,
    StrList = 3,
    Object = 4,
};

struct FunctionChunk {
    std::string name;
    uint8_t param_count = 0;      // methods count the receiver
    uint16_t local_slot_count = 0; // parameters included
    std::vector<uint8_t> code;

    bool operator==(const FunctionChunk&) const = default;
};

struct GlobalInfo {
    std::string name;
    SlotType type = SlotType::Num;
    uint16_t aux = 0; // array length or class index, else 0

    bool operator==(const GlobalInfo&) const = default;
};

struct FieldInfo {
    std::string name;
    SlotType type = SlotType::Num;
    uint16_t aux = 0; // array length or class index, else 0
    double num_default = 0;
    std::string str_default;
    std::vector<double> num_list_default;       // length aux when type NumList
    std::vector<std::string> str_list_default;  // length aux when type StrList

    bool operator==(const FieldInfo&) const = default;
};

struct ClassInfo {
    std::string name;
    std::vector<FieldInfo> fields;

    bool operator==(const ClassInfo&) const = default;
};

struct ProgramImage {
    std::vector<double> num_pool;
    std::vector<std::string> str_pool;
    std::vector<GlobalInfo> globals;
    std::vector<ClassInfo> classes;
    std::vector<FunctionChunk> functions;
    uint16_t entry = 0;

    bool operator==(const ProgramImage&) const = default;
};

// A decoded instruction; `a` and `b` carry the raw unsigned operands and
// `rel` the signed jump distance.
struct Instr {
    Op op = Op::Halt;
    uint32_t a = 0;
    uint32_t b = 0;
    int32_t rel = 0;
    uint32_t size = 1; // full encoded size in bytes
};

// Decodes the instruction at `offset`. Returns false on an unknown opcode
// or truncated operands.
bool decode_instr(const std::vector<uint8_t>& code, size_t offset, Instr& out);

// Byte-deterministic image writer: equal images serialize to equal bytes.
std::vector<uint8_t> serialize_image(const ProgramImage& image);

// Parses and fully validates an image. Throws CompileError with code
// E-LNK-001 (call to a function index outside the table), E-LNK-002
// (unusable entry index), or E-LNK-003 (every other malformation).
ProgramImage load_image(const std::vector<uint8_t>& bytes);

// Human-readable listing of pools, tables, and per-function bytecode.
std::string disassemble(const ProgramImage& image);

// Simulates every chunk across all control-flow paths: the stack depth
// must stay non-negative, be consistent where paths merge, equal 1 just
// before RET (0 after its pop), and equal 0 at HALT. Execution may not
// run past the end of a chunk. Returns a description of the first
// violation, or nullopt when every chunk is disciplined.
std::optional<std::string> verify_stack_discipline(const ProgramImage& image);

} // namespace phoenix
