#include "doctest.h"

#include "phoenix/bytecode.hpp"
#include "support.hpp"

using namespace phoenix;
using namespace phoenix::test;

namespace {

// Small chunk assembler for hand-built images.
struct CodeBuf {
    std::vector<uint8_t> bytes;

    CodeBuf& op(Op o) {
        bytes.push_back(static_cast<uint8_t>(o));
        return *this;
    }
    CodeBuf& u8(uint8_t v) {
        bytes.push_back(v);
        return *this;
    }
    CodeBuf& u16(uint16_t v) {
        bytes.push_back(static_cast<uint8_t>(v));
        bytes.push_back(static_cast<uint8_t>(v >> 8));
        return *this;
    }
    CodeBuf& i32(int32_t v) {
        auto u = static_cast<uint32_t>(v);
        for (int i = 0; i < 4; ++i)
            bytes.push_back(static_cast<uint8_t>(u >> (8 * i)));
        return *this;
    }
};

ProgramImage entry_image(std::vector<uint8_t> code, uint16_t locals = 0) {
    ProgramImage image;
    FunctionChunk f;
    f.name = "البداية";
    f.param_count = 0;
    f.local_slot_count = locals;
    f.code = std::move(code);
    image.functions.push_back(std::move(f));
    image.entry = 0;
    return image;
}

Diagnostic load_error(const ProgramImage& image) {
    auto bytes = serialize_image(image);
    return expect_error([&] { (void)load_image(bytes); });
}

} // namespace

TEST_CASE("image with every feature round-trips") {
    ProgramImage image;
    image.num_pool = {0.0, 5.0, -2.5};
    image.str_pool = {"المعدل هو ", ""};

    image.globals.push_back({"عدد", SlotType::Num, 0});
    image.globals.push_back({"اسم", SlotType::Str, 0});
    image.globals.push_back({"قيم", SlotType::NumList, 3});
    image.globals.push_back({"كلمات", SlotType::StrList, 2});
    image.globals.push_back({"نقطة", SlotType::Object, 0});

    ClassInfo cls;
    cls.name = "زوج";
    FieldInfo f1;
    f1.name = "س";
    f1.type = SlotType::Num;
    f1.num_default = 7.0;
    FieldInfo f2;
    f2.name = "ص";
    f2.type = SlotType::Str;
    f2.str_default = "فارغ";
    FieldInfo f3;
    f3.name = "ق";
    f3.type = SlotType::NumList;
    f3.aux = 2;
    f3.num_list_default = {1.0, 2.0};
    FieldInfo f4;
    f4.name = "ك";
    f4.type = SlotType::StrList;
    f4.aux = 1;
    f4.str_list_default = {"أ"};
    cls.fields = {f1, f2, f3, f4};
    image.classes.push_back(cls);

    ClassInfo outer;
    outer.name = "حاوية";
    FieldInfo inner;
    inner.name = "داخل";
    inner.type = SlotType::Object;
    inner.aux = 0;
    outer.fields = {inner};
    image.classes.push_back(outer);

    FunctionChunk helper;
    helper.name = "مساعد";
    helper.param_count = 1;
    helper.local_slot_count = 2;
    helper.code = CodeBuf{}
                      .op(Op::Load).u16(0)
                      .op(Op::Neg)
                      .op(Op::Ret)
                      .bytes;
    image.functions.push_back(helper);

    CodeBuf main;
    main.op(Op::PushNum).u16(1);
    main.op(Op::Call).u16(0).u8(1);
    main.op(Op::Store).u16(0);
    main.op(Op::Halt);
    FunctionChunk entry;
    entry.name = "البداية";
    entry.param_count = 0;
    entry.local_slot_count = 1;
    entry.code = main.bytes;
    image.functions.push_back(entry);
    image.entry = 1;

    auto bytes = serialize_image(image);
    ProgramImage loaded = load_image(bytes);
    CHECK(loaded == image);

    auto again = serialize_image(loaded);
    CHECK(again == bytes);
}

TEST_CASE("image header starts with magic and version") {
    auto bytes = serialize_image(entry_image(CodeBuf{}.op(Op::Halt).bytes));
    REQUIRE(bytes.size() >= 6);
    CHECK(bytes[0] == 'P');
    CHECK(bytes[1] == 'H');
    CHECK(bytes[2] == 'X');
    CHECK(bytes[3] == 'C');
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
}

TEST_CASE("bad magic is rejected") {
    auto bytes = serialize_image(entry_image(CodeBuf{}.op(Op::Halt).bytes));
    bytes[0] = 'Q';
    Diagnostic d = expect_error([&] { (void)load_image(bytes); });
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message == "malformed image: bad magic");
}

TEST_CASE("unsupported version is rejected") {
    auto bytes = serialize_image(entry_image(CodeBuf{}.op(Op::Halt).bytes));
    bytes[4] = 9;
    Diagnostic d = expect_error([&] { (void)load_image(bytes); });
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message == "malformed image: unsupported version 9");
}

TEST_CASE("truncated image is rejected") {
    auto bytes = serialize_image(entry_image(CodeBuf{}.op(Op::Halt).bytes));
    for (size_t cut = 0; cut < bytes.size(); ++cut) {
        std::vector<uint8_t> prefix(bytes.begin(),
                                    bytes.begin() + static_cast<long>(cut));
        Diagnostic d = expect_error([&] { (void)load_image(prefix); });
        CHECK(d.code == "E-LNK-003");
    }
}

TEST_CASE("trailing bytes are rejected") {
    auto bytes = serialize_image(entry_image(CodeBuf{}.op(Op::Halt).bytes));
    bytes.push_back(0);
    Diagnostic d = expect_error([&] { (void)load_image(bytes); });
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message == "malformed image: trailing bytes");
}

TEST_CASE("missing entry function") {
    SUBCASE("empty function table") {
        ProgramImage image;
        image.entry = 0;
        Diagnostic d = load_error(image);
        CHECK(d.code == "E-LNK-002");
        CHECK(d.message == "missing entry function");
    }
    SUBCASE("entry index out of range") {
        ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        image.entry = 3;
        Diagnostic d = load_error(image);
        CHECK(d.code == "E-LNK-002");
    }
}

TEST_CASE("entry function must not take parameters") {
    ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
    image.functions[0].param_count = 1;
    Diagnostic d = load_error(image);
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message == "malformed image: entry function takes parameters");
}

TEST_CASE("call to a function index outside the table") {
    CodeBuf code;
    code.op(Op::Call).u16(7).u8(0);
    code.op(Op::Halt);
    Diagnostic d = load_error(entry_image(code.bytes));
    CHECK(d.code == "E-LNK-001");
    CHECK(d.message == "call to unresolved function index 7 in 'البداية'");
}

TEST_CASE("call argument count must match the callee") {
    ProgramImage image = entry_image(
        CodeBuf{}
            .op(Op::PushNum).u16(0)
            .op(Op::PushNum).u16(0)
            .op(Op::Call).u16(1).u8(2)
            .op(Op::Store).u16(0)
            .op(Op::Halt)
            .bytes,
        1);
    image.num_pool = {4.0};
    FunctionChunk callee;
    callee.name = "ضعف";
    callee.param_count = 1;
    callee.local_slot_count = 1;
    callee.code = CodeBuf{}.op(Op::Load).u16(0).op(Op::Ret).bytes;
    image.functions.push_back(callee);
    Diagnostic d = load_error(image);
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message ==
          "malformed image: call argument count mismatch in 'البداية'");
}

TEST_CASE("pool and slot indexes are bounds-checked") {
    SUBCASE("number pool") {
        CodeBuf code;
        code.op(Op::PushNum).u16(0);
        code.op(Op::Show);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("string pool") {
        CodeBuf code;
        code.op(Op::PushStr).u16(2);
        code.op(Op::Show);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("local slot") {
        CodeBuf code;
        code.op(Op::Load).u16(0);
        code.op(Op::Show);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes, 0));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("global slot") {
        CodeBuf code;
        code.op(Op::LoadGlobal).u16(0);
        code.op(Op::Show);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("class index") {
        CodeBuf code;
        code.op(Op::NewObj).u16(0);
        code.op(Op::Store).u16(0);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes, 1));
        CHECK(d.code == "E-LNK-003");
    }
}

TEST_CASE("undecodable code bytes are rejected") {
    SUBCASE("unknown opcode") {
        Diagnostic d = load_error(entry_image({0xEE}));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("truncated operand") {
        Diagnostic d = load_error(
            entry_image({static_cast<uint8_t>(Op::PushNum), 0x00}));
        CHECK(d.code == "E-LNK-003");
    }
}

TEST_CASE("jump targets must land on instruction boundaries") {
    SUBCASE("into the middle of an instruction") {
        CodeBuf code;
        code.op(Op::Jmp).i32(1); // lands inside the PUSH_NUM below
        code.op(Op::PushNum).u16(0);
        code.op(Op::Show);
        code.op(Op::Halt);
        ProgramImage image = entry_image(code.bytes);
        image.num_pool = {1.0};
        Diagnostic d = load_error(image);
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("past the end") {
        CodeBuf code;
        code.op(Op::Jmp).i32(5);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("before the start") {
        CodeBuf code;
        code.op(Op::Jmp).i32(-6);
        code.op(Op::Halt);
        Diagnostic d = load_error(entry_image(code.bytes));
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("backward to the start is fine") {
        CodeBuf code;
        code.op(Op::Jmp).i32(-5);
        ProgramImage image = entry_image(code.bytes);
        auto loaded = load_image(serialize_image(image));
        CHECK(loaded.functions.size() == 1);
    }
}

TEST_CASE("scalar globals must carry no aux value") {
    ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
    image.globals.push_back({"عدد", SlotType::Num, 3});
    Diagnostic d = load_error(image);
    CHECK(d.code == "E-LNK-003");
}

TEST_CASE("object global must name a real class") {
    ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
    image.globals.push_back({"نقطة", SlotType::Object, 0});
    Diagnostic d = load_error(image);
    CHECK(d.code == "E-LNK-003");
}

TEST_CASE("array field default length must match its declared length") {
    ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
    ClassInfo cls;
    cls.name = "صف";
    FieldInfo f;
    f.name = "ق";
    f.type = SlotType::NumList;
    f.aux = 3;
    f.num_list_default = {1.0};
    cls.fields = {f};
    image.classes.push_back(cls);
    Diagnostic d = load_error(image);
    CHECK(d.code == "E-LNK-003");
    CHECK(d.message ==
          "malformed image: array default length mismatch in 'صف.ق'");
}

TEST_CASE("recursive class composition is rejected at load") {
    SUBCASE("self cycle") {
        ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        ClassInfo cls;
        cls.name = "ذات";
        FieldInfo f;
        f.name = "نفس";
        f.type = SlotType::Object;
        f.aux = 0;
        cls.fields = {f};
        image.classes.push_back(cls);
        Diagnostic d = load_error(image);
        CHECK(d.code == "E-LNK-003");
        CHECK(d.message ==
              "malformed image: recursive composition in class 'ذات'");
    }
    SUBCASE("two-class cycle") {
        ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        ClassInfo a;
        a.name = "أ";
        FieldInfo fa;
        fa.name = "ب_حقل";
        fa.type = SlotType::Object;
        fa.aux = 1;
        a.fields = {fa};
        ClassInfo b;
        b.name = "ب";
        FieldInfo fb;
        fb.name = "أ_حقل";
        fb.type = SlotType::Object;
        fb.aux = 0;
        b.fields = {fb};
        image.classes = {a, b};
        Diagnostic d = load_error(image);
        CHECK(d.code == "E-LNK-003");
    }
    SUBCASE("diamond without a cycle is fine") {
        ProgramImage image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        ClassInfo leaf;
        leaf.name = "ورقة";
        FieldInfo n;
        n.name = "س";
        n.type = SlotType::Num;
        leaf.fields = {n};
        ClassInfo left;
        left.name = "يسار";
        FieldInfo fl;
        fl.name = "و";
        fl.type = SlotType::Object;
        fl.aux = 0;
        left.fields = {fl};
        ClassInfo right;
        right.name = "يمين";
        FieldInfo fr;
        fr.name = "و";
        fr.type = SlotType::Object;
        fr.aux = 0;
        right.fields = {fr};
        ClassInfo top;
        top.name = "قمة";
        FieldInfo t1;
        t1.name = "ي";
        t1.type = SlotType::Object;
        t1.aux = 1;
        FieldInfo t2;
        t2.name = "م";
        t2.type = SlotType::Object;
        t2.aux = 2;
        top.fields = {t1, t2};
        image.classes = {leaf, left, right, top};
        auto loaded = load_image(serialize_image(image));
        CHECK(loaded.classes.size() == 4);
    }
}

TEST_CASE("decode_instr edge cases") {
    Instr ins;
    std::vector<uint8_t> empty;
    CHECK_FALSE(decode_instr(empty, 0, ins));

    std::vector<uint8_t> zero = {0x00};
    CHECK_FALSE(decode_instr(zero, 0, ins));
    std::vector<uint8_t> high = {0x22};
    CHECK_FALSE(decode_instr(high, 0, ins));

    std::vector<uint8_t> trunc = {static_cast<uint8_t>(Op::Jmp), 1, 0, 0};
    CHECK_FALSE(decode_instr(trunc, 0, ins));

    auto jmp = CodeBuf{}.op(Op::Jmp).i32(-42).bytes;
    REQUIRE(decode_instr(jmp, 0, ins));
    CHECK(ins.op == Op::Jmp);
    CHECK(ins.rel == -42);
    CHECK(ins.size == 5);

    auto call = CodeBuf{}.op(Op::Call).u16(300).u8(2).bytes;
    REQUIRE(decode_instr(call, 0, ins));
    CHECK(ins.a == 300);
    CHECK(ins.b == 2);
    CHECK(ins.size == 4);

    auto arr = CodeBuf{}.op(Op::NewArr).u8(1).u16(9).bytes;
    REQUIRE(decode_instr(arr, 0, ins));
    CHECK(ins.a == 1);
    CHECK(ins.b == 9);

    auto halt = CodeBuf{}.op(Op::Halt).bytes;
    REQUIRE(decode_instr(halt, 0, ins));
    CHECK(ins.size == 1);
}

TEST_CASE("disassembly of a bare entry chunk") {
    auto image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
    std::string text = disassemble(image);
    CHECK(text.find("0000: HALT") != std::string::npos);
    CHECK(text.find("functions: 1, entry 0") != std::string::npos);
    CHECK(text.find("function 0: البداية (params 0, locals 0)") !=
          std::string::npos);
}

TEST_CASE("disassembly annotates operands") {
    ProgramImage image;
    image.num_pool = {2.5};
    image.str_pool = {"مرحبا"};
    image.globals.push_back({"عدد", SlotType::Num, 0});
    CodeBuf code;
    code.op(Op::PushNum).u16(0);      // 0000
    code.op(Op::PushStr).u16(0);      // 0003
    code.op(Op::Concat);              // 0006
    code.op(Op::Show);                // 0007
    code.op(Op::PushNum).u16(0);      // 0008
    code.op(Op::StoreGlobal).u16(0);  // 000b
    code.op(Op::Jmp).i32(-19);        // 000e
    auto img = entry_image(code.bytes);
    img.num_pool = image.num_pool;
    img.str_pool = image.str_pool;
    img.globals = image.globals;

    std::string text = disassemble(img);
    CHECK(text.find("; 2.5") != std::string::npos);
    CHECK(text.find("; \"مرحبا\"") != std::string::npos);
    CHECK(text.find("; عدد") != std::string::npos);
    CHECK(text.find("JMP -19") != std::string::npos);
    CHECK(text.find("; -> 0000") != std::string::npos);
    CHECK(text.find("CONCAT") != std::string::npos);
}

TEST_CASE("stack discipline accepts straight-line and branching code") {
    SUBCASE("bare halt") {
        auto image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        CHECK(verify_stack_discipline(image) == std::nullopt);
    }
    SUBCASE("loop with a condition") {
        // locals: 0
        CodeBuf code;
        code.op(Op::PushNum).u16(0);   // 0000
        code.op(Op::Store).u16(0);     // 0003
        code.op(Op::Load).u16(0);      // 0006  loop head
        code.op(Op::PushNum).u16(1);   // 0009
        code.op(Op::CmpLt);            // 000c
        code.op(Op::JmpIfFalse).i32(8); // 000d -> 001a
        code.op(Op::Load).u16(0);      // 0012
        code.op(Op::Store).u16(0);     // 0015
        code.op(Op::Jmp).i32(-23);     // 0018...
        code.op(Op::Halt);
        // recompute: offsets above shift; just trust the verifier + loader
        ProgramImage image = entry_image(code.bytes, 1);
        image.num_pool = {0.0, 5.0};
        // fix the two jump targets by rebuilding precisely
        CodeBuf c2;
        c2.op(Op::PushNum).u16(0);      // 0000
        c2.op(Op::Store).u16(0);        // 0003
        c2.op(Op::Load).u16(0);         // 0006
        c2.op(Op::PushNum).u16(1);      // 0009
        c2.op(Op::CmpLt);               // 000c
        c2.op(Op::JmpIfFalse).i32(11);  // 000d, next 0012, target 001d
        c2.op(Op::Load).u16(0);         // 0012
        c2.op(Op::Store).u16(0);        // 0015
        c2.op(Op::Jmp).i32(-23);        // 0018, next 001d, target 0006
        c2.op(Op::Halt);                // 001d
        image.functions[0].code = c2.bytes;
        auto loaded = load_image(serialize_image(image));
        CHECK(verify_stack_discipline(loaded) == std::nullopt);
    }
    SUBCASE("function returning a value") {
        ProgramImage image = entry_image(
            CodeBuf{}
                .op(Op::Call).u16(1).u8(0)
                .op(Op::Store).u16(0)
                .op(Op::Halt)
                .bytes,
            1);
        FunctionChunk fn;
        fn.name = "ثابت";
        fn.param_count = 0;
        fn.local_slot_count = 0;
        fn.code = CodeBuf{}.op(Op::PushNum).u16(0).op(Op::Ret).bytes;
        image.functions.push_back(fn);
        image.num_pool = {42.0};
        CHECK(verify_stack_discipline(image) == std::nullopt);
    }
}

TEST_CASE("stack discipline rejects bad chunks") {
    SUBCASE("underflow") {
        auto image = entry_image(CodeBuf{}.op(Op::Add).op(Op::Halt).bytes);
        auto problem = verify_stack_discipline(image);
        REQUIRE(problem.has_value());
        CHECK(problem->find("underflow") != std::string::npos);
    }
    SUBCASE("nonzero depth at halt") {
        CodeBuf code;
        code.op(Op::PushNum).u16(0);
        code.op(Op::Halt);
        auto image = entry_image(code.bytes);
        image.num_pool = {1.0};
        auto problem = verify_stack_discipline(image);
        REQUIRE(problem.has_value());
        CHECK(problem->find("at HALT") != std::string::npos);
    }
    SUBCASE("ret without a value") {
        auto image = entry_image(CodeBuf{}.op(Op::Halt).bytes);
        FunctionChunk fn;
        fn.name = "فارغ";
        fn.param_count = 0;
        fn.local_slot_count = 0;
        fn.code = CodeBuf{}.op(Op::Ret).bytes;
        image.functions.push_back(fn);
        auto problem = verify_stack_discipline(image);
        REQUIRE(problem.has_value());
        CHECK(problem->find("before RET") != std::string::npos);
    }
    SUBCASE("falls off the end") {
        CodeBuf code;
        code.op(Op::PushNum).u16(0);
        code.op(Op::Show);
        auto image = entry_image(code.bytes);
        image.num_pool = {1.0};
        auto problem = verify_stack_discipline(image);
        REQUIRE(problem.has_value());
        CHECK(problem->find("runs past the end") != std::string::npos);
    }
    SUBCASE("inconsistent depth at a merge point") {
        // one arm pushes an extra value before the join
        CodeBuf code;
        code.op(Op::PushNum).u16(0);     // 0000
        code.op(Op::JmpIfFalse).i32(3);  // 0003, next 0008, target 000b
        code.op(Op::PushNum).u16(0);     // 0008 falls into 000b with depth 1
        code.op(Op::Halt);               // 000b merge: depth 0 vs 1
        auto image = entry_image(code.bytes);
        image.num_pool = {1.0};
        auto problem = verify_stack_discipline(image);
        REQUIRE(problem.has_value());
        CHECK(problem->find("inconsistent stack depth") != std::string::npos);
    }
}
