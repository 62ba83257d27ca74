#include "doctest.h"

#include <algorithm>

#include "phoenix/bytecode.hpp"
#include "support.hpp"

using namespace phoenix;
using namespace phoenix::test;

namespace {

size_t count_substr(const std::string& text, const std::string& needle) {
    size_t count = 0;
    for (size_t at = text.find(needle); at != std::string::npos;
         at = text.find(needle, at + needle.size())) {
        ++count;
    }
    return count;
}

// Decoded opcode sequence of one chunk.
std::vector<Op> ops_of(const FunctionChunk& f) {
    std::vector<Op> ops;
    size_t off = 0;
    while (off < f.code.size()) {
        Instr ins;
        REQUIRE(decode_instr(f.code, off, ins));
        ops.push_back(ins.op);
        off += ins.size;
    }
    return ops;
}

} // namespace

TEST_CASE("average program lowers to a single verified chunk") {
    ProgramImage image = gen_text(read_file(data_path("average.phx")));

    REQUIRE(image.functions.size() == 1);
    CHECK(image.entry == 0);
    const FunctionChunk& entry = image.functions[0];
    CHECK(entry.name == "معدل");
    CHECK(entry.param_count == 0);
    CHECK(entry.local_slot_count == 3);
    CHECK(image.globals.empty());
    CHECK(image.classes.empty());

    CHECK(verify_stack_discipline(image) == std::nullopt);

    std::string text = disassemble(image);
    CHECK(count_substr(text, "DIV") == 1);
    CHECK(count_substr(text, "CONCAT") == 1);
    CHECK(count_substr(text, "INPUT num") == 1);
    CHECK(text.find("JMP -") != std::string::npos); // loop closes backward
    CHECK(text.find("HALT") != std::string::npos);

    auto ops = ops_of(entry);
    CHECK(ops.back() == Op::Halt);
    CHECK(std::count(ops.begin(), ops.end(), Op::Show) == 1);
    CHECK(std::count(ops.begin(), ops.end(), Op::NumToStr) == 1);
}

TEST_CASE("image serialization is deterministic") {
    const std::string source = read_file(data_path("average.phx"));
    auto first = serialize_image(gen_text(source));
    auto second = serialize_image(gen_text(source));
    CHECK(first == second);

    ProgramImage loaded = load_image(first);
    CHECK(serialize_image(loaded) == first);
}

TEST_CASE("unused declaration removal keeps the slot count stable") {
    std::string source = read_file(data_path("average.phx"));
    const std::string anchor = "    كُرّر";
    size_t at = source.find(anchor);
    REQUIRE(at != std::string::npos);
    source.insert(at, "    رقم زائد = 9 ;\n");

    CheckResult result = check_text(source);
    REQUIRE(result.ok);
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].code == "W-SEM-001");

    ProgramImage image = generate_image(result.typed);
    REQUIRE(image.functions.size() == 1);
    CHECK(image.functions[0].local_slot_count == 3);

    ProgramImage plain = gen_text(read_file(data_path("average.phx")));
    CHECK(image.functions[0].code == plain.functions[0].code);
}

TEST_CASE("globals are initialized at the top of the entry chunk") {
    ProgramImage image = gen_text(
        "رقم عدد = 7 ;\n"
        "قائمة-رقم قيم [ 3 ] = { 4 ، 5 ، 6 } ;\n"
        "كلمة اسم = \"بداية\" ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    أعرض : اسم & عدد & قيم [ 0 ] ;\n"
        "}\n"
        "نهاية الوظيفة\n");

    REQUIRE(image.globals.size() == 3);
    CHECK(image.globals[0].name == "عدد");
    CHECK(image.globals[0].type == SlotType::Num);
    CHECK(image.globals[0].aux == 0);
    CHECK(image.globals[1].type == SlotType::NumList);
    CHECK(image.globals[1].aux == 3);
    CHECK(image.globals[2].type == SlotType::Str);

    const FunctionChunk& entry = image.functions[image.entry];
    auto ops = ops_of(entry);
    // num init, array init (create + 3 element stores), string init
    CHECK(ops[0] == Op::PushNum);
    CHECK(ops[1] == Op::StoreGlobal);
    CHECK(ops[2] == Op::NewArr);
    CHECK(ops[3] == Op::StoreGlobal);
    CHECK(std::count(ops.begin(), ops.end(), Op::StoreIdx) == 3);
    CHECK(verify_stack_discipline(image) == std::nullopt);
}

TEST_CASE("negative literal initializers fold into the number pool") {
    ProgramImage image = gen_text(
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم س = - 4 ;\n"
        "    أعرض : س ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(std::count(image.num_pool.begin(), image.num_pool.end(), -4.0) == 1);
    auto ops = ops_of(image.functions[image.entry]);
    CHECK(std::count(ops.begin(), ops.end(), Op::Neg) == 0);
}

TEST_CASE("number and string pools deduplicate in first-use order") {
    ProgramImage image = gen_text(
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم س = 5 ;\n"
        "    س = س + 5 ;\n"
        "    س = س + 2 ;\n"
        "    أعرض : \"أ\" & \"ب\" & \"أ\" ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(image.num_pool == std::vector<double>{5.0, 2.0});
    CHECK(image.str_pool == std::vector<std::string>{"أ", "ب"});
}

TEST_CASE("call statements discard the result through a scratch slot") {
    ProgramImage image = gen_text(
        "وظيفة واحد (-) : رقم\n"
        "{\n"
        "    عودة : 1 ;\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    إستدعاء : واحد (-) ;\n"
        "}\n"
        "نهاية الوظيفة\n");

    REQUIRE(image.functions.size() == 2);
    const FunctionChunk& entry = image.functions[image.entry];
    CHECK(entry.local_slot_count == 1); // scratch only
    auto ops = ops_of(entry);
    REQUIRE(ops.size() == 3);
    CHECK(ops[0] == Op::Call);
    CHECK(ops[1] == Op::Store);
    CHECK(ops[2] == Op::Halt);
    CHECK(verify_stack_discipline(image) == std::nullopt);
}

TEST_CASE("expression calls need no scratch slot") {
    ProgramImage image = gen_text(
        "وظيفة واحد (-) : رقم\n"
        "{\n"
        "    عودة : 1 ;\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم س = 0 ;\n"
        "    س = إستدعاء واحد (-) ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(image.functions[image.entry].local_slot_count == 1); // only س
}

TEST_CASE("methods carry a hidden receiver parameter") {
    ProgramImage image = gen_text(
        "صنف نقطة\n"
        "{\n"
        "    عام رقم س = 0 ;\n"
        "    عام وظيفة حرك ( رقم خطوة ) : رقم\n"
        "    {\n"
        "        س = س + خطوة ;\n"
        "        عودة : س ;\n"
        "    }\n"
        "    نهاية الوظيفة\n"
        "}\n"
        "نقطة مركز ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم ن = 0 ;\n"
        "    ن = إستدعاء مركز.حرك ( 4 ) ;\n"
        "    أعرض : ن ;\n"
        "}\n"
        "نهاية الوظيفة\n");

    REQUIRE(image.functions.size() == 2);
    const FunctionChunk& method = image.functions[0];
    CHECK(method.name == "حرك");
    CHECK(method.param_count == 2);      // receiver + خطوة
    CHECK(method.local_slot_count == 2);

    // the call site pushes the receiver then the argument
    const FunctionChunk& entry = image.functions[image.entry];
    size_t off = 0;
    Instr ins;
    bool saw_call = false;
    while (off < entry.code.size()) {
        REQUIRE(decode_instr(entry.code, off, ins));
        if (ins.op == Op::Call) {
            CHECK(ins.a == 0);
            CHECK(ins.b == 2);
            saw_call = true;
        }
        off += ins.size;
    }
    CHECK(saw_call);

    // bare field access inside the method goes through the receiver
    auto ops = ops_of(method);
    CHECK(std::count(ops.begin(), ops.end(), Op::GetField) == 2);
    CHECK(std::count(ops.begin(), ops.end(), Op::SetField) == 1);
    CHECK(verify_stack_discipline(image) == std::nullopt);

    REQUIRE(image.classes.size() == 1);
    CHECK(image.classes[0].name == "نقطة");
    REQUIRE(image.classes[0].fields.size() == 1);
    CHECK(image.classes[0].fields[0].type == SlotType::Num);
    CHECK(image.classes[0].fields[0].num_default == 0.0);
}

TEST_CASE("field defaults are captured in the class table") {
    ProgramImage image = gen_text(
        "صنف سجل\n"
        "{\n"
        "    عام رقم س = - 2 ;\n"
        "    خاص كلمة ك = \"فارغ\" ;\n"
        "    عام قائمة-رقم ق [ 2 ] = { 8 ، 9 } ;\n"
        "    عام قائمة-كلمة م [ 2 ] ;\n"
        "}\n"
        "سجل صف ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    أعرض : صف.س ;\n"
        "}\n"
        "نهاية الوظيفة\n");

    REQUIRE(image.classes.size() == 1);
    const ClassInfo& cls = image.classes[0];
    REQUIRE(cls.fields.size() == 4);
    CHECK(cls.fields[0].num_default == -2.0);
    CHECK(cls.fields[1].str_default == "فارغ");
    CHECK(cls.fields[2].num_list_default == std::vector<double>{8.0, 9.0});
    CHECK(cls.fields[3].str_list_default ==
          std::vector<std::string>{"", ""});
    CHECK(cls.fields[2].aux == 2);

    // objects composed of other classes record the class index
    ProgramImage nested = gen_text(
        "صنف ورقة\n"
        "{\n"
        "    عام رقم س = 1 ;\n"
        "}\n"
        "صنف حاوية\n"
        "{\n"
        "    عام ورقة داخل ;\n"
        "}\n"
        "حاوية ح ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    أعرض : 0 ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    REQUIRE(nested.classes.size() == 2);
    CHECK(nested.classes[1].fields[0].type == SlotType::Object);
    CHECK(nested.classes[1].fields[0].aux == 0);
}

TEST_CASE("short-circuit chains keep the stack balanced") {
    ProgramImage image = gen_text(
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم س = 3 ;\n"
        "    إذا : س > 1 && س < 9 || ( س == 0 )\n"
        "    {\n"
        "        أعرض : \"نعم\" ;\n"
        "    }\n"
        "    أما عدا ذلك\n"
        "    {\n"
        "        أعرض : \"لا\" ;\n"
        "    }\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(verify_stack_discipline(image) == std::nullopt);
    ProgramImage loaded = load_image(serialize_image(image));
    CHECK(loaded == image);
}

TEST_CASE("early exit in the entry function lowers to HALT") {
    ProgramImage image = gen_text(
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم س = 1 ;\n"
        "    إذا : س > 0\n"
        "    {\n"
        "        عودة ;\n"
        "    }\n"
        "    أعرض : \"غير مطروق\" ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    auto ops = ops_of(image.functions[image.entry]);
    CHECK(std::count(ops.begin(), ops.end(), Op::Halt) == 2);
    CHECK(verify_stack_discipline(image) == std::nullopt);
}

TEST_CASE("functions without a trailing return still return a typed default") {
    ProgramImage image = gen_text(
        "وظيفة صدى ( كلمة ك ) : كلمة\n"
        "{\n"
        "    أعرض : ك ;\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    كلمة ن = \"\" ;\n"
        "    ن = إستدعاء صدى ( \"مرحبا\" ) ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    const FunctionChunk& echo = image.functions[0];
    auto ops = ops_of(echo);
    REQUIRE(ops.size() >= 2);
    CHECK(ops[ops.size() - 2] == Op::PushStr);
    CHECK(ops.back() == Op::Ret);
    CHECK(verify_stack_discipline(image) == std::nullopt);
}

TEST_CASE("array reads and writes through locals and fields") {
    ProgramImage image = gen_text(
        "صنف مخزن\n"
        "{\n"
        "    عام قائمة-رقم ق [ 2 ] ;\n"
        "    عام وظيفة ضع ( رقم قيمة ) : رقم\n"
        "    {\n"
        "        ق [ 0 ] = قيمة ;\n"
        "        عودة : ق [ 0 ] ;\n"
        "    }\n"
        "    نهاية الوظيفة\n"
        "}\n"
        "مخزن م ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    قائمة-كلمة كلمات [ 2 ] = { \"أ\" ، \"ب\" } ;\n"
        "    رقم ن = 0 ;\n"
        "    ن = إستدعاء م.ضع ( 5 ) ;\n"
        "    كلمات [ 1 ] = كلمات [ 0 ] ;\n"
        "    أدخل : كلمات [ 0 ] ، \"كلمة\" ;\n"
        "    أعرض : كلمات [ 1 ] ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(verify_stack_discipline(image) == std::nullopt);

    // field array access inside the method loads the receiver first
    auto ops = ops_of(image.functions[0]);
    CHECK(std::count(ops.begin(), ops.end(), Op::GetField) == 2);
    CHECK(std::count(ops.begin(), ops.end(), Op::StoreIdx) == 1);
    CHECK(std::count(ops.begin(), ops.end(), Op::LoadIdx) == 1);

    std::string text = disassemble(image);
    CHECK(text.find("INPUT str") != std::string::npos);
}

TEST_CASE("whole arrays pass as call arguments and return values") {
    ProgramImage image = gen_text(
        "وظيفة أول ( قائمة-رقم ق ) : قائمة-رقم\n"
        "{\n"
        "    عودة : ق ;\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة خذ ( قائمة-رقم ق ) : رقم\n"
        "{\n"
        "    عودة : ق [ 0 ] ;\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    قائمة-رقم أصل [ 2 ] = { 1 ، 2 } ;\n"
        "    رقم ن = 0 ;\n"
        "    ن = إستدعاء خذ ( إستدعاء أول ( أصل ) ) ;\n"
        "    أعرض : ن ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(verify_stack_discipline(image) == std::nullopt);
    CHECK(load_image(serialize_image(image)) == image);
}

TEST_CASE("input into scalar, field, and element targets") {
    ProgramImage image = gen_text(
        "صنف نقطة\n"
        "{\n"
        "    عام رقم س = 0 ;\n"
        "}\n"
        "نقطة م ;\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم ع = 0 ;\n"
        "    أدخل : ع ، \"عدد\" ;\n"
        "    أدخل : م.س ، \"قيمة\" ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    const FunctionChunk& entry = image.functions[image.entry];
    auto ops = ops_of(entry);
    CHECK(std::count(ops.begin(), ops.end(), Op::Input) == 2);
    CHECK(std::count(ops.begin(), ops.end(), Op::SetField) == 1);
    CHECK(verify_stack_discipline(image) == std::nullopt);

    // prompts enter the string pool
    CHECK(std::count(image.str_pool.begin(), image.str_pool.end(),
                     std::string("عدد")) == 1);
}

TEST_CASE("every generated chunk ends without falling through") {
    ProgramImage image = gen_text(
        "وظيفة فرع ( رقم س ) : رقم\n"
        "{\n"
        "    إذا : س > 0\n"
        "    {\n"
        "        عودة : 1 ;\n"
        "    }\n"
        "    أما عدا ذلك\n"
        "    {\n"
        "        عودة : 2 ;\n"
        "    }\n"
        "}\n"
        "نهاية الوظيفة\n"
        "وظيفة رئيسية (-) : البداية\n"
        "{\n"
        "    رقم ن = 0 ;\n"
        "    ن = إستدعاء فرع ( 3 ) ;\n"
        "}\n"
        "نهاية الوظيفة\n");
    CHECK(verify_stack_discipline(image) == std::nullopt);
    for (const FunctionChunk& f : image.functions) {
        auto ops = ops_of(f);
        CHECK((ops.back() == Op::Ret || ops.back() == Op::Halt));
    }
}
