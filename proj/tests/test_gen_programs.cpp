#include "doctest.h"

#include <random>
#include <sstream>
#include <string>

#include "gen_programs.hpp"
#include "phoenix/pretty.hpp"
#include "phoenix/vm.hpp"
#include "support.hpp"
#include "treewalk.hpp"

namespace {

using namespace phoenix;
using namespace phoenix::test;

struct Transcript {
    std::string out;
    std::string error_code;
    std::string error_message;
};

Transcript vm_transcript(const ProgramImage& image, const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out;
    Transcript t;
    try {
        run_image(image, in, out);
    } catch (const RuntimeError& e) {
        t.error_code = e.code;
        t.error_message = e.message;
    }
    t.out = out.str();
    return t;
}

Transcript walk_transcript(const TypedProgram& typed,
                           const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out;
    Transcript t;
    try {
        tree_walk_eval(typed, in, out);
    } catch (const RuntimeError& e) {
        t.error_code = e.code;
        t.error_message = e.message;
    }
    t.out = out.str();
    return t;
}

void check_round_trip(const std::string& text) {
    try {
        Program first = parse_text(text);
        const std::string printed = pretty_print(first);
        CAPTURE(printed);
        Program second = parse_text(printed);
        CHECK(dump_ast(first) == dump_ast(second));
        CHECK(pretty_print(second) == printed);
    } catch (const CompileError& e) {
        const Diagnostic& d = e.diagnostic;
        FAIL(d.code << " " << d.message << " (line "
                    << (d.span ? d.span->line : 0) << ")");
    }
}

} // namespace

TEST_CASE("parse-print-parse is stable on the sample program") {
    check_round_trip(read_file(data_path("average.phx")));
}

TEST_CASE("parse-print-parse is stable on 500 generated programs") {
    std::mt19937 rng(911250u);
    for (int i = 0; i < 500; ++i) {
        const std::string text = generate_syntax_program(rng);
        CAPTURE(i);
        CAPTURE(text);
        check_round_trip(text);
    }
}

TEST_CASE("200 generated programs behave identically on both evaluators") {
    std::mt19937 rng(628318u);
    int faulted = 0;
    for (int i = 0; i < 200; ++i) {
        const bool fault = i % 5 == 4;
        const GeneratedTyped g = generate_typed_program(rng, fault);
        CAPTURE(i);
        CAPTURE(g.text);
        CAPTURE(g.input);

        CheckResult checked = check_text(g.text);
        if (!checked.ok) {
            const Diagnostic d = first_error(checked);
            const std::string why = d.code + ": " + d.message;
            CAPTURE(why);
            REQUIRE(checked.ok);
        }

        const ProgramImage image = generate_image(checked.typed);
        const Transcript vm = vm_transcript(image, g.input);
        const Transcript walk = walk_transcript(checked.typed, g.input);

        CHECK(vm.out == walk.out);
        CHECK(vm.error_code == walk.error_code);
        CHECK(vm.error_message == walk.error_message);

        if (fault) {
            CHECK(!vm.error_code.empty());
        } else {
            CHECK(vm.error_code.empty());
        }
        if (!vm.error_code.empty()) ++faulted;
    }
    CHECK(faulted == 40);
}
