#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace phoenix;
using namespace phoenix::test;

TEST_CASE("utf8 decode and encode round-trip Arabic text") {
    const std::string text = "وظيفة معدل (-) : البداية";
    const std::u32string cps = utf8_decode(text);
    CHECK(utf8_encode(cps) == text);
    CHECK(cps.size() == 24); // codepoints, not bytes
}

TEST_CASE("utf8 decoder replaces invalid sequences") {
    const std::string bad = "\xC3\x28";       // truncated 2-byte lead
    const std::u32string cps = utf8_decode(bad);
    CHECK(cps[0] == 0xFFFD);
    const std::string lone = "\x80";          // stray continuation byte
    CHECK(utf8_decode(lone)[0] == 0xFFFD);
}

TEST_CASE("leading byte-order mark is stripped") {
    const SourceFile f = SourceFile::from_text("t", "\xEF\xBB\xBFرقم");
    CHECK(f.codepoints.size() == 3);
    CHECK(f.codepoints[0] == U'ر');
}

TEST_CASE("line and column are 1-based and count codepoints") {
    const SourceFile f = src_of("رقم س = 0 ;\nكلمة ص = \"أ\" ;\n");
    CHECK(f.line_of(0) == 1);
    CHECK(f.column_of(0) == 1);
    const uint32_t second_line = f.line_starts[1];
    CHECK(f.line_of(second_line) == 2);
    CHECK(f.column_of(second_line) == 1);
    CHECK(f.column_of(second_line + 3) == 4);
}

TEST_CASE("offset to line/col round-trips for every offset") {
    const SourceFile f = src_of(read_file(data_path("average.phx")));
    for (uint32_t o = 0; o < f.codepoints.size(); ++o) {
        const uint32_t line = f.line_of(o);
        const uint32_t col = f.column_of(o);
        CHECK(f.line_starts[line - 1] + col - 1 == o);
    }
}

TEST_CASE("span_merge covers the hull of both ranges") {
    const SourceFile f = src_of("0123456789");
    const Span a = Span::at(f, 3, 5);
    const Span b = Span::at(f, 7, 9);

    const Span m = span_merge(a, b);
    CHECK(m.start == 3);
    CHECK(m.end == 9);

    const Span same = span_merge(a, a);
    CHECK(same.start == 3);
    CHECK(same.end == 5);

    const Span flipped = span_merge(b, a);
    CHECK(flipped.start == 3);
    CHECK(flipped.end == 9);
    CHECK(flipped.col == a.col); // line/col follow the earlier start
}

TEST_CASE("render_diagnostic prints header plus offending line") {
    const SourceFile f = src_of("رقم س = 0 ;\nس = ص + 1 ;\n");
    Diagnostic d;
    d.severity = Severity::Error;
    d.phase = Phase::Parse;
    d.code = "E-PAR-001";
    d.message = "مثال";
    d.span = Span::at(f, f.line_starts[1] + 4, f.line_starts[1] + 5);

    const std::string rendered = render_diagnostic(d, f);
    CHECK(rendered == "parse E-PAR-001 2:5 مثال\nس = ص + 1 ;");
    CHECK(render_diagnostic(d, f) == rendered); // deterministic
}

TEST_CASE("render_diagnostic without a span prints header only") {
    const SourceFile f = src_of("رقم س = 0 ;");
    Diagnostic d;
    d.severity = Severity::Error;
    d.phase = Phase::Runtime;
    d.code = "R-001";
    d.message = "قسمة على صفر";

    CHECK(render_diagnostic(d, f) == "runtime R-001 قسمة على صفر");
}
