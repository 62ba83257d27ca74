#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phoenix {

// UTF-8 <-> codepoint helpers. Offsets everywhere in the compiler count
// Unicode scalar values, never bytes.
std::u32string utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view codepoints);
std::string utf8_encode(char32_t cp);

// A loaded source file. Codepoints are kept in logical (memory) order;
// no bidi reordering is ever applied.
struct SourceFile {
    std::string path;
    std::u32string codepoints;
    std::vector<uint32_t> line_starts; // line_starts[0] == 0, strictly increasing

    // Decodes UTF-8, strips a leading BOM, indexes line starts.
    static SourceFile from_text(std::string path, std::string_view utf8_text);

    uint32_t line_of(uint32_t offset) const;   // 1-based
    uint32_t column_of(uint32_t offset) const; // 1-based, codepoint column
    // The full text of a 1-based line, without the trailing newline.
    std::string line_text(uint32_t line) const;
};

struct Span {
    uint32_t start = 0; // codepoint offset
    uint32_t end = 0;   // exclusive
    uint32_t line = 1;  // 1-based, derived from start
    uint32_t col = 1;   // 1-based codepoint column

    static Span at(const SourceFile& src, uint32_t start, uint32_t end);
};

// Hull of two spans over the same file.
Span span_merge(const Span& a, const Span& b);

enum class Severity { Error, Warning };

enum class Phase { Preprocess, Lex, Parse, Semantic, Codegen, Link, Runtime };

std::string_view phase_name(Phase phase);

struct Diagnostic {
    Severity severity = Severity::Error;
    Phase phase = Phase::Lex;
    std::string code;    // e.g. "E-SEM-001"
    std::string message;
    std::optional<Span> span;
};

// One-line header "phase code line:col message" plus the offending source
// line when a span is present. Byte-stable across runs.
std::string render_diagnostic(const Diagnostic& d, const SourceFile& src);

// Thrown by stages that stop at the first error (lexer, parser, linker).
struct CompileError {
    Diagnostic diagnostic;
};

} // namespace phoenix
