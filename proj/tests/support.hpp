#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phoenix/codegen.hpp"
#include "phoenix/lexer.hpp"
#include "phoenix/parser.hpp"
#include "phoenix/preprocess.hpp"
#include "phoenix/sema.hpp"
#include "phoenix/source.hpp"

namespace phoenix::test {

inline SourceFile src_of(const std::string& text) {
    return SourceFile::from_text("test.phx", text);
}

inline std::vector<Token> lex_text(const std::string& text) {
    const SourceFile file = src_of(text);
    return tokenize(file, preprocess(file));
}

inline Program parse_text(const std::string& text) {
    return parse_program(lex_text(text));
}

inline CheckResult check_text(const std::string& text, CheckOptions opts = {}) {
    return check_program(parse_text(text), opts);
}

// The first error diagnostic of a failed check.
inline Diagnostic first_error(const CheckResult& result) {
    for (const Diagnostic& d : result.diagnostics) {
        if (d.severity == Severity::Error) return d;
    }
    throw std::runtime_error("expected at least one error diagnostic");
}

// Checks and lowers source text; throws if the checker reports errors.
inline ProgramImage gen_text(const std::string& text) {
    CheckResult result = check_text(text);
    if (!result.ok) {
        throw std::runtime_error("check failed: " +
                                 first_error(result).message);
    }
    return generate_image(result.typed);
}

inline std::string data_path(const std::string& name) {
    return std::string(PHOENIX_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Space-joined token kind names, EOF omitted, e.g. "KW_NUM IDENT ASSIGN".
inline std::string kinds_of(const std::vector<Token>& tokens) {
    std::string out;
    for (const Token& t : tokens) {
        if (t.kind == TokenKind::Eof) break;
        if (!out.empty()) out += ' ';
        out += token_kind_name(t.kind);
    }
    return out;
}

// Runs fn, which must throw CompileError, and returns the diagnostic.
template <typename Fn>
Diagnostic expect_error(Fn&& fn) {
    try {
        fn();
    } catch (const CompileError& e) {
        return e.diagnostic;
    }
    throw std::runtime_error("expected a CompileError, none was thrown");
}

} // namespace phoenix::test
