#include "phoenix/compile.hpp"

#include "phoenix/codegen.hpp"
#include "phoenix/lexer.hpp"
#include "phoenix/parser.hpp"
#include "phoenix/preprocess.hpp"

namespace phoenix {

CompileResult compile_source(const SourceFile& file, const CheckOptions& opts) {
    CompileResult result;
    try {
        Program program = parse_program(tokenize(file, preprocess(file)));
        CheckResult checked = check_program(std::move(program), opts);
        result.diagnostics = std::move(checked.diagnostics);
        if (!checked.ok) return result;
        result.image = generate_image(checked.typed);
        result.ok = true;
    } catch (const CompileError& e) {
        result.diagnostics.push_back(e.diagnostic);
    }
    return result;
}

} // namespace phoenix
