#pragma once

#include <vector>

#include "phoenix/bytecode.hpp"
#include "phoenix/sema.hpp"
#include "phoenix/source.hpp"

namespace phoenix {

struct CompileResult {
    bool ok = false;
    ProgramImage image; // valid only when ok
    std::vector<Diagnostic> diagnostics;
};

// Full pipeline: preprocess, tokenize, parse, check, generate. Never throws;
// failures land in diagnostics with ok == false.
CompileResult compile_source(const SourceFile& file,
                             const CheckOptions& opts = {});

} // namespace phoenix
