#pragma once

#include <cstdint>
#include <iosfwd>

#include "phoenix/sema.hpp"

namespace phoenix::test {

struct WalkOptions {
    uint64_t max_steps = 50'000'000;
    uint32_t max_frames = 10'000;
};

// Reference interpreter used to cross-check the VM: walks the checked AST
// directly with symbol-keyed environments instead of compiling to slots and
// bytecode. Throws RuntimeError with the same R-codes, messages, and
// evaluation order as the VM; step counting is per statement and per loop
// test, so only programs that terminate well inside the limit compare
// cleanly on R-006.
void tree_walk_eval(const TypedProgram& typed, std::istream& in,
                    std::ostream& out, const WalkOptions& opts = {});

} // namespace phoenix::test
