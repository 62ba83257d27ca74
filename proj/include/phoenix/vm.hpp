#pragma once

#include <cstdint>
#include <iosfwd>

#include "phoenix/bytecode.hpp"
#include "phoenix/runtime.hpp"

namespace phoenix {

struct VmOptions {
    uint64_t max_steps = 50'000'000;
    uint32_t max_frames = 10'000;
    bool trace = false;
};

// Runs the image's entry function to completion. أدخل reads lines from `in`;
// أعرض lines and `? ` prompts go to `out`; a per-instruction trace goes to
// `trace_out` when enabled. Throws RuntimeError for R-coded failures.
void run_image(const ProgramImage& image, std::istream& in, std::ostream& out,
               const VmOptions& opts = {}, std::ostream* trace_out = nullptr);

} // namespace phoenix
