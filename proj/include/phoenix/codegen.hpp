#pragma once

#include "phoenix/bytecode.hpp"
#include "phoenix/sema.hpp"

namespace phoenix {

// Lowers a checked program to a bytecode image. The input must come from
// check_program with ok == true; the generator trusts its annotations.
ProgramImage generate_image(const TypedProgram& typed);

} // namespace phoenix
