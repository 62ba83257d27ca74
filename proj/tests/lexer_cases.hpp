#pragma once

#include <optional>
#include <string>
#include <vector>

namespace phoenix::test {

// Exactly 1000 scanner inputs: fixed boundary pins (compound keyword
// joiners, erased characters, digit folding, literal edges, every
// rejection class), the bundled sample program, and seeded random mixes
// of clean and rejection pieces (roughly a third adversarial).
std::vector<std::string> lexer_corpus(const std::string& sample_text);

// Runs the production scanner and the reference tokenizer over the same
// text. Returns nullopt when both produce identical verdicts (same token
// kinds, lexemes, values, and spans, or the same rejection code at the
// same offset); otherwise a description of the first difference.
std::optional<std::string> lexer_mismatch(const std::string& text);

} // namespace phoenix::test
