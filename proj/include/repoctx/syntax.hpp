#pragma once

#include <string>
#include <vector>

#include "repoctx/workspace.hpp"

namespace repoctx {

// mask[i] is true when content[i] is code (outside strings and comments).
// Understands the comment and string syntax of Go, Python and TypeScript;
// unknown languages get the C-style rules.
std::vector<bool> code_mask(const std::string& content, LanguageId lang);

// Offset of the '}' (or ']' / ')') matching the opener at `open_pos`,
// honoring the mask; npos when unbalanced.
std::size_t matching_close(const std::string& content, const std::vector<bool>& mask,
                           std::size_t open_pos);

bool is_identifier(const std::string& s);

// Longest identifier ending right before `pos` (walking backwards);
// empty when the preceding char is not an identifier char.
std::string identifier_before(const std::string& content, std::size_t pos);

}  // namespace repoctx
