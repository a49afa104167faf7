#pragma once

#include <string>
#include <vector>

#include "loopver/ast.hpp"
#include "loopver/token.hpp"

namespace loopver::frontend {

Program parse_program(const std::vector<Token>& tokens);

// tokenize + parse_program.
Program parse(const std::string& source);

}  // namespace loopver::frontend
