#pragma once

#include <functional>
#include <string>

namespace qmt {

/// Compiles a closed-form scalar objective over the variable x. Grammar:
/// numbers, x, + - *, parentheses, abs(e), min(e,e), max(e,e). Throws
/// std::invalid_argument with the offending position on malformed input.
std::function<double(double)> compile_objective(const std::string& text);

}  // namespace qmt
