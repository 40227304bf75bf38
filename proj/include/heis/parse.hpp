#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "heis/rational.hpp"

namespace heis {

/// Parses the expression grammar: coordinates x1..xn, y1..yn, t, parameters of
/// `vars` by name, the imaginary unit `i`, rational or decimal literals and
/// the operators + - * / ^ with parentheses. Throws ParseError.
RationalFn parse_rational(std::string_view text, const VarSetPtr& vars);

/// Identifiers in `text` that are neither coordinates of H^n, the unit `i`, nor
/// in `reserved`; in order of first appearance. Used to build a VarSet before parsing.
std::vector<std::string> collect_parameters(std::string_view text, int n,
                                            const std::vector<std::string>& reserved = {});

}  // namespace heis
