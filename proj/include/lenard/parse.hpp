// Text grammar for differential functions and scalar differential operators.
//
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' int)?
//   atom   := integer | var | 'log(v)' | 'D(' expr ')' | '(' expr ')'
//   var    := ('u'|'v') ("'"* | '^(' nat ')')
//
// In operator input the symbol `d` is also an atom and `*` composes.
#ifndef LENARD_PARSE_HPP
#define LENARD_PARSE_HPP

#include <string_view>

#include "lenard/diffop.hpp"

namespace lenard {

/// Throws SYNTAX_ERROR (with line and column) or EXPONENT_ERROR.
DiffFunction parse_function(std::string_view src);

/// Operators are returned in left-normal form.
ScalarDiffOp parse_operator(std::string_view src);

}  // namespace lenard

#endif  // LENARD_PARSE_HPP
