#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sinefactor/expsum.hpp"

namespace sinefactor {

struct ParseOptions {
  // name=decimal declarations; the entry "one"=1 is implicit, and the names
  // pi, sqrt2, sqrt3, sqrt5, e resolve to built-in constants when referenced
  // but not declared.
  std::vector<std::pair<std::string, std::string>> basis_decls;
  mpfr_prec_t precision = Real::kDefaultPrec;
};

// Grammar (precedence: ^ over * over +/-):
//   expr   := ['-'] prod (('+'|'-') prod)*
//   prod   := pow ('*' pow)*
//   pow    := atom ['^' uint]
//   atom   := number ['i'] | 'i' | '(' expr ')'
//           | ('sin'|'cos') '(' coef '*' 'z' [('+'|'-') real] ')'
//           | 'exp' '(' '2' '*' 'pi' '*' 'i' '*' freq '*' 'z' ')'
//   coef   := cfac ('*' cfac)*       cfac := rational | basis-name
//   freq   := rational ['*' basis-name] | basis-name
// A sine/cosine coefficient must contain exactly one factor 'pi' (it cancels
// against the 2*pi in the frequency normalization) and at most one other
// basis name; anything else is rejected as a non-real or non-representable
// frequency.
ExpSum parse_expression(const std::string& text, const ParseOptions& opts = {});

}  // namespace sinefactor
