#pragma once

#include <string>

#include "modvar/quiver.hpp"

namespace modvar {

// Parse error carrying 1-based line/column of the offending token.
class parse_error : public domain_error {
 public:
  parse_error(const std::string& msg, int line, int col)
      : domain_error("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int column() const { return col_; }

 private:
  int line_;
  int col_;
};

// Presentation DSL:
//
//   algebra <label>
//   vertices: v1 v2 ... vn
//   arrows: a: v1 -> v2 ; b: v2 -> v1
//   relations: a*b ; 2*b*a - 1/3*a*b
//
// The arrows and relations sections may be empty or omitted entirely.
// '#' starts a comment running to end of line. Identifiers are any
// run of non-space characters excluding the punctuation ':;*+-()#'.
AlgebraPresentation parse_presentation(const std::string& text);

// Canonical form; parse(print(p)) is structurally equal to p.
std::string print_presentation(const AlgebraPresentation& p);

}  // namespace modvar
