#pragma once

#include <stdexcept>
#include <string>

#include "conetree/structure.hpp"

namespace conetree {

// Raised on malformed structure text; line is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Line-oriented text format:
//   # comment
//   signature <name>          (equality | graph | eq2 | registered custom)
//   element <id>+
//   leq <a> <b>               (a <= b; reflexive pairs implied)
//   rel <R> <c> <y>+          (a tuple of the lift R*, center first)
// Ids are whitespace-free, never start with '#' or '?'.  Equality tuples are
// implicit and cannot be declared.  The full order relation must be spelled
// out: transitive closure is not taken, the validator rejects gaps instead.
DecoratedStructure parse_structure(const std::string& text);

// Canonical form: signature line, elements sorted one per line, strict leq
// pairs sorted, rel tuples sorted.  parse(serialize(s)) == s.
std::string serialize_structure(const DecoratedStructure& s);

DecoratedStructure read_structure_file(const std::string& path);
void write_structure_file(const std::string& path,
                          const DecoratedStructure& s);

}  // namespace conetree
