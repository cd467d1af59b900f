#pragma once

#include <string>
#include <vector>

#include "conetree/structure.hpp"

namespace conetree {

class BaseClass;

enum class ValidateMode { kTreeOnly, kUniversal, kCones };

struct Violation {
  std::string axiom;               // T1..T6, OC, WD, EQ, or cone:<base rule>
  std::vector<std::string> tuple;  // offending elements, center first
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

std::string to_string(const Violation& v);

// Tree axioms:
//   T1 reflexivity, T2 antisymmetry, T3 transitivity,
//   T4 the set below any element is a chain,
//   T5/T6 every pair has a greatest common lower bound in the set.
// Universal mode adds, for every stored lift tuple:
//   OC  the center is strictly below every other entry,
//   WD  membership depends only on the cones of the entries,
//   EQ  nothing is stored for equality (its lift is definitional).
// Cones mode additionally builds the quotient at every center and runs the
// base class's own checks on it.
ValidationReport validate(const DecoratedStructure& s, ValidateMode mode);
ValidationReport validate(const DecoratedStructure& s, const BaseClass& base,
                          ValidateMode mode);

}  // namespace conetree
