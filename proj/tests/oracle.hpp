#pragma once

// Brute-force references the test suite freezes against.  Everything here
// enumerates raw candidate structures and keeps the ones the axiom checkers
// accept; none of it shares logic with the type enumerator it cross-checks.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conetree/base_class.hpp"
#include "conetree/structure.hpp"

namespace conetree::testing {

// Canonical serializations of every valid extension of `a` generated by one
// new point, up to isomorphism over `a`: the new point is written ~x and its
// fresh meet point, when one exists, ~w.  These are exactly the 1-types
// over `a`.
std::set<std::string> oracle_extension_keys(const BaseClass& base,
                                            const DecoratedStructure& a);

// The key of a realized extension in the same naming scheme: the induced
// structure on the closure of a+x with x renamed ~x and the remaining fresh
// element, if any, renamed ~w.
std::string oracle_key_of_realization(const DecoratedStructure& m,
                                      const std::vector<std::string>& a,
                                      const std::string& x);

// Every valid decorated structure on exactly n elements, deduplicated up to
// isomorphism (minimum serialization over all element relabelings).
std::vector<DecoratedStructure> oracle_all_structures(const BaseClass& base,
                                                      int n);

}  // namespace conetree::testing
