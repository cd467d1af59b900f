#pragma once

#include "conetree/base_class.hpp"
#include "conetree/structure.hpp"

namespace conetree {

// Joint embedding: a fresh root is placed below both inputs, putting A and B
// into two cones whose quotient is the joint embedding of one-element base
// models.  Element names of A and B must be disjoint.  Empty inputs
// degenerate: jep(empty, B) is B.
DecoratedStructure jep(const BaseClass& base, const DecoratedStructure& a,
                       const DecoratedStructure& b);

// Strong amalgam of B and C over A = B intersect C when B is generated over
// A by a single element b (so B minus A is {b} or {b, max-meet of b into A}).
// Case I (b below some element of A): b becomes the new minimum of its order
// interval in C.  Case II (otherwise): the meet point is adjoined first, and
// b then starts a fresh branch just above it, with the stored lift at the
// meet point supplied by base amalgamation of the cone quotients.
DecoratedStructure amalgamate_one_generator(const BaseClass& base,
                                            const DecoratedStructure& a,
                                            const DecoratedStructure& b,
                                            const DecoratedStructure& c);

// General strong amalgam, iterating the one-generator step along a
// generating chain of B over A.  When A is empty the result is jep(B, C),
// whose fresh root is the only element outside B union C.
DecoratedStructure amalgamate(const BaseClass& base,
                              const DecoratedStructure& a,
                              const DecoratedStructure& b,
                              const DecoratedStructure& c);

}  // namespace conetree
