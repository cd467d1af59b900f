#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conetree/base_class.hpp"
#include "conetree/structure.hpp"

namespace conetree {

// A quantifier-free 1-type over a meet-closed labeled structure A, keyed by
// where the meet point b1 = max{x ^ a : a in A} of the new point x lands:
//
//   kElement     x is the element `ref` of A itself;
//   kInA         b1 = `ref` in A and x sits strictly above it, opening a
//                fresh cone whose relations to the cones of A are cone_ext;
//   kFreshBelow  b1 is a fresh point in the open order interval directly
//                below `ref` (above everything in A strictly below `ref`);
//                everything of A above b1 is then one cone, whose one-point
//                base type is b1_cone.  If `above` the new point opens a
//                second cone at b1 described by cone_ext, else x = b1.
//   kLonePoint   A is empty and x is a single free point.
struct TypeDescriptor {
  enum class Kind { kElement, kInA, kFreshBelow, kLonePoint };

  Kind kind = Kind::kLonePoint;
  std::string ref;
  bool above = false;
  std::optional<BaseStructure> b1_cone;
  std::optional<ExtensionDescriptor> cone_ext;

  // The anchor: an element of A the meet point sits at or below (ref).
  const std::string& anchor() const { return ref; }

  bool operator==(const TypeDescriptor&) const = default;
  bool operator<(const TypeDescriptor& other) const;
  std::string to_string() const;
};

// Every 1-type over the valid structure A, deterministically ordered.
// Candidates are pruned by realizing the two-point fragment and running the
// base checks, never by instance-specific reasoning.
std::vector<TypeDescriptor> enumerate_1types(const BaseClass& base,
                                             const DecoratedStructure& a);

std::size_t count_1types(const BaseClass& base, const DecoratedStructure& a);

// The descriptor of an element of M over the meet-closed subset A.
TypeDescriptor compute_descriptor(const DecoratedStructure& m,
                                  const std::vector<std::string>& a_elements,
                                  const std::string& element);

struct Realization {
  DecoratedStructure structure;       // M extended
  std::string element;                // the realizing point
  std::optional<std::string> meet_point;  // fresh b1 if one was added
};

// Realizes d over the meet-closed subset A of M by amalgamating the fragment
// generated by the new point against M over A.  Fresh names never collide
// with M.  The realized element's descriptor over A equals d again.
Realization realize_type(const BaseClass& base, const DecoratedStructure& m,
                         const std::vector<std::string>& a_elements,
                         const TypeDescriptor& d);

// True if some element of M has descriptor d over A.
bool type_realized(const BaseClass& base, const DecoratedStructure& m,
                   const std::vector<std::string>& a_elements,
                   const TypeDescriptor& d);

}  // namespace conetree
