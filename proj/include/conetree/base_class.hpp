#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "conetree/base_structure.hpp"
#include "conetree/signature.hpp"

namespace conetree {

class AmalgamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BaseViolation {
  std::string rule;
  std::vector<std::string> tuple;
};

// A pluggable base class with the strong amalgamation property.  Instances
// must be closed under substructure, have amalgamation that never merges or
// adds points, and enumerate their one-point extensions exactly.
class BaseClass {
 public:
  virtual ~BaseClass() = default;

  const std::string& name() const { return name_; }
  const Signature& signature() const { return sig_; }

  // Instance axioms; empty result means the structure belongs to the class.
  virtual std::vector<BaseViolation> check(const BaseStructure& s) const = 0;
  bool check_ok(const BaseStructure& s) const { return check(s).empty(); }

  // Strong amalgam of B and C over A = B intersect C (labeled equality of
  // the induced structures is required).  The result's universe is exactly
  // elements(B) union elements(C).  Throws AmalgamError on bad input.
  virtual BaseStructure amalgamate(const BaseStructure& a,
                                   const BaseStructure& b,
                                   const BaseStructure& c) const = 0;

  // Joint embedding with disjoint images; universes must not overlap.
  virtual BaseStructure joint_embed(const BaseStructure& a,
                                    const BaseStructure& b) const = 0;

  // Complete, duplicate-free enumeration of the atomic types of one fresh
  // element over the labeled A, in a deterministic order.
  virtual std::vector<ExtensionDescriptor> extensions(
      const BaseStructure& a) const = 0;

  // The isomorphism types of one-element members, each on the single
  // universe element kOnePoint.
  virtual std::vector<BaseStructure> one_element_models() const = 0;

  static const std::string kOnePoint;

 protected:
  BaseClass(std::string name, Signature sig)
      : name_(std::move(name)), sig_(std::move(sig)) {}

 private:
  std::string name_;
  Signature sig_;
};

// Shipped instances.
const BaseClass& equality_base();  // pure sets
const BaseClass& graph_base();     // one irreflexive symmetric binary R
const BaseClass& eq2_base();       // two equivalence relations E1, E2

// Registry keyed by signature name.  register_base spot-checks strong
// amalgamation on a few random small triples before accepting.
const BaseClass& base_by_name(const std::string& name);
bool base_registered(const std::string& name);
void register_base(std::shared_ptr<const BaseClass> base);
std::vector<std::string> registered_base_names();

}  // namespace conetree
