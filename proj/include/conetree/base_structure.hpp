#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "conetree/signature.hpp"

namespace conetree {

// A finite model of the base language: the kind of structure that lives on
// the open cones at a center.  Relations are stored as explicit tuple sets;
// equality is implicit.  Values are immutable once built.
class BaseStructure {
 public:
  using TupleSet = std::set<std::vector<std::string>>;
  using RelationMap = std::map<std::string, TupleSet>;

  BaseStructure() = default;

  static BaseStructure make(Signature sig, std::vector<std::string> elements,
                            RelationMap relations);

  const Signature& signature() const { return sig_; }
  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool has(const std::string& id) const;

  const TupleSet& tuples(const std::string& symbol) const;
  const RelationMap& relations() const { return relations_; }
  bool holds(const std::string& symbol,
             const std::vector<std::string>& tuple) const;

  // Induced substructure on a subset of the universe.
  BaseStructure induced(const std::vector<std::string>& subset) const;

  // Copy with every element renamed through the (injective, total) map.
  BaseStructure renamed(const std::map<std::string, std::string>& map) const;

  // Copy with extra elements and tuples added.
  BaseStructure extended(const std::vector<std::string>& new_elements,
                         const RelationMap& new_tuples) const;

  bool operator==(const BaseStructure&) const = default;

 private:
  Signature sig_;
  std::vector<std::string> elements_;  // sorted
  RelationMap relations_;
};

// The full atomic relationship of one fresh element to a labeled base
// structure A: every tuple involving the fresh slot, which is written as
// ExtensionDescriptor::kNew.  Element ids never start with '?', so the
// marker cannot collide with a real element.
struct ExtensionDescriptor {
  static const std::string kNew;

  BaseStructure::RelationMap tuples;

  bool operator==(const ExtensionDescriptor&) const = default;
  bool operator<(const ExtensionDescriptor& other) const {
    return tuples < other.tuples;
  }

  // Materializes the descriptor over A, with the fresh element called `name`.
  BaseStructure realize(const BaseStructure& a, const std::string& name) const;

  // Reads off the descriptor of an existing element over the rest of B.
  static ExtensionDescriptor of(const BaseStructure& b,
                                const std::string& element);
};

}  // namespace conetree
