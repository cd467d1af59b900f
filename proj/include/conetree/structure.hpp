#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "conetree/base_structure.hpp"
#include "conetree/signature.hpp"

namespace conetree {

// A finite decorated meet-tree: a partial order whose down-sets are chains
// and whose pairs have meets, together with a stored lift R* for every base
// symbol R.  The order is stored as the full reflexive relation; the strict
// order and the meet table are derived on construction and cached.  Values
// are immutable; operations return new structures.
//
// Construction is total even for inputs that fail the order axioms, so the
// validator can inspect broken structures; the meet table then simply has
// gaps where no greatest common lower bound exists.
class DecoratedStructure {
 public:
  using StarMap = std::map<std::string, std::set<std::vector<std::string>>>;

  DecoratedStructure();

  // Reflexive pairs are implied and added; transitivity is NOT completed
  // (the validator rejects non-transitive input instead).  Throws
  // std::invalid_argument on unknown elements, unknown symbols, bad arity,
  // duplicate or ill-formed element ids.
  static DecoratedStructure make(
      Signature sig, std::vector<std::string> elements,
      const std::vector<std::pair<std::string, std::string>>& leq_pairs,
      const StarMap& stars);

  const Signature& signature() const { return sig_; }
  const std::vector<std::string>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool has(const std::string& id) const { return index_of(id) >= 0; }

  bool leq(const std::string& a, const std::string& b) const;
  bool less(const std::string& a, const std::string& b) const;
  bool comparable(const std::string& a, const std::string& b) const;
  std::optional<std::string> meet(const std::string& a,
                                  const std::string& b) const;

  // Greatest lower bound of a whole set; nullopt on the empty set or when
  // some intermediate meet is missing.
  std::optional<std::string> meet_all(
      const std::vector<std::string>& items) const;

  std::optional<std::string> minimum() const;
  std::vector<std::string> above(const std::string& c) const;   // strict
  std::vector<std::string> below(const std::string& c) const;   // strict
  std::vector<std::string> maximal_elements() const;

  // a E_c b: both strictly above c and meeting strictly above c.
  bool same_cone(const std::string& c, const std::string& a,
                 const std::string& b) const;

  const StarMap& stars() const { return stars_; }
  bool star_holds(const std::string& symbol, const std::string& center,
                  const std::vector<std::string>& tuple) const;

  DecoratedStructure induced(const std::vector<std::string>& subset) const;
  DecoratedStructure renamed(
      const std::map<std::string, std::string>& map) const;

  // All order pairs a < b (strict), sorted.
  std::vector<std::pair<std::string, std::string>> strict_pairs() const;

  bool operator==(const DecoratedStructure& other) const;

  // Internal index-level accessors (elements() order).
  int index_of(const std::string& id) const;
  bool leq_at(int a, int b) const { return leq_[idx(a, b)] != 0; }
  int meet_at(int a, int b) const { return meet_[idx(a, b)]; }

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * elements_.size() +
           static_cast<std::size_t>(b);
  }
  void derive();

  Signature sig_;
  std::vector<std::string> elements_;  // sorted canonical order
  std::map<std::string, int> index_;
  std::vector<std::uint8_t> leq_;  // n*n, reflexive closure of the input
  std::vector<int> meet_;         // n*n, -1 where no meet exists
  StarMap stars_;
};

// Closure of a point set under pairwise meets, returned as the induced
// substructure.  Size is at most twice the number of points.  Throws if a
// required meet is missing (only possible on invalid structures).
DecoratedStructure meet_closure(const DecoratedStructure& s,
                                const std::vector<std::string>& points);

// Element ids of the closure without building the substructure.
std::vector<std::string> meet_closure_elements(
    const DecoratedStructure& s, const std::vector<std::string>& points);

// Checks that `subset` names a meet-closed set of elements of s.
bool is_meet_closed(const DecoratedStructure& s,
                    const std::vector<std::string>& subset);

// The partition of {x : x > c} into open cones, plus the base structure the
// quotient carries: R(a/E_c, ...) iff R*(c, a, ...).  Cones are listed
// sorted by representative (their least element id).
struct ConeQuotient {
  std::string center;
  std::vector<std::vector<std::string>> cones;
  BaseStructure quotient;  // universe: one representative per cone

  const std::string& representative_of(const std::string& element) const;
};

ConeQuotient cone_partition(const DecoratedStructure& s,
                            const std::string& center);

}  // namespace conetree
