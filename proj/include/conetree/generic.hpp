#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conetree/base_class.hpp"
#include "conetree/structure.hpp"
#include "conetree/types.hpp"

namespace conetree {

struct CoveragePair {
  std::vector<std::string> substructure;  // meet-closed element set
  TypeDescriptor type;
  bool realized = false;
};

struct CoverageReport {
  std::vector<CoveragePair> pairs;
  std::size_t realized_count() const;
  // 1.0 on an empty pair list: nothing was demanded.
  double fraction() const;
};

// For substructures of M generated by 1..s points (all of them, or an
// evenly strided deterministic sample of sample_limit when there are more),
// checks that every 1-type over the substructure is realized in M.
CoverageReport check_extension_property(const BaseClass& base,
                                        const DecoratedStructure& m, int s,
                                        std::size_t sample_limit = 0);

// Same check on an explicit list of substructures.
CoverageReport check_extension_property_on(
    const BaseClass& base, const DecoratedStructure& m,
    const std::vector<std::vector<std::string>>& substructures);

struct BuildResult {
  DecoratedStructure structure;
  // Substructures whose full type list was realized, per round.  A round
  // interrupted by the element budget records only its completed entries.
  std::vector<std::vector<std::vector<std::string>>> processed;
  std::size_t realizations = 0;

  std::vector<std::vector<std::string>> processed_substructures() const;
};

// Grows an approximation of the generic model from a single point.  Each
// round enumerates the substructures generated by up to closure_size points
// (canonically ordered; seed-shuffled once they outnumber the remaining
// element budget) and realizes every unrealized 1-type over each, stopping
// at max_elements.  Deterministic for fixed arguments.
BuildResult build_generic(const BaseClass& base, std::size_t max_elements,
                          int closure_size, int rounds, std::uint64_t seed);

struct BafResult {
  std::map<std::string, std::string> map;  // final partial isomorphism
  int steps_completed = 0;
  bool exhausted = false;  // every element of both sides is matched
  std::optional<std::string> failed_element;
  std::string detail;  // witnessing atom or mismatch description
  bool ok() const { return !failed_element.has_value(); }
};

// Verifies that f is a partial isomorphism on meet-closed domains, then
// alternately extends it one point per step (forth from M, back from N),
// choosing among descriptor-matching targets with the seeded generator.
// Stops at the first element with no matching target.
BafResult back_and_forth(const BaseClass& base, const DecoratedStructure& m,
                         const DecoratedStructure& n,
                         const std::map<std::string, std::string>& f,
                         int steps, std::uint64_t seed);

}  // namespace conetree
