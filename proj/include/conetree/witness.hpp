#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conetree/base_class.hpp"
#include "conetree/structure.hpp"

namespace conetree {

// ---- branch types ----------------------------------------------------------

// An atom over M in the one free variable ?x, with every term already
// reduced: slots hold either an element of M or the marker "?x".
struct BranchAtom {
  std::string symbol;                // base symbol of the lift
  std::vector<std::string> slots;    // center first
  bool operator<(const BranchAtom& o) const {
    return std::tie(symbol, slots) < std::tie(o.symbol, o.slots);
  }
};

// The complete atomic diagram over M of a point lying above every element of
// a maximal chain B.  meet_with[m] is the value of ?x ^ m (an element of M);
// m <= ?x holds exactly for m in B and ?x <= m never holds; star atoms
// containing ?x are decided by substituting a chain element, except pure-?x
// tuples at the chain top, which carry the base's unique one-point model.
struct BranchTypeRecord {
  std::vector<std::string> chain;              // B, ascending
  std::map<std::string, std::string> meet_with;
  std::map<BranchAtom, bool> star_atoms;       // every atom containing ?x
};

BranchTypeRecord branch_type(const DecoratedStructure& m,
                             const std::vector<std::string>& chain);

// ---- shatter and ict patterns ----------------------------------------------

struct ShatterWitness {
  DecoratedStructure structure;           // graph signature
  std::string center;
  std::vector<std::string> pins;          // d_0 .. d_{k-1}
  std::map<std::uint32_t, std::string> selectors;  // bitmask -> e_S
};

// A single center whose cone graph shatters k pins: for every S a selector
// e_S with R*(c, e_S, d_i) iff i in S.  All points sit in distinct cones.
ShatterWitness shatter_witness(int k);

struct IctWitness {
  DecoratedStructure structure;  // eq2 signature
  std::string center;
  std::vector<std::vector<std::string>> rows;  // rows[alpha][i], alpha < 2
  std::map<std::pair<int, int>, std::string> realizations;  // (eta1,eta2)
};

// Depth-2 independence pattern inside one cone quotient: row 0 spreads n
// E1-classes, row 1 spreads n E2-classes, and b_eta matches class eta(0) of
// row 0 and class eta(1) of row 1 and nothing else.
IctWitness ict_pattern(int n);

// ---- type growth profiles ---------------------------------------------------

enum class GrowthFamily { kFan, kChain };

struct ProfileRow {
  int m = 0;
  std::size_t size = 0;   // elements of A_m
  std::size_t count = 0;  // 1-types over A_m
};

// A_m is a fan (root plus m points in distinct cones, relation-free) or a
// chain of m points; rows report count_1types for m = 1..m_max.
std::vector<ProfileRow> type_growth_profile(const BaseClass& base,
                                            GrowthFamily family, int m_max);

struct LogLogFit {
  double slope = 0.0;
  double max_residual = 0.0;
};

// Least-squares fit of log(count) against log(size).
LogLogFit fit_log_log(const std::vector<ProfileRow>& rows);

// ---- burden witness ---------------------------------------------------------

// Input convention: a graph-signature structure containing the center
// element, the sequence a_0..a_{n-1} (tree-indiscernible over the center in
// one of the catalogued shapes: monotone, fan, comb), their generated tree,
// the pair data of <a_0, center>, and shift-invariant relational data on the
// tree generated by the sequence.
struct InpInput {
  DecoratedStructure skeleton;
  std::string center = "c";
  std::vector<std::string> sequence;
};

struct InpWitnessReport {
  DecoratedStructure a0;  // the induced pair structure <a_0, center>
  std::vector<std::string> sequence;
  DecoratedStructure n;   // the constructed witness
  std::vector<std::string> failures;
  bool certified() const { return failures.empty(); }
};

// Copies the pair structure along the sequence with tree maps fixing the
// center, unions the copies with the sequence data, closes the relation
// under cone equivalence, and certifies the result: validity, atom-for-atom
// containment of every copy and of the sequence structure, and equality of
// the pair types (a_i, center) to term depth 2.
InpWitnessReport inp_witness(const BaseClass& base, const InpInput& input);

// ---- indiscernibility -------------------------------------------------------

enum class DiagramMode { kTreeOnly, kFull };

struct IndiscernibleResult {
  bool ok = true;
  // Two increasing index tuples whose diagrams over A differ.
  std::optional<std::pair<std::vector<int>, std::vector<int>>> violation;
};

// Checks that all increasing tuples from `sequence` of each length up to
// tuple_len have the same atomic diagram over the meet-closure of A and the
// tuple (order atoms only in tree mode).
IndiscernibleResult check_indiscernible(const DecoratedStructure& m,
                                        const std::vector<std::string>& sequence,
                                        const std::vector<std::string>& a,
                                        int tuple_len, DiagramMode mode);

// Canonical key of the atomic diagram of `tuple` over the meet-closure of
// A union tuple, with tuple entries abstracted to positions.  Keys compare
// equal exactly for tuples of the same quantifier-free type over A.
std::string diagram_key(const DecoratedStructure& m,
                        const std::vector<std::string>& tuple,
                        const std::vector<std::string>& a, DiagramMode mode);

// ---- the collapsed binary relation ------------------------------------------

// R'(a, b) iff a ^ b is neither a nor b and R*(a ^ b, a, b).  Pairs are
// reported in both orders.
std::set<std::pair<std::string, std::string>> r_prime(
    const DecoratedStructure& m);

// Rebuilds the stored lift of R from the collapsed relation on the bare
// tree.  For valid graph-signature structures this is a round trip.
DecoratedStructure reconstruct_from_r_prime(
    const DecoratedStructure& tree,
    const std::set<std::pair<std::string, std::string>>& pairs);

}  // namespace conetree
