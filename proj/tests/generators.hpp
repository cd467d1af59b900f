#pragma once

// Seeded random inputs for the property tests.  Trees are grown by attaching
// each new element in a fresh cone over a random parent (every finite
// meet-tree arises this way); decorations are grown per center through the
// base class's own extension enumeration, so they are valid by construction.

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conetree/base_class.hpp"
#include "conetree/formula.hpp"
#include "conetree/structure.hpp"

namespace conetree::testing {

inline DecoratedStructure random_structure(std::mt19937_64& rng,
                                           const BaseClass& base,
                                           std::size_t size,
                                           const std::string& stem = "t") {
  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::vector<std::string>> below(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string id = stem + std::to_string(i);
    if (i > 0) {
      std::size_t parent = rng() % i;
      below[i] = below[parent];
      below[i].push_back(elems[parent]);
      for (const auto& b : below[i]) pairs.emplace_back(b, id);
    }
    elems.push_back(id);
  }
  DecoratedStructure tree =
      DecoratedStructure::make(base.signature(), elems, pairs, {});
  if (base.signature().relations().empty() || size == 0) return tree;

  DecoratedStructure::StarMap stars;
  for (const auto& c : tree.elements()) {
    std::vector<std::string> above = tree.above(c);
    if (above.empty()) continue;
    std::vector<std::vector<std::string>> classes;
    for (const auto& u : above) {
      bool placed = false;
      for (auto& cls : classes) {
        if (tree.same_cone(c, cls.front(), u)) {
          cls.push_back(u);
          placed = true;
          break;
        }
      }
      if (!placed) classes.push_back({u});
    }
    // A random base structure on the class representatives.
    BaseStructure q = base.one_element_models().front().renamed(
        {{BaseClass::kOnePoint, classes[0].front()}});
    for (std::size_t i = 1; i < classes.size(); ++i) {
      std::vector<ExtensionDescriptor> exts = base.extensions(q);
      q = exts[rng() % exts.size()].realize(q, classes[i].front());
    }
    // Expanded over members it is the stored lift at c.
    std::map<std::string, std::size_t> class_of;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      for (const auto& u : classes[i]) class_of[u] = i;
    }
    for (const auto& [symbol, tuples] : q.relations()) {
      for (const auto& tuple : tuples) {
        std::vector<std::string> t(tuple.size() + 1);
        t[0] = c;
        std::function<void(std::size_t)> emit = [&](std::size_t spot) {
          if (spot == tuple.size()) {
            stars[symbol].insert(t);
            return;
          }
          for (const auto& u : classes[class_of.at(tuple[spot])]) {
            t[spot + 1] = u;
            emit(spot + 1);
          }
        };
        emit(0);
      }
    }
  }
  return DecoratedStructure::make(base.signature(), elems, pairs, stars);
}

struct AmalgamTriple {
  DecoratedStructure a, b, c;
  DecoratedStructure parent;  // the supermodel the triple was carved from
};

// A compatible triple A <= B, A <= C with B and C intersecting exactly in A,
// carved out of one random supermodel so the preconditions hold by
// construction.
inline AmalgamTriple random_amalgam_triple(std::mt19937_64& rng,
                                           const BaseClass& base,
                                           std::size_t max_side) {
  for (;;) {
    DecoratedStructure m = random_structure(rng, base, 4 + rng() % 7);
    const auto& elems = m.elements();
    auto pick = [&](std::size_t count) {
      std::set<std::string> out;
      while (out.size() < count) out.insert(elems[rng() % elems.size()]);
      return std::vector<std::string>(out.begin(), out.end());
    };
    std::vector<std::string> a_gens = pick(1 + rng() % 2);
    std::vector<std::string> a_set = meet_closure_elements(m, a_gens);
    auto grow = [&](std::size_t extra) {
      std::vector<std::string> gens = a_set;
      auto more = pick(extra);
      gens.insert(gens.end(), more.begin(), more.end());
      return meet_closure_elements(m, gens);
    };
    std::vector<std::string> b_set = grow(1 + rng() % 2);
    std::vector<std::string> c_set = grow(1 + rng() % 2);
    if (b_set.size() > max_side || c_set.size() > max_side) continue;
    std::vector<std::string> shared;
    std::set_intersection(b_set.begin(), b_set.end(), c_set.begin(),
                          c_set.end(), std::back_inserter(shared));
    if (shared != a_set) continue;
    return {m.induced(a_set), m.induced(b_set), m.induced(c_set), m};
  }
}

// Random quantifier-free base formulas of bounded depth over fixed variable
// names v0..v{k-1}.
inline BaseFormula random_base_formula(std::mt19937_64& rng,
                                       const Signature& sig,
                                       const std::vector<std::string>& vars,
                                       int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    if (!sig.relations().empty() && rng() % 3 != 0) {
      const auto& rel = sig.relations()[rng() % sig.relations().size()];
      std::vector<std::string> picked;
      for (int i = 0; i < rel.arity; ++i) {
        picked.push_back(vars[rng() % vars.size()]);
      }
      return BaseFormula::rel(rel.symbol, picked);
    }
    return BaseFormula::eq(vars[rng() % vars.size()],
                           vars[rng() % vars.size()]);
  }
  switch (rng() % 3) {
    case 0:
      return BaseFormula::negation(
          random_base_formula(rng, sig, vars, depth - 1));
    case 1:
      return BaseFormula::conjunction(
          {random_base_formula(rng, sig, vars, depth - 1),
           random_base_formula(rng, sig, vars, depth - 1)});
    default:
      return BaseFormula::disjunction(
          {random_base_formula(rng, sig, vars, depth - 1),
           random_base_formula(rng, sig, vars, depth - 1)});
  }
}

}  // namespace conetree::testing
