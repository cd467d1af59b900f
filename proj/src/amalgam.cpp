#include "conetree/amalgam.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace conetree {

namespace {

using StarMap = DecoratedStructure::StarMap;
using Pair = std::pair<std::string, std::string>;

std::vector<std::string> shared_elements(const DecoratedStructure& b,
                                         const DecoratedStructure& c) {
  std::vector<std::string> out;
  std::set_intersection(b.elements().begin(), b.elements().end(),
                        c.elements().begin(), c.elements().end(),
                        std::back_inserter(out));
  return out;
}

// Insert every tuple obtained from `tuple` by replacing a nonempty subset of
// the positions holding `from` with `to`.
void insert_substituted(std::set<std::vector<std::string>>& out,
                        const std::vector<std::string>& tuple,
                        const std::string& from, const std::string& to) {
  std::vector<std::size_t> spots;
  for (std::size_t i = 1; i < tuple.size(); ++i) {
    if (tuple[i] == from) spots.push_back(i);
  }
  for (std::uint64_t mask = 1; mask < (1ull << spots.size()); ++mask) {
    std::vector<std::string> t = tuple;
    for (std::size_t i = 0; i < spots.size(); ++i) {
      if (mask >> i & 1) t[spots[i]] = to;
    }
    out.insert(std::move(t));
  }
}

// All stored lifts at `center` expanded from a quotient structure: one tuple
// per choice of a member from each named block.
void expand_quotient(
    StarMap& stars, const std::string& center, const BaseStructure& quotient,
    const std::map<std::string, std::vector<std::string>>& members) {
  for (const auto& [symbol, tuples] : quotient.relations()) {
    auto& out = stars[symbol];
    for (const auto& tuple : tuples) {
      std::vector<std::string> acc(tuple.size() + 1);
      acc[0] = center;
      std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == tuple.size()) {
          out.insert(acc);
          return;
        }
        for (const auto& y : members.at(tuple[pos])) {
          acc[pos + 1] = y;
          rec(pos + 1);
        }
      };
      rec(0);
    }
  }
}

// Strong amalgam of C with a single-point extension of A.  `g` is the one
// element of B outside A; the caller has classified how it attaches.
DecoratedStructure one_step(const BaseClass& base, const DecoratedStructure& a,
                            const DecoratedStructure& b,
                            const DecoratedStructure& c,
                            const std::string& g) {
  std::vector<std::string> elements = c.elements();
  elements.push_back(g);
  std::vector<Pair> pairs = c.strict_pairs();
  StarMap stars = c.stars();

  bool below_some = false;
  for (const auto& x : a.elements()) {
    if (b.less(g, x)) below_some = true;
  }

  if (below_some) {
    // Case I: g lands inside an order interval of A.  It goes to the bottom
    // of the interval: directly above a0 = max {x in A : x < g} when that
    // exists, otherwise below everything.
    std::vector<std::string> ups;
    std::optional<std::string> a0;
    for (const auto& x : a.elements()) {
      if (b.less(g, x)) ups.push_back(x);
      if (b.less(x, g) && (!a0 || b.less(*a0, x))) a0 = x;
    }
    std::string a1 = *b.meet_all(ups);

    std::vector<std::string> above;
    for (const auto& x : c.elements()) {
      bool up;
      if (a0) {
        std::optional<std::string> m = c.meet(x, a1);
        up = m && c.less(*a0, *m);
      } else {
        up = true;
      }
      if (up) {
        above.push_back(x);
        pairs.emplace_back(g, x);
      } else if (a0 && c.leq(x, *a0)) {
        pairs.emplace_back(x, g);
      }
    }

    // Lift at the new point: one cone, carried over from B's single-class
    // quotient at g.
    for (const auto& rel : base.signature().relations()) {
      std::vector<std::string> probe(rel.arity, a1);
      if (!b.star_holds(rel.symbol, g, probe)) continue;
      auto& out = stars[rel.symbol];
      std::vector<std::string> acc(rel.arity + 1);
      acc[0] = g;
      std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == static_cast<std::size_t>(rel.arity)) {
          out.insert(acc);
          return;
        }
        for (const auto& y : above) {
          acc[pos + 1] = y;
          rec(pos + 1);
        }
      };
      rec(0);
    }

    // Lifts at centers below g: g is cone-equivalent to a1 there.  Tuples
    // centered at g itself were just added above and are never that low.
    if (a0) {
      for (auto& [symbol, tuples] : stars) {
        std::set<std::vector<std::string>> extra;
        for (const auto& tuple : tuples) {
          if (tuple[0] == g) continue;
          if (c.leq(tuple[0], *a0)) insert_substituted(extra, tuple, a1, g);
        }
        tuples.insert(extra.begin(), extra.end());
      }
    }
  } else {
    // Case II: g starts a fresh branch directly above its meet point
    // b1 = max {g ^ x : x in A}, which lies in A.
    std::vector<std::string> meets;
    for (const auto& x : a.elements()) meets.push_back(*b.meet(g, x));
    std::string b1 = meets.front();
    for (const auto& m : meets) {
      if (b.less(b1, m)) b1 = m;
    }

    for (const auto& x : c.elements()) {
      if (c.leq(x, b1)) pairs.emplace_back(x, g);
    }

    // Lifts at centers strictly below b1: g is cone-equivalent to b1 there.
    for (auto& [symbol, tuples] : stars) {
      std::set<std::vector<std::string>> extra;
      for (const auto& tuple : tuples) {
        if (c.less(tuple[0], b1)) insert_substituted(extra, tuple, b1, g);
      }
      tuples.insert(extra.begin(), extra.end());
    }

    // Lift at b1 itself: base-amalgamate the cone quotients.  A's cones are
    // labeled by the representative of the C-cone containing them, so the
    // A-quotient is literally an induced substructure of the C-quotient,
    // and g's fresh cone keeps the label g.
    ConeQuotient cq = cone_partition(c, b1);
    std::set<std::string> a_labels;
    for (const auto& x : a.elements()) {
      if (a.less(b1, x)) a_labels.insert(cq.representative_of(x));
    }
    BaseStructure a_star = cq.quotient.induced(
        std::vector<std::string>(a_labels.begin(), a_labels.end()));

    std::vector<std::string> b_universe = a_star.elements();
    b_universe.push_back(g);
    BaseStructure::RelationMap b_tuples;
    for (const auto& [symbol, tuples] : b.stars()) {
      for (const auto& tuple : tuples) {
        if (tuple[0] != b1) continue;
        std::vector<std::string> mapped(tuple.begin() + 1, tuple.end());
        for (auto& y : mapped) {
          if (y != g) y = cq.representative_of(y);
        }
        b_tuples[symbol].insert(std::move(mapped));
      }
    }
    BaseStructure b_star =
        BaseStructure::make(base.signature(), b_universe, std::move(b_tuples));

    BaseStructure q = base.amalgamate(a_star, b_star, cq.quotient);

    std::map<std::string, std::vector<std::string>> members;
    for (const auto& cone : cq.cones) members[cone.front()] = cone;
    members[g] = {g};
    expand_quotient(stars, b1, q, members);
  }

  return DecoratedStructure::make(c.signature(), std::move(elements), pairs,
                                  stars);
}

// Generators of B over core, minimal elements first (guaranteeing every
// prefix of the order is meet-closed), ties broken by name.
std::vector<std::string> generator_chain(const DecoratedStructure& b,
                                         const std::set<std::string>& core) {
  std::vector<std::string> gens;
  for (const auto& x : b.elements()) {
    if (!core.count(x)) gens.push_back(x);
  }
  std::stable_sort(gens.begin(), gens.end(),
                   [&](const std::string& x, const std::string& y) {
                     return b.below(x).size() < b.below(y).size();
                   });
  return gens;
}

void require_signature(const BaseClass& base, const DecoratedStructure& s,
                       const char* role) {
  if (!(s.signature() == base.signature())) {
    throw AmalgamError(std::string("amalgamate: ") + role +
                       " has a different signature than the base class");
  }
}

// A must be the structure induced by both factors on their shared universe,
// and must be closed under each factor's meet.
void require_core(const DecoratedStructure& a, const DecoratedStructure& b,
                  const DecoratedStructure& c) {
  if (shared_elements(b, c) != a.elements()) {
    throw AmalgamError("amalgamate: A must be exactly B intersect C");
  }
  if (!(b.induced(a.elements()) == a) || !(c.induced(a.elements()) == a)) {
    throw AmalgamError("amalgamate: B and C disagree with A on the core");
  }
  if (!is_meet_closed(b, a.elements()) || !is_meet_closed(c, a.elements())) {
    throw AmalgamError("amalgamate: A is not meet-closed in a factor");
  }
}

DecoratedStructure iterate_steps(const BaseClass& base,
                                 const DecoratedStructure& a,
                                 const DecoratedStructure& b,
                                 const DecoratedStructure& c) {
  std::set<std::string> core(a.elements().begin(), a.elements().end());
  DecoratedStructure d = c;
  for (const auto& g : generator_chain(b, core)) {
    std::vector<std::string> next(core.begin(), core.end());
    DecoratedStructure a_k = b.induced(next);
    next.push_back(g);
    DecoratedStructure b_k = b.induced(next);
    d = one_step(base, a_k, b_k, d, g);
    core.insert(g);
  }
  return d;
}

}  // namespace

DecoratedStructure jep(const BaseClass& base, const DecoratedStructure& a,
                       const DecoratedStructure& b) {
  require_signature(base, a, "A");
  require_signature(base, b, "B");
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  if (!shared_elements(a, b).empty()) {
    throw AmalgamError("jep: universes overlap");
  }

  std::string root = "~root";
  for (int k = 1; a.has(root) || b.has(root); ++k) {
    root = "~root" + std::to_string(k);
  }

  std::vector<std::string> elements = a.elements();
  elements.insert(elements.end(), b.elements().begin(), b.elements().end());
  std::vector<Pair> pairs = a.strict_pairs();
  for (const auto& p : b.strict_pairs()) pairs.push_back(p);
  for (const auto& x : elements) pairs.emplace_back(root, x);
  elements.push_back(root);

  StarMap stars = a.stars();
  for (const auto& [symbol, tuples] : b.stars()) {
    stars[symbol].insert(tuples.begin(), tuples.end());
  }

  // The two cones over the fresh root carry jointly embedded one-element
  // models, labeled by each side's least element.
  BaseStructure seed = base.one_element_models().front();
  BaseStructure qa = seed.renamed({{BaseClass::kOnePoint, a.elements().front()}});
  BaseStructure qb = seed.renamed({{BaseClass::kOnePoint, b.elements().front()}});
  BaseStructure q = base.joint_embed(qa, qb);
  std::map<std::string, std::vector<std::string>> members;
  members[a.elements().front()] = a.elements();
  members[b.elements().front()] = b.elements();
  expand_quotient(stars, root, q, members);

  return DecoratedStructure::make(a.signature(), std::move(elements), pairs,
                                  stars);
}

DecoratedStructure amalgamate_one_generator(const BaseClass& base,
                                            const DecoratedStructure& a,
                                            const DecoratedStructure& b,
                                            const DecoratedStructure& c) {
  require_signature(base, a, "A");
  require_signature(base, b, "B");
  require_signature(base, c, "C");
  if (a.size() == 0) return jep(base, b, c);
  require_core(a, b, c);
  if (b.size() - a.size() > 2) {
    throw AmalgamError(
        "amalgamate_one_generator: B has more than two elements over A");
  }
  return iterate_steps(base, a, b, c);
}

DecoratedStructure amalgamate(const BaseClass& base,
                              const DecoratedStructure& a,
                              const DecoratedStructure& b,
                              const DecoratedStructure& c) {
  require_signature(base, a, "A");
  require_signature(base, b, "B");
  require_signature(base, c, "C");
  if (a.size() == 0) return jep(base, b, c);
  require_core(a, b, c);
  return iterate_steps(base, a, b, c);
}

}  // namespace conetree
