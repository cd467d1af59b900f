#include "conetree/types.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "conetree/amalgam.hpp"

namespace conetree {

namespace {

using StarMap = DecoratedStructure::StarMap;
using Pair = std::pair<std::string, std::string>;

int kind_rank(TypeDescriptor::Kind k) { return static_cast<int>(k); }

bool base_less(const BaseStructure& x, const BaseStructure& y) {
  if (x.elements() != y.elements()) return x.elements() < y.elements();
  return x.relations() < y.relations();
}

std::string fresh_name(const std::string& stem,
                       const std::function<bool(const std::string&)>& taken) {
  std::string name = stem;
  for (int k = 1; taken(name); ++k) name = stem + std::to_string(k);
  return name;
}

// Stored lifts at `center` from quotient tuples whose labels name blocks.
void expand_into(StarMap& stars, const std::string& center,
                 const BaseStructure::RelationMap& quotient_tuples,
                 const std::map<std::string, std::vector<std::string>>& members) {
  for (const auto& [symbol, tuples] : quotient_tuples) {
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

// New lift tuples at centers strictly below `cap`: every stored tuple keeps
// holding when entries equal to `from` are swapped for new cone-mates.
void close_under_cone_mates(StarMap& stars, const DecoratedStructure& a,
                            const std::string& cap, const std::string& from,
                            const std::vector<std::string>& mates) {
  for (auto& [symbol, tuples] : stars) {
    std::set<std::vector<std::string>> extra;
    for (const auto& tuple : tuples) {
      if (!a.has(tuple[0]) || !a.less(tuple[0], cap)) continue;
      std::vector<std::size_t> spots;
      for (std::size_t i = 1; i < tuple.size(); ++i) {
        if (tuple[i] == from) spots.push_back(i);
      }
      if (spots.empty()) continue;
      std::size_t options = mates.size() + 1;  // keep, or any mate
      std::vector<std::size_t> pick(spots.size(), 0);
      while (true) {
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < options) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
        std::vector<std::string> t = tuple;
        for (std::size_t j = 0; j < spots.size(); ++j) {
          if (pick[j] > 0) t[spots[j]] = mates[pick[j] - 1];
        }
        extra.insert(std::move(t));
      }
    }
    tuples.insert(extra.begin(), extra.end());
  }
}

// Candidate filter: realize the one-point quotient extension (or the
// one-element cone model) and run the base's own membership check.
bool candidate_ok(const BaseClass& base, const BaseStructure& quotient,
                  const ExtensionDescriptor& ext) {
  std::string probe = fresh_name(
      "~probe", [&](const std::string& n) { return quotient.has(n); });
  return base.check_ok(ext.realize(quotient, probe));
}

}  // namespace

bool TypeDescriptor::operator<(const TypeDescriptor& other) const {
  if (kind != other.kind) return kind_rank(kind) < kind_rank(other.kind);
  if (ref != other.ref) return ref < other.ref;
  if (above != other.above) return above < other.above;
  if (b1_cone.has_value() != other.b1_cone.has_value()) {
    return !b1_cone.has_value();
  }
  if (b1_cone && !(*b1_cone == *other.b1_cone)) {
    return base_less(*b1_cone, *other.b1_cone);
  }
  if (cone_ext.has_value() != other.cone_ext.has_value()) {
    return !cone_ext.has_value();
  }
  if (cone_ext && !(*cone_ext == *other.cone_ext)) {
    return *cone_ext < *other.cone_ext;
  }
  return false;
}

std::string TypeDescriptor::to_string() const {
  std::ostringstream os;
  auto tuples = [&](const BaseStructure::RelationMap& rels) {
    os << "{";
    bool first = true;
    for (const auto& [symbol, set] : rels) {
      for (const auto& tuple : set) {
        if (!first) os << " ";
        first = false;
        os << symbol << "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
          if (i) os << ",";
          os << tuple[i];
        }
        os << ")";
      }
    }
    os << "}";
  };
  switch (kind) {
    case Kind::kElement:
      os << "element " << ref;
      break;
    case Kind::kInA:
      os << "new-cone-at " << ref << " ";
      tuples(cone_ext->tuples);
      break;
    case Kind::kFreshBelow:
      os << (above ? "above-fresh-meet-below " : "fresh-meet-below ") << ref
         << " ";
      tuples(b1_cone->relations());
      if (above) {
        os << " ";
        tuples(cone_ext->tuples);
      }
      break;
    case Kind::kLonePoint:
      os << "lone point";
      break;
  }
  return os.str();
}

std::vector<TypeDescriptor> enumerate_1types(const BaseClass& base,
                                             const DecoratedStructure& a) {
  std::vector<TypeDescriptor> out;
  if (a.size() == 0) {
    TypeDescriptor d;
    d.kind = TypeDescriptor::Kind::kLonePoint;
    out.push_back(std::move(d));
    return out;
  }

  for (const auto& e : a.elements()) {
    TypeDescriptor d;
    d.kind = TypeDescriptor::Kind::kElement;
    d.ref = e;
    out.push_back(std::move(d));
  }

  for (const auto& b1 : a.elements()) {
    ConeQuotient cq = cone_partition(a, b1);
    for (auto& ext : base.extensions(cq.quotient)) {
      if (!candidate_ok(base, cq.quotient, ext)) continue;
      TypeDescriptor d;
      d.kind = TypeDescriptor::Kind::kInA;
      d.ref = b1;
      d.cone_ext = std::move(ext);
      out.push_back(std::move(d));
    }
  }

  for (const auto& m : a.elements()) {
    for (const auto& model : base.one_element_models()) {
      if (!base.check_ok(model)) continue;
      TypeDescriptor d;
      d.kind = TypeDescriptor::Kind::kFreshBelow;
      d.ref = m;
      d.b1_cone = model;

      // Two-point descriptors first: their fresh meet point realizes the
      // one-point sibling for free, so a saturating pass adds fewer points.
      BaseStructure cone = model.renamed({{BaseClass::kOnePoint, m}});
      for (auto& ext : base.extensions(cone)) {
        if (!candidate_ok(base, cone, ext)) continue;
        d.above = true;
        d.cone_ext = std::move(ext);
        out.push_back(d);
        d.cone_ext.reset();
      }

      d.above = false;
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::size_t count_1types(const BaseClass& base, const DecoratedStructure& a) {
  return enumerate_1types(base, a).size();
}

TypeDescriptor compute_descriptor(const DecoratedStructure& m,
                                  const std::vector<std::string>& a_elements,
                                  const std::string& element) {
  TypeDescriptor d;
  if (std::binary_search(a_elements.begin(), a_elements.end(), element)) {
    d.kind = TypeDescriptor::Kind::kElement;
    d.ref = element;
    return d;
  }
  if (a_elements.empty()) {
    d.kind = TypeDescriptor::Kind::kLonePoint;
    return d;
  }

  // Meet point of the element into A.
  std::string b1 = *m.meet(element, a_elements.front());
  for (const auto& x : a_elements) {
    std::string mx = *m.meet(element, x);
    if (m.less(b1, mx)) b1 = mx;
  }

  const Signature& sig = m.signature();
  auto pattern_tuples = [&](const std::string& center,
                            const std::vector<std::string>& labels,
                            const std::map<std::string, std::string>& to_real) {
    // All satisfied lift atoms at `center` over label patterns that mention
    // the new element's label at least once.
    BaseStructure::RelationMap out;
    for (const auto& rel : sig.relations()) {
      std::vector<std::size_t> pick(rel.arity, 0);
      while (true) {
        std::vector<std::string> pattern(rel.arity);
        std::vector<std::string> real(rel.arity);
        bool has_new = false;
        for (int i = 0; i < rel.arity; ++i) {
          pattern[i] = labels[pick[i]];
          real[i] = to_real.at(pattern[i]);
          if (pattern[i] == ExtensionDescriptor::kNew) has_new = true;
        }
        if (has_new && m.star_holds(rel.symbol, center, real)) {
          out[rel.symbol].insert(pattern);
        }
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < labels.size()) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    }
    return out;
  };

  if (std::binary_search(a_elements.begin(), a_elements.end(), b1) &&
      b1 != element) {
    // New point strictly above an element of A, in a cone fresh for A.
    d.kind = TypeDescriptor::Kind::kInA;
    d.ref = b1;
    DecoratedStructure a = m.induced(a_elements);
    ConeQuotient cq = cone_partition(a, b1);
    std::vector<std::string> labels = cq.quotient.elements();
    std::map<std::string, std::string> to_real;
    for (const auto& l : labels) to_real[l] = l;
    labels.push_back(ExtensionDescriptor::kNew);
    to_real[ExtensionDescriptor::kNew] = element;
    ExtensionDescriptor ext;
    ext.tuples = pattern_tuples(b1, labels, to_real);
    d.cone_ext = std::move(ext);
    return d;
  }

  // Fresh meet point directly below ref = least element of A above b1; the
  // element either is that meet point or hangs above it in its own cone.
  std::vector<std::string> ups;
  for (const auto& x : a_elements) {
    if (m.less(b1, x)) ups.push_back(x);
  }
  std::string ref = *m.meet_all(ups);

  d.kind = TypeDescriptor::Kind::kFreshBelow;
  d.ref = ref;
  BaseStructure::RelationMap cone_rels;
  for (const auto& rel : sig.relations()) {
    std::vector<std::string> probe(rel.arity, ref);
    if (m.star_holds(rel.symbol, b1, probe)) {
      cone_rels[rel.symbol].insert(
          std::vector<std::string>(rel.arity, BaseClass::kOnePoint));
    }
  }
  d.b1_cone = BaseStructure::make(sig, {BaseClass::kOnePoint},
                                  std::move(cone_rels));
  if (b1 != element) {
    d.above = true;
    std::vector<std::string> labels{ref, ExtensionDescriptor::kNew};
    std::map<std::string, std::string> to_real{
        {ref, ref}, {ExtensionDescriptor::kNew, element}};
    ExtensionDescriptor ext;
    ext.tuples = pattern_tuples(b1, labels, to_real);
    d.cone_ext = std::move(ext);
  }
  return d;
}

Realization realize_type(const BaseClass& base, const DecoratedStructure& m,
                         const std::vector<std::string>& a_elements,
                         const TypeDescriptor& d) {
  if (!is_meet_closed(m, a_elements)) {
    throw std::invalid_argument("realize_type: A is not meet-closed in M");
  }
  if (d.kind == TypeDescriptor::Kind::kElement) {
    return {m, d.ref, std::nullopt};
  }

  auto taken = [&](const std::string& n) { return m.has(n); };
  std::string x = fresh_name("n0", taken);

  if (d.kind == TypeDescriptor::Kind::kLonePoint) {
    if (!a_elements.empty()) {
      throw std::invalid_argument("realize_type: lone point over nonempty A");
    }
    DecoratedStructure point =
        DecoratedStructure::make(m.signature(), {x}, {}, {});
    DecoratedStructure joined = jep(base, m, point);
    std::optional<std::string> root;
    if (m.size() > 0) {
      for (const auto& e : joined.elements()) {
        if (!m.has(e) && e != x) root = e;
      }
    }
    return {std::move(joined), x, root};
  }

  DecoratedStructure a = m.induced(a_elements);
  if (!a.has(d.ref)) {
    throw std::invalid_argument("realize_type: anchor is not in A");
  }
  std::vector<std::string> elements = a_elements;
  std::vector<Pair> pairs = a.strict_pairs();
  StarMap stars = a.stars();

  if (d.kind == TypeDescriptor::Kind::kInA) {
    elements.push_back(x);
    for (const auto& c : a_elements) {
      if (a.leq(c, d.ref)) pairs.emplace_back(c, x);
    }
    ConeQuotient cq = cone_partition(a, d.ref);
    std::map<std::string, std::vector<std::string>> members;
    for (const auto& cone : cq.cones) members[cone.front()] = cone;
    members[ExtensionDescriptor::kNew] = {x};
    expand_into(stars, d.ref, d.cone_ext->tuples, members);
    close_under_cone_mates(stars, a, d.ref, d.ref, {x});

    DecoratedStructure fragment =
        DecoratedStructure::make(a.signature(), std::move(elements), pairs,
                                 stars);
    return {amalgamate(base, a, fragment, m), x, std::nullopt};
  }

  // kFreshBelow: adjoin the fresh meet point b1 directly below ref, plus the
  // new element above it when the descriptor asks for one.
  std::string b1 = fresh_name(d.ref + "~meet",
                              [&](const std::string& n) { return m.has(n); });
  elements.push_back(b1);
  std::vector<std::string> over;  // the single A-side cone over b1
  for (const auto& c : a_elements) {
    if (a.leq(d.ref, c)) {
      over.push_back(c);
      pairs.emplace_back(b1, c);
    } else if (a.less(c, d.ref)) {
      pairs.emplace_back(c, b1);
    }
  }

  std::map<std::string, std::vector<std::string>> members;
  members[d.ref] = over;
  BaseStructure cone = d.b1_cone->renamed({{BaseClass::kOnePoint, d.ref}});
  expand_into(stars, b1, cone.relations(), members);

  std::string realized = b1;
  std::vector<std::string> mates{b1};
  if (d.above) {
    elements.push_back(x);
    pairs.emplace_back(b1, x);
    for (const auto& c : a_elements) {
      if (a.less(c, d.ref)) pairs.emplace_back(c, x);
    }
    members[ExtensionDescriptor::kNew] = {x};
    expand_into(stars, b1, d.cone_ext->tuples, members);
    realized = x;
    mates.push_back(x);
  }
  // A-centers strictly below b1 are exactly those strictly below ref.
  close_under_cone_mates(stars, a, d.ref, d.ref, mates);

  DecoratedStructure fragment = DecoratedStructure::make(
      a.signature(), std::move(elements), pairs, stars);
  return {amalgamate(base, a, fragment, m), realized, b1};
}

bool type_realized(const BaseClass& base, const DecoratedStructure& m,
                   const std::vector<std::string>& a_elements,
                   const TypeDescriptor& d) {
  (void)base;
  for (const auto& e : m.elements()) {
    if (compute_descriptor(m, a_elements, e) == d) return true;
  }
  return false;
}

}  // namespace conetree
