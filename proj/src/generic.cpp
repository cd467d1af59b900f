#include "conetree/generic.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

namespace conetree {

namespace {

// Meet-closures of every subset of 1..s generators, canonically ordered.
std::set<std::vector<std::string>> generated_substructures(
    const DecoratedStructure& m, int s) {
  std::set<std::vector<std::string>> out;
  const auto& elems = m.elements();
  std::vector<std::size_t> combo;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (!combo.empty()) {
      std::vector<std::string> points;
      for (std::size_t i : combo) points.push_back(elems[i]);
      out.insert(meet_closure_elements(m, points));
    }
    if (combo.size() == static_cast<std::size_t>(s)) return;
    for (std::size_t i = start; i < elems.size(); ++i) {
      combo.push_back(i);
      rec(i + 1);
      combo.pop_back();
    }
  };
  rec(0);
  return out;
}

// Canonical serialization of the induced substructure, assembled by probing
// m directly so the parent's star map is never copied per substructure.
// Mirrors serialize_structure on m.induced(sub) byte for byte.
std::string substructure_key(const DecoratedStructure& m,
                             const std::vector<std::string>& sub) {
  std::ostringstream out;
  out << "signature " << m.signature().name() << "\n";
  for (const auto& e : sub) out << "element " << e << "\n";
  for (const auto& a : sub) {
    for (const auto& b : sub) {
      if (a != b && m.leq(a, b)) out << "leq " << a << " " << b << "\n";
    }
  }
  std::vector<const Signature::Relation*> rels;
  for (const auto& rel : m.signature().relations()) rels.push_back(&rel);
  std::sort(rels.begin(), rels.end(),
            [](const Signature::Relation* l, const Signature::Relation* r) {
              return l->symbol < r->symbol;
            });
  for (const Signature::Relation* rel : rels) {
    for (const auto& c : sub) {
      std::vector<std::string> uppers;
      for (const auto& e : sub) {
        if (m.less(c, e)) uppers.push_back(e);
      }
      if (uppers.empty()) continue;
      std::vector<std::size_t> pick(static_cast<std::size_t>(rel->arity), 0);
      while (true) {
        std::vector<std::string> entries;
        for (std::size_t i : pick) entries.push_back(uppers[i]);
        if (m.star_holds(rel->symbol, c, entries)) {
          out << "rel " << rel->symbol << " " << c;
          for (const auto& e : entries) out << " " << e;
          out << "\n";
        }
        std::size_t spot = pick.size();
        while (spot > 0 && pick[spot - 1] + 1 == uppers.size()) {
          pick[--spot] = 0;
        }
        if (spot == 0) break;
        ++pick[spot - 1];
      }
    }
  }
  return out.str();
}

std::set<TypeDescriptor> realized_descriptors(
    const DecoratedStructure& m, const std::vector<std::string>& a) {
  std::set<TypeDescriptor> out;
  for (const auto& e : m.elements()) {
    out.insert(compute_descriptor(m, a, e));
  }
  return out;
}

// How many fresh elements realizing d must add.
std::size_t realization_cost(const TypeDescriptor& d) {
  switch (d.kind) {
    case TypeDescriptor::Kind::kElement:
      return 0;
    case TypeDescriptor::Kind::kInA:
    case TypeDescriptor::Kind::kLonePoint:
      return 1;
    case TypeDescriptor::Kind::kFreshBelow:
      return d.above ? 2 : 1;
  }
  return 2;
}

// Rewrites a descriptor computed over dom(f) in M into the matching
// descriptor over ran(f) in N: the anchor maps through f and cone labels
// are renormalized to N's canonical representatives.
TypeDescriptor map_descriptor(const TypeDescriptor& d,
                              const std::map<std::string, std::string>& f,
                              const DecoratedStructure& n,
                              const std::vector<std::string>& range) {
  TypeDescriptor out = d;
  if (d.kind == TypeDescriptor::Kind::kLonePoint) return out;
  out.ref = f.at(d.ref);
  if (!d.cone_ext) return out;

  std::map<std::string, std::string> relabel{
      {ExtensionDescriptor::kNew, ExtensionDescriptor::kNew}};
  if (d.kind == TypeDescriptor::Kind::kInA) {
    DecoratedStructure a = n.induced(range);
    ConeQuotient cq = cone_partition(a, out.ref);
    for (const auto& [symbol, tuples] : d.cone_ext->tuples) {
      for (const auto& tuple : tuples) {
        for (const auto& label : tuple) {
          if (label != ExtensionDescriptor::kNew) {
            relabel[label] = cq.representative_of(f.at(label));
          }
        }
      }
      (void)symbol;
    }
  } else {
    relabel[d.ref] = out.ref;
  }

  ExtensionDescriptor ext;
  for (const auto& [symbol, tuples] : d.cone_ext->tuples) {
    for (const auto& tuple : tuples) {
      std::vector<std::string> t = tuple;
      for (auto& label : t) label = relabel.at(label);
      ext.tuples[symbol].insert(std::move(t));
    }
  }
  out.cone_ext = std::move(ext);
  return out;
}

// First atom on which the f-image of M's core differs from N's, if any.
std::optional<std::string> iso_mismatch(
    const DecoratedStructure& m, const DecoratedStructure& n,
    const std::map<std::string, std::string>& f) {
  std::vector<std::string> dom;
  std::set<std::string> ran;
  for (const auto& [x, y] : f) {
    if (!m.has(x)) return "element " + x + " is not in the left structure";
    if (!n.has(y)) return "element " + y + " is not in the right structure";
    dom.push_back(x);
    if (!ran.insert(y).second) return "map is not injective at " + y;
  }
  DecoratedStructure mi = m.induced(dom);
  DecoratedStructure ni =
      n.induced(std::vector<std::string>(ran.begin(), ran.end()));
  DecoratedStructure mapped = mi.renamed(f);
  if (mapped == ni) return std::nullopt;
  for (const auto& p : mapped.strict_pairs()) {
    if (!ni.less(p.first, p.second)) {
      return "order atom " + p.first + " < " + p.second;
    }
  }
  for (const auto& p : ni.strict_pairs()) {
    if (!mapped.less(p.first, p.second)) {
      return "order atom " + p.first + " < " + p.second +
             " holds only on the right";
    }
  }
  for (const auto* side : {&mapped, &ni}) {
    for (const auto& [symbol, tuples] : side->stars()) {
      for (const auto& tuple : tuples) {
        std::vector<std::string> rest(tuple.begin() + 1, tuple.end());
        if (!mapped.star_holds(symbol, tuple[0], rest) ||
            !ni.star_holds(symbol, tuple[0], rest)) {
          std::ostringstream os;
          os << "lift atom " << symbol << "*(";
          for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) os << ",";
            os << tuple[i];
          }
          os << ")";
          return os.str();
        }
      }
    }
  }
  return "structures differ";
}

}  // namespace

std::size_t CoverageReport::realized_count() const {
  std::size_t k = 0;
  for (const auto& p : pairs) {
    if (p.realized) ++k;
  }
  return k;
}

double CoverageReport::fraction() const {
  if (pairs.empty()) return 1.0;
  return static_cast<double>(realized_count()) /
         static_cast<double>(pairs.size());
}

CoverageReport check_extension_property_on(
    const BaseClass& base, const DecoratedStructure& m,
    const std::vector<std::vector<std::string>>& substructures) {
  CoverageReport report;
  for (const auto& sub : substructures) {
    if (!is_meet_closed(m, sub)) {
      throw std::invalid_argument(
          "check_extension_property_on: substructure is not meet-closed");
    }
    std::set<TypeDescriptor> realized = realized_descriptors(m, sub);
    DecoratedStructure a = m.induced(sub);
    for (auto& t : enumerate_1types(base, a)) {
      bool hit = realized.count(t) > 0;
      report.pairs.push_back({sub, std::move(t), hit});
    }
  }
  return report;
}

CoverageReport check_extension_property(const BaseClass& base,
                                        const DecoratedStructure& m, int s,
                                        std::size_t sample_limit) {
  std::set<std::vector<std::string>> all = generated_substructures(m, s);
  std::vector<std::vector<std::string>> subs(all.begin(), all.end());
  if (sample_limit > 0 && subs.size() > sample_limit) {
    std::vector<std::vector<std::string>> picked;
    for (std::size_t i = 0; i < sample_limit; ++i) {
      picked.push_back(subs[i * subs.size() / sample_limit]);
    }
    subs = std::move(picked);
  }
  return check_extension_property_on(base, m, subs);
}

std::vector<std::vector<std::string>> BuildResult::processed_substructures()
    const {
  std::set<std::vector<std::string>> seen;
  for (const auto& round : processed) {
    seen.insert(round.begin(), round.end());
  }
  return {seen.begin(), seen.end()};
}

BuildResult build_generic(const BaseClass& base, std::size_t max_elements,
                          int closure_size, int rounds, std::uint64_t seed) {
  if (max_elements == 0 || closure_size < 1 || rounds < 1) {
    throw std::invalid_argument("build_generic: empty budget");
  }
  BuildResult result;
  result.structure = DecoratedStructure::make(base.signature(), {"p0"}, {}, {});
  std::mt19937_64 rng(seed);

  for (int round = 0; round < rounds; ++round) {
    DecoratedStructure& m = result.structure;
    std::set<std::vector<std::string>> all =
        generated_substructures(m, closure_size);
    std::vector<std::pair<std::string, std::vector<std::string>>> keyed;
    keyed.reserve(all.size());
    for (const auto& sub : all) {
      keyed.emplace_back(substructure_key(m, sub), sub);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<std::string>> subs;
    subs.reserve(keyed.size());
    for (auto& [key, sub] : keyed) subs.push_back(std::move(sub));
    if (max_elements > m.size() &&
        subs.size() > max_elements - m.size()) {
      std::shuffle(subs.begin(), subs.end(), rng);
    }
    result.processed.emplace_back();
    bool budget_hit = false;
    for (const auto& sub : subs) {
      std::set<TypeDescriptor> realized = realized_descriptors(m, sub);
      bool complete = true;
      DecoratedStructure a = m.induced(sub);
      for (const auto& t : enumerate_1types(base, a)) {
        if (realized.count(t)) continue;
        if (m.size() + realization_cost(t) > max_elements) {
          complete = false;
          budget_hit = true;
          break;
        }
        Realization r = realize_type(base, m, sub, t);
        m = std::move(r.structure);
        ++result.realizations;
        realized.insert(compute_descriptor(m, sub, r.element));
        if (r.meet_point) {
          realized.insert(compute_descriptor(m, sub, *r.meet_point));
        }
      }
      if (complete) result.processed.back().push_back(sub);
      if (budget_hit) break;
    }
    if (budget_hit) break;
  }
  return result;
}

BafResult back_and_forth(const BaseClass& base, const DecoratedStructure& m,
                         const DecoratedStructure& n,
                         const std::map<std::string, std::string>& f,
                         int steps, std::uint64_t seed) {
  (void)base;  // descriptors are base-independent; kept for interface symmetry
  BafResult result;
  result.map = f;

  std::optional<std::string> mismatch = iso_mismatch(m, n, f);
  std::vector<std::string> dom, ran;
  for (const auto& [x, y] : f) {
    dom.push_back(x);
    ran.push_back(y);
  }
  std::sort(ran.begin(), ran.end());
  if (!mismatch && !is_meet_closed(m, dom)) {
    mismatch = "domain is not meet-closed";
  }
  if (!mismatch && !is_meet_closed(n, ran)) {
    mismatch = "range is not meet-closed";
  }
  if (mismatch) {
    result.failed_element = dom.empty() ? std::string() : dom.front();
    result.detail = *mismatch;
    return result;
  }

  std::map<std::string, std::string> inverse;
  for (const auto& [x, y] : f) inverse[y] = x;
  std::mt19937_64 rng(seed);

  for (int step = 0; step < steps; ++step) {
    bool forth = step % 2 == 0;
    for (int attempt = 0; attempt < 2; ++attempt, forth = !forth) {
      const DecoratedStructure& src = forth ? m : n;
      const DecoratedStructure& dst = forth ? n : m;
      auto& fwd = forth ? result.map : inverse;
      auto& bwd = forth ? inverse : result.map;

      std::string x;
      for (const auto& e : src.elements()) {
        if (!fwd.count(e)) {
          x = e;
          break;
        }
      }
      if (x.empty()) continue;  // this side is finished; try the other

      std::vector<std::string> a, b;
      for (const auto& [u, _] : fwd) a.push_back(u);
      for (const auto& [u, _] : bwd) b.push_back(u);

      TypeDescriptor want = map_descriptor(compute_descriptor(src, a, x),
                                           fwd, dst, b);
      std::vector<std::string> candidates;
      for (const auto& y : dst.elements()) {
        if (bwd.count(y)) continue;
        if (compute_descriptor(dst, b, y) == want) candidates.push_back(y);
      }
      if (candidates.empty()) {
        result.failed_element = x;
        result.detail = "no unmatched target of type " + want.to_string();
        return result;
      }
      std::string y = candidates[rng() % candidates.size()];
      fwd[x] = y;
      bwd[y] = x;
      // A fresh meet point must ride along to keep both sides meet-closed.
      if (want.kind == TypeDescriptor::Kind::kFreshBelow && want.above) {
        auto meet_point = [](const DecoratedStructure& s,
                             const std::vector<std::string>& core,
                             const std::string& e) {
          std::string top = *s.meet(e, core.front());
          for (const auto& u : core) {
            std::string cand = *s.meet(e, u);
            if (s.less(top, cand)) top = cand;
          }
          return top;
        };
        std::string mx = meet_point(src, a, x);
        std::string my = meet_point(dst, b, y);
        fwd[mx] = my;
        bwd[my] = mx;
      }
      ++result.steps_completed;
      break;
    }
    bool m_done = true, n_done = true;
    for (const auto& e : m.elements()) {
      if (!result.map.count(e)) m_done = false;
    }
    for (const auto& e : n.elements()) {
      if (!inverse.count(e)) n_done = false;
    }
    if (m_done && n_done) {
      result.exhausted = true;
      break;
    }
  }
  return result;
}

}  // namespace conetree
