#include "conetree/structure.hpp"

#include <algorithm>
#include <stdexcept>

namespace conetree {

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

DecoratedStructure::DecoratedStructure() : sig_(Signature::equality()) {}

DecoratedStructure DecoratedStructure::make(
    Signature sig, std::vector<std::string> elements,
    const std::vector<std::pair<std::string, std::string>>& leq_pairs,
    const StarMap& stars) {
  DecoratedStructure s;
  s.sig_ = std::move(sig);
  std::sort(elements.begin(), elements.end());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string& id = elements[i];
    require(!id.empty(), "empty element id");
    require(id[0] != '?' && id[0] != '#', "bad element id '" + id + "'");
    require(id.find_first_of(" \t\r\n") == std::string::npos,
            "bad element id '" + id + "'");
    require(i == 0 || id != elements[i - 1], "duplicate element '" + id + "'");
  }
  s.elements_ = std::move(elements);
  for (std::size_t i = 0; i < s.elements_.size(); ++i) {
    s.index_[s.elements_[i]] = static_cast<int>(i);
  }
  const std::size_t n = s.elements_.size();
  s.leq_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) s.leq_[i * n + i] = 1;
  for (const auto& [a, b] : leq_pairs) {
    int ia = s.index_of(a);
    int ib = s.index_of(b);
    require(ia >= 0, "leq references unknown element '" + a + "'");
    require(ib >= 0, "leq references unknown element '" + b + "'");
    s.leq_[s.idx(ia, ib)] = 1;
  }
  for (const auto& [symbol, tuples] : stars) {
    auto lifted = s.sig_.lifted_arity(symbol);
    require(lifted.has_value(), "unknown relation symbol '" + symbol + "'");
    for (const auto& tuple : tuples) {
      require(static_cast<int>(tuple.size()) == *lifted,
              "lift arity mismatch for '" + symbol + "'");
      for (const auto& e : tuple) {
        require(s.has(e), "tuple references unknown element '" + e + "'");
      }
    }
    if (!tuples.empty()) s.stars_[symbol] = tuples;
  }
  s.derive();
  return s;
}

void DecoratedStructure::derive() {
  const std::size_t n = elements_.size();
  meet_.assign(n * n, -1);
  if (n == 0) return;
  // below-set bitmasks; total even when the order axioms fail.
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> below(n * words, 0);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t a = 0; a < n; ++a) {
      if (leq_[a * n + b]) below[b * words + a / 64] |= 1ull << (a % 64);
    }
  }
  std::vector<std::uint64_t> common(words);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      bool empty = true;
      for (std::size_t w = 0; w < words; ++w) {
        common[w] = below[a * words + w] & below[b * words + w];
        if (common[w]) empty = false;
      }
      int found = -1;
      if (!empty) {
        // the meet is the unique common lower bound above all others
        for (std::size_t w = 0; w < words && found < 0; ++w) {
          std::uint64_t bits = common[w];
          while (bits) {
            std::size_t m = w * 64 + static_cast<std::size_t>(
                                         __builtin_ctzll(bits));
            bits &= bits - 1;
            bool greatest = true;
            for (std::size_t v = 0; v < words; ++v) {
              if (common[v] & ~below[m * words + v]) {
                greatest = false;
                break;
              }
            }
            if (greatest) {
              found = static_cast<int>(m);
              break;
            }
          }
        }
      }
      meet_[idx(static_cast<int>(a), static_cast<int>(b))] = found;
      meet_[idx(static_cast<int>(b), static_cast<int>(a))] = found;
    }
  }
}

int DecoratedStructure::index_of(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

bool DecoratedStructure::leq(const std::string& a, const std::string& b) const {
  int ia = index_of(a), ib = index_of(b);
  require(ia >= 0, "unknown element '" + a + "'");
  require(ib >= 0, "unknown element '" + b + "'");
  return leq_at(ia, ib);
}

bool DecoratedStructure::less(const std::string& a,
                              const std::string& b) const {
  return a != b && leq(a, b);
}

bool DecoratedStructure::comparable(const std::string& a,
                                    const std::string& b) const {
  return leq(a, b) || leq(b, a);
}

std::optional<std::string> DecoratedStructure::meet(
    const std::string& a, const std::string& b) const {
  int ia = index_of(a), ib = index_of(b);
  require(ia >= 0, "unknown element '" + a + "'");
  require(ib >= 0, "unknown element '" + b + "'");
  int m = meet_at(ia, ib);
  if (m < 0) return std::nullopt;
  return elements_[static_cast<std::size_t>(m)];
}

std::optional<std::string> DecoratedStructure::meet_all(
    const std::vector<std::string>& items) const {
  if (items.empty()) return std::nullopt;
  std::string acc = items.front();
  for (std::size_t i = 1; i < items.size(); ++i) {
    auto m = meet(acc, items[i]);
    if (!m) return std::nullopt;
    acc = *m;
  }
  return acc;
}

std::optional<std::string> DecoratedStructure::minimum() const {
  const std::size_t n = elements_.size();
  for (std::size_t a = 0; a < n; ++a) {
    bool min = true;
    for (std::size_t b = 0; b < n; ++b) {
      if (!leq_[a * n + b]) {
        min = false;
        break;
      }
    }
    if (min) return elements_[a];
  }
  return std::nullopt;
}

std::vector<std::string> DecoratedStructure::above(const std::string& c) const {
  std::vector<std::string> out;
  for (const auto& e : elements_) {
    if (e != c && leq(c, e)) out.push_back(e);
  }
  return out;
}

std::vector<std::string> DecoratedStructure::below(const std::string& c) const {
  std::vector<std::string> out;
  for (const auto& e : elements_) {
    if (e != c && leq(e, c)) out.push_back(e);
  }
  return out;
}

std::vector<std::string> DecoratedStructure::maximal_elements() const {
  std::vector<std::string> out;
  for (const auto& e : elements_) {
    if (above(e).empty()) out.push_back(e);
  }
  return out;
}

bool DecoratedStructure::same_cone(const std::string& c, const std::string& a,
                                   const std::string& b) const {
  if (!less(c, a) || !less(c, b)) return false;
  auto m = meet(a, b);
  return m && less(c, *m);
}

bool DecoratedStructure::star_holds(const std::string& symbol,
                                    const std::string& center,
                                    const std::vector<std::string>& tuple) const {
  auto it = stars_.find(symbol);
  if (it == stars_.end()) return false;
  std::vector<std::string> full;
  full.reserve(tuple.size() + 1);
  full.push_back(center);
  full.insert(full.end(), tuple.begin(), tuple.end());
  return it->second.count(full) > 0;
}

DecoratedStructure DecoratedStructure::induced(
    const std::vector<std::string>& subset) const {
  std::vector<std::string> keep = subset;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (const auto& e : keep) {
    require(has(e), "induced: unknown element '" + e + "'");
  }
  auto inside = [&](const std::string& e) {
    return std::binary_search(keep.begin(), keep.end(), e);
  };
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : keep) {
    for (const auto& b : keep) {
      if (leq(a, b)) pairs.emplace_back(a, b);
    }
  }
  StarMap stars;
  for (const auto& [symbol, tuples] : stars_) {
    for (const auto& tuple : tuples) {
      if (std::all_of(tuple.begin(), tuple.end(), inside)) {
        stars[symbol].insert(tuple);
      }
    }
  }
  return make(sig_, std::move(keep), pairs, stars);
}

DecoratedStructure DecoratedStructure::renamed(
    const std::map<std::string, std::string>& map) const {
  auto rename = [&](const std::string& e) {
    auto it = map.find(e);
    require(it != map.end(), "renamed: no image for '" + e + "'");
    return it->second;
  };
  std::vector<std::string> elems;
  for (const auto& e : elements_) elems.push_back(rename(e));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : elements_) {
    for (const auto& b : elements_) {
      if (a != b && leq(a, b)) pairs.emplace_back(rename(a), rename(b));
    }
  }
  StarMap stars;
  for (const auto& [symbol, tuples] : stars_) {
    for (const auto& tuple : tuples) {
      std::vector<std::string> t;
      for (const auto& e : tuple) t.push_back(rename(e));
      stars[symbol].insert(std::move(t));
    }
  }
  return make(sig_, std::move(elems), pairs, stars);
}

std::vector<std::pair<std::string, std::string>>
DecoratedStructure::strict_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& a : elements_) {
    for (const auto& b : elements_) {
      if (a != b && leq(a, b)) out.emplace_back(a, b);
    }
  }
  return out;
}

bool DecoratedStructure::operator==(const DecoratedStructure& other) const {
  return sig_ == other.sig_ && elements_ == other.elements_ &&
         leq_ == other.leq_ && stars_ == other.stars_;
}

DecoratedStructure meet_closure(const DecoratedStructure& s,
                                const std::vector<std::string>& points) {
  return s.induced(meet_closure_elements(s, points));
}

std::vector<std::string> meet_closure_elements(
    const DecoratedStructure& s, const std::vector<std::string>& points) {
  std::set<std::string> closed(points.begin(), points.end());
  for (const auto& p : closed) {
    if (!s.has(p)) throw std::invalid_argument("closure: unknown element " + p);
  }
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::string> snapshot(closed.begin(), closed.end());
    for (std::size_t i = 0; i < snapshot.size() && !grew; ++i) {
      for (std::size_t j = i + 1; j < snapshot.size() && !grew; ++j) {
        auto m = s.meet(snapshot[i], snapshot[j]);
        if (!m) {
          throw std::invalid_argument("closure: no meet of " + snapshot[i] +
                                      " and " + snapshot[j]);
        }
        if (closed.insert(*m).second) grew = true;
      }
    }
  }
  return {closed.begin(), closed.end()};
}

bool is_meet_closed(const DecoratedStructure& s,
                    const std::vector<std::string>& subset) {
  std::set<std::string> set(subset.begin(), subset.end());
  for (const auto& a : set) {
    if (!s.has(a)) return false;
    for (const auto& b : set) {
      auto m = s.meet(a, b);
      if (!m || !set.count(*m)) return false;
    }
  }
  return true;
}

const std::string& ConeQuotient::representative_of(
    const std::string& element) const {
  for (const auto& cone : cones) {
    if (std::binary_search(cone.begin(), cone.end(), element)) {
      return cone.front();
    }
  }
  throw std::invalid_argument("no cone contains '" + element + "'");
}

ConeQuotient cone_partition(const DecoratedStructure& s,
                            const std::string& center) {
  ConeQuotient q;
  q.center = center;
  std::vector<std::string> up = s.above(center);
  std::vector<bool> used(up.size(), false);
  for (std::size_t i = 0; i < up.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::string> cone{up[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < up.size(); ++j) {
      if (!used[j] && s.same_cone(center, up[i], up[j])) {
        cone.push_back(up[j]);
        used[j] = true;
      }
    }
    std::sort(cone.begin(), cone.end());
    q.cones.push_back(std::move(cone));
  }
  std::sort(q.cones.begin(), q.cones.end());
  std::vector<std::string> reps;
  for (const auto& cone : q.cones) reps.push_back(cone.front());
  BaseStructure::RelationMap rels;
  for (const auto& [symbol, tuples] : s.stars()) {
    for (const auto& tuple : tuples) {
      if (tuple.front() != center) continue;
      std::vector<std::string> t;
      for (std::size_t i = 1; i < tuple.size(); ++i) {
        t.push_back(q.representative_of(tuple[i]));
      }
      rels[symbol].insert(std::move(t));
    }
  }
  q.quotient = BaseStructure::make(s.signature(), reps, std::move(rels));
  return q;
}

}  // namespace conetree
