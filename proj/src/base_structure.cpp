#include "conetree/base_structure.hpp"

#include <algorithm>
#include <stdexcept>

namespace conetree {

const std::string ExtensionDescriptor::kNew = "?new";

namespace {

void require(bool cond, const std::string& message) {
  if (!cond) throw std::invalid_argument(message);
}

}  // namespace

BaseStructure BaseStructure::make(Signature sig,
                                  std::vector<std::string> elements,
                                  RelationMap relations) {
  BaseStructure s;
  s.sig_ = std::move(sig);
  std::sort(elements.begin(), elements.end());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    require(!elements[i].empty() && elements[i][0] != '?',
            "bad element id '" + elements[i] + "'");
    require(i == 0 || elements[i] != elements[i - 1],
            "duplicate element '" + elements[i] + "'");
  }
  s.elements_ = std::move(elements);
  for (auto& [symbol, tuples] : relations) {
    auto arity = s.sig_.arity(symbol);
    require(arity.has_value(), "unknown relation symbol '" + symbol + "'");
    for (const auto& tuple : tuples) {
      require(static_cast<int>(tuple.size()) == *arity,
              "arity mismatch for '" + symbol + "'");
      for (const auto& e : tuple) {
        require(s.has(e), "tuple references unknown element '" + e + "'");
      }
    }
  }
  s.relations_ = std::move(relations);
  return s;
}

bool BaseStructure::has(const std::string& id) const {
  return std::binary_search(elements_.begin(), elements_.end(), id);
}

const BaseStructure::TupleSet& BaseStructure::tuples(
    const std::string& symbol) const {
  static const TupleSet kEmpty;
  auto it = relations_.find(symbol);
  return it == relations_.end() ? kEmpty : it->second;
}

bool BaseStructure::holds(const std::string& symbol,
                          const std::vector<std::string>& tuple) const {
  return tuples(symbol).count(tuple) > 0;
}

BaseStructure BaseStructure::induced(
    const std::vector<std::string>& subset) const {
  std::vector<std::string> keep;
  for (const auto& e : subset) {
    if (!has(e)) throw std::invalid_argument("induced: unknown element " + e);
    keep.push_back(e);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  RelationMap rels;
  for (const auto& [symbol, tuples] : relations_) {
    for (const auto& tuple : tuples) {
      bool inside = std::all_of(tuple.begin(), tuple.end(), [&](const auto& e) {
        return std::binary_search(keep.begin(), keep.end(), e);
      });
      if (inside) rels[symbol].insert(tuple);
    }
  }
  return make(sig_, keep, std::move(rels));
}

BaseStructure BaseStructure::renamed(
    const std::map<std::string, std::string>& map) const {
  auto rename = [&](const std::string& e) {
    auto it = map.find(e);
    if (it == map.end()) {
      throw std::invalid_argument("renamed: no image for " + e);
    }
    return it->second;
  };
  std::vector<std::string> elems;
  for (const auto& e : elements_) elems.push_back(rename(e));
  RelationMap rels;
  for (const auto& [symbol, tuples] : relations_) {
    for (const auto& tuple : tuples) {
      std::vector<std::string> t;
      for (const auto& e : tuple) t.push_back(rename(e));
      rels[symbol].insert(std::move(t));
    }
  }
  return make(sig_, std::move(elems), std::move(rels));
}

BaseStructure BaseStructure::extended(
    const std::vector<std::string>& new_elements,
    const RelationMap& new_tuples) const {
  std::vector<std::string> elems = elements_;
  elems.insert(elems.end(), new_elements.begin(), new_elements.end());
  RelationMap rels = relations_;
  for (const auto& [symbol, tuples] : new_tuples) {
    rels[symbol].insert(tuples.begin(), tuples.end());
  }
  return make(sig_, std::move(elems), std::move(rels));
}

BaseStructure ExtensionDescriptor::realize(const BaseStructure& a,
                                           const std::string& name) const {
  if (a.has(name)) {
    throw std::invalid_argument("realize: name collision on " + name);
  }
  BaseStructure::RelationMap rels;
  for (const auto& [symbol, tuple_set] : tuples) {
    for (const auto& tuple : tuple_set) {
      std::vector<std::string> t;
      for (const auto& e : tuple) t.push_back(e == kNew ? name : e);
      rels[symbol].insert(std::move(t));
    }
  }
  return a.extended({name}, rels);
}

ExtensionDescriptor ExtensionDescriptor::of(const BaseStructure& b,
                                            const std::string& element) {
  ExtensionDescriptor d;
  for (const auto& [symbol, tuple_set] : b.relations()) {
    for (const auto& tuple : tuple_set) {
      if (std::find(tuple.begin(), tuple.end(), element) == tuple.end()) {
        continue;
      }
      std::vector<std::string> t;
      for (const auto& e : tuple) t.push_back(e == element ? kNew : e);
      d.tuples[symbol].insert(std::move(t));
    }
  }
  return d;
}

}  // namespace conetree
