#include "conetree/base_class.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <random>

namespace conetree {

const std::string BaseClass::kOnePoint = "p";

namespace {

using RelationMap = BaseStructure::RelationMap;

std::vector<std::string> shared_elements(const BaseStructure& b,
                                         const BaseStructure& c) {
  std::vector<std::string> out;
  std::set_intersection(b.elements().begin(), b.elements().end(),
                        c.elements().begin(), c.elements().end(),
                        std::back_inserter(out));
  return out;
}

void require_over(const BaseStructure& a, const BaseStructure& b,
                  const BaseStructure& c) {
  std::vector<std::string> core = shared_elements(b, c);
  if (core != a.elements()) {
    throw AmalgamError("amalgamate: A must be exactly B intersect C");
  }
  if (!(b.induced(core) == a) || !(c.induced(core) == a)) {
    throw AmalgamError("amalgamate: B and C disagree with A on the core");
  }
}

// Union of universes and tuples; the minimal candidate amalgam.
BaseStructure free_union(const Signature& sig, const BaseStructure& b,
                         const BaseStructure& c) {
  std::vector<std::string> elems;
  std::set_union(b.elements().begin(), b.elements().end(),
                 c.elements().begin(), c.elements().end(),
                 std::back_inserter(elems));
  RelationMap rels = b.relations();
  for (const auto& [symbol, tuples] : c.relations()) {
    rels[symbol].insert(tuples.begin(), tuples.end());
  }
  return BaseStructure::make(sig, std::move(elems), std::move(rels));
}

// ---- equality ----------------------------------------------------------------

class EqualityBase final : public BaseClass {
 public:
  EqualityBase() : BaseClass("equality", Signature::equality()) {}

  std::vector<BaseViolation> check(const BaseStructure& s) const override {
    std::vector<BaseViolation> out;
    for (const auto& [symbol, tuples] : s.relations()) {
      for (const auto& tuple : tuples) {
        std::vector<std::string> t{symbol};
        t.insert(t.end(), tuple.begin(), tuple.end());
        out.push_back({"no-relations", t});
      }
    }
    return out;
  }

  BaseStructure amalgamate(const BaseStructure& a, const BaseStructure& b,
                           const BaseStructure& c) const override {
    require_over(a, b, c);
    return free_union(signature(), b, c);
  }

  BaseStructure joint_embed(const BaseStructure& a,
                            const BaseStructure& b) const override {
    if (!shared_elements(a, b).empty()) {
      throw AmalgamError("joint_embed: universes overlap");
    }
    return free_union(signature(), a, b);
  }

  std::vector<ExtensionDescriptor> extensions(
      const BaseStructure&) const override {
    return {ExtensionDescriptor{}};
  }

  std::vector<BaseStructure> one_element_models() const override {
    return {BaseStructure::make(signature(), {kOnePoint}, {})};
  }
};

// ---- graph -------------------------------------------------------------------

class GraphBase final : public BaseClass {
 public:
  GraphBase() : BaseClass("graph", Signature::graph()) {}

  std::vector<BaseViolation> check(const BaseStructure& s) const override {
    std::vector<BaseViolation> out;
    for (const auto& tuple : s.tuples("R")) {
      if (tuple[0] == tuple[1]) {
        out.push_back({"irreflexive", tuple});
      } else if (!s.holds("R", {tuple[1], tuple[0]})) {
        out.push_back({"symmetric", tuple});
      }
    }
    return out;
  }

  BaseStructure amalgamate(const BaseStructure& a, const BaseStructure& b,
                           const BaseStructure& c) const override {
    require_over(a, b, c);
    // Free amalgam: no edges between B minus A and C minus A.
    return free_union(signature(), b, c);
  }

  BaseStructure joint_embed(const BaseStructure& a,
                            const BaseStructure& b) const override {
    if (!shared_elements(a, b).empty()) {
      throw AmalgamError("joint_embed: universes overlap");
    }
    return free_union(signature(), a, b);
  }

  std::vector<ExtensionDescriptor> extensions(
      const BaseStructure& a) const override {
    // One descriptor per neighborhood: every subset of A, in mask order
    // over the sorted universe.
    const auto& elems = a.elements();
    std::vector<ExtensionDescriptor> out;
    for (std::uint64_t mask = 0; mask < (1ull << elems.size()); ++mask) {
      ExtensionDescriptor d;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (mask >> i & 1) {
          d.tuples["R"].insert({ExtensionDescriptor::kNew, elems[i]});
          d.tuples["R"].insert({elems[i], ExtensionDescriptor::kNew});
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  std::vector<BaseStructure> one_element_models() const override {
    return {BaseStructure::make(signature(), {kOnePoint}, {})};
  }
};

// ---- eq2 ---------------------------------------------------------------------

class Eq2Base final : public BaseClass {
 public:
  Eq2Base() : BaseClass("eq2", Signature::eq2()) {}

  std::vector<BaseViolation> check(const BaseStructure& s) const override {
    std::vector<BaseViolation> out;
    for (const std::string symbol : {"E1", "E2"}) {
      for (const auto& e : s.elements()) {
        if (!s.holds(symbol, {e, e})) {
          out.push_back({symbol + ":reflexive", {e, e}});
        }
      }
      for (const auto& tuple : s.tuples(symbol)) {
        if (!s.holds(symbol, {tuple[1], tuple[0]})) {
          out.push_back({symbol + ":symmetric", tuple});
        }
        for (const auto& z : s.elements()) {
          if (s.holds(symbol, {tuple[1], z}) &&
              !s.holds(symbol, {tuple[0], z})) {
            out.push_back({symbol + ":transitive", {tuple[0], tuple[1], z}});
          }
        }
      }
    }
    return out;
  }

  BaseStructure amalgamate(const BaseStructure& a, const BaseStructure& b,
                           const BaseStructure& c) const override {
    require_over(a, b, c);
    // Free amalgam: classes merge only through A, i.e. the union closed
    // under transitivity.
    BaseStructure u = free_union(signature(), b, c);
    RelationMap rels = u.relations();
    for (const std::string symbol : {"E1", "E2"}) {
      auto& tuples = rels[symbol];
      bool grew = true;
      while (grew) {
        grew = false;
        std::vector<std::vector<std::string>> snapshot(tuples.begin(),
                                                       tuples.end());
        for (const auto& xy : snapshot) {
          for (const auto& yz : snapshot) {
            if (xy[1] != yz[0]) continue;
            if (tuples.insert({xy[0], yz[1]}).second) grew = true;
          }
        }
      }
    }
    return BaseStructure::make(signature(), u.elements(), std::move(rels));
  }

  BaseStructure joint_embed(const BaseStructure& a,
                            const BaseStructure& b) const override {
    if (!shared_elements(a, b).empty()) {
      throw AmalgamError("joint_embed: universes overlap");
    }
    return free_union(signature(), a, b);
  }

  std::vector<ExtensionDescriptor> extensions(
      const BaseStructure& a) const override {
    // A class choice per relation: join one of the existing classes or open
    // a fresh one.  Class lists are ordered by least member.
    auto classes = [&](const std::string& symbol) {
      std::vector<std::vector<std::string>> out;
      std::set<std::string> used;
      for (const auto& e : a.elements()) {
        if (used.count(e)) continue;
        std::vector<std::string> cls;
        for (const auto& f : a.elements()) {
          if (f == e || a.holds(symbol, {e, f})) {
            cls.push_back(f);
            used.insert(f);
          }
        }
        out.push_back(std::move(cls));
      }
      return out;
    };
    std::vector<std::vector<std::string>> cls1 = classes("E1");
    std::vector<std::vector<std::string>> cls2 = classes("E2");
    // index == size() encodes the fresh class
    std::vector<ExtensionDescriptor> out;
    for (std::size_t i = 0; i <= cls1.size(); ++i) {
      for (std::size_t j = 0; j <= cls2.size(); ++j) {
        ExtensionDescriptor d;
        d.tuples["E1"].insert(
            {ExtensionDescriptor::kNew, ExtensionDescriptor::kNew});
        d.tuples["E2"].insert(
            {ExtensionDescriptor::kNew, ExtensionDescriptor::kNew});
        if (i < cls1.size()) {
          for (const auto& e : cls1[i]) {
            d.tuples["E1"].insert({ExtensionDescriptor::kNew, e});
            d.tuples["E1"].insert({e, ExtensionDescriptor::kNew});
          }
        }
        if (j < cls2.size()) {
          for (const auto& e : cls2[j]) {
            d.tuples["E2"].insert({ExtensionDescriptor::kNew, e});
            d.tuples["E2"].insert({e, ExtensionDescriptor::kNew});
          }
        }
        out.push_back(std::move(d));
      }
    }
    return out;
  }

  std::vector<BaseStructure> one_element_models() const override {
    RelationMap rels;
    rels["E1"].insert({kOnePoint, kOnePoint});
    rels["E2"].insert({kOnePoint, kOnePoint});
    return {BaseStructure::make(signature(), {kOnePoint}, std::move(rels))};
  }
};

// ---- registry ----------------------------------------------------------------

std::map<std::string, std::shared_ptr<const BaseClass>>& registry() {
  static std::map<std::string, std::shared_ptr<const BaseClass>> map = {
      {"equality", std::make_shared<EqualityBase>()},
      {"graph", std::make_shared<GraphBase>()},
      {"eq2", std::make_shared<Eq2Base>()},
  };
  return map;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

// Grow a random model of the base by repeatedly realizing one of its own
// extension descriptors.  Names are "q0", "q1", ...
BaseStructure grow_random(const BaseClass& base, std::size_t size,
                          std::mt19937_64& rng) {
  std::vector<BaseStructure> seeds = base.one_element_models();
  BaseStructure s =
      seeds[rng() % seeds.size()].renamed({{BaseClass::kOnePoint, "q0"}});
  for (std::size_t k = 1; k < size; ++k) {
    std::vector<ExtensionDescriptor> exts = base.extensions(s);
    if (exts.empty()) break;
    s = exts[rng() % exts.size()].realize(s, "q" + std::to_string(k));
  }
  return s;
}

// Best-effort strong amalgamation spot check on random small triples grown
// from the base's own extension enumeration.  Rejects bases whose amalgam
// fails its own check, disagrees with a factor, or drops an element.
void sap_spot_check(const BaseClass& base) {
  std::mt19937_64 rng(0x5eed);
  for (int trial = 0; trial < 24; ++trial) {
    BaseStructure b = grow_random(base, 1 + rng() % 3, rng);
    std::vector<std::string> core = b.elements();
    std::size_t extra = 1 + rng() % 2;
    for (std::size_t k = 0; k < extra; ++k) {
      std::vector<ExtensionDescriptor> exts = base.extensions(b);
      if (exts.empty()) break;
      b = exts[rng() % exts.size()].realize(
          b, "qb" + std::to_string(k));
    }
    BaseStructure a = b.induced(core);
    BaseStructure c = a;
    for (std::size_t k = 0; k < extra; ++k) {
      std::vector<ExtensionDescriptor> exts = base.extensions(c);
      if (exts.empty()) break;
      c = exts[rng() % exts.size()].realize(
          c, "qc" + std::to_string(k));
    }
    BaseStructure d = base.amalgamate(a, b, c);
    if (!base.check_ok(d)) {
      throw std::invalid_argument("register_base: amalgam of '" +
                                  base.name() + "' fails its own check");
    }
    for (const BaseStructure* factor : {&b, &c}) {
      for (const auto& e : factor->elements()) {
        if (std::find(d.elements().begin(), d.elements().end(), e) ==
            d.elements().end()) {
          throw std::invalid_argument(
              "register_base: amalgam of '" + base.name() +
              "' does not embed both factors");
        }
      }
      if (!(d.induced(factor->elements()) == *factor)) {
        throw std::invalid_argument("register_base: amalgam of '" +
                                    base.name() +
                                    "' disagrees with a factor");
      }
    }
  }
}

}  // namespace

const BaseClass& equality_base() { return base_by_name("equality"); }
const BaseClass& graph_base() { return base_by_name("graph"); }
const BaseClass& eq2_base() { return base_by_name("eq2"); }

const BaseClass& base_by_name(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end()) {
    throw std::invalid_argument("no base class named '" + name + "'");
  }
  return *it->second;
}

bool base_registered(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return registry().count(name) > 0;
}

void register_base(std::shared_ptr<const BaseClass> base) {
  if (!base) throw std::invalid_argument("register_base: null");
  sap_spot_check(*base);
  std::lock_guard<std::mutex> lock(registry_mutex());
  if (!registry().emplace(base->name(), base).second) {
    throw std::invalid_argument("base '" + base->name() +
                                "' already registered");
  }
}

std::vector<std::string> registered_base_names() {
  std::lock_guard<std::mutex> lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

}  // namespace conetree
