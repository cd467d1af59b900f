#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace conetree {

// A relational signature for the theory living on open cones.  Equality is
// implicit and never listed; every listed symbol has arity >= 1.  On the
// decorated side each symbol R of arity n is stored as its lift R* of arity
// n+1 (center first), so the lifted arity is always arity(R) + 1.
class Signature {
 public:
  struct Relation {
    std::string symbol;
    int arity = 0;
    bool operator==(const Relation&) const = default;
  };

  Signature() : name_("equality") {}

  Signature(std::string name, std::vector<Relation> relations)
      : name_(std::move(name)), relations_(std::move(relations)) {
    for (std::size_t i = 0; i < relations_.size(); ++i) {
      const Relation& r = relations_[i];
      if (r.arity < 1) {
        throw std::invalid_argument("signature relation '" + r.symbol +
                                    "' must have arity >= 1");
      }
      if (r.symbol == "=" || r.symbol.empty()) {
        throw std::invalid_argument("relation symbol '" + r.symbol +
                                    "' is reserved");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (relations_[j].symbol == r.symbol) {
          throw std::invalid_argument("duplicate relation symbol '" +
                                      r.symbol + "'");
        }
      }
    }
  }

  static Signature equality() { return Signature("equality", {}); }
  static Signature graph() { return Signature("graph", {{"R", 2}}); }
  static Signature eq2() { return Signature("eq2", {{"E1", 2}, {"E2", 2}}); }

  const std::string& name() const { return name_; }
  const std::vector<Relation>& relations() const { return relations_; }

  bool has_relation(const std::string& symbol) const {
    return arity(symbol).has_value();
  }

  std::optional<int> arity(const std::string& symbol) const {
    for (const Relation& r : relations_) {
      if (r.symbol == symbol) return r.arity;
    }
    return std::nullopt;
  }

  // Arity of the lifted symbol R*: one extra slot for the cone center.
  std::optional<int> lifted_arity(const std::string& symbol) const {
    if (auto a = arity(symbol)) return *a + 1;
    return std::nullopt;
  }

  bool operator==(const Signature&) const = default;

 private:
  std::string name_;
  std::vector<Relation> relations_;
};

}  // namespace conetree
