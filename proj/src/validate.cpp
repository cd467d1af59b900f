#include "conetree/validate.hpp"

#include <map>
#include <sstream>

#include "conetree/base_class.hpp"

namespace conetree {

std::string to_string(const Violation& v) {
  std::ostringstream out;
  out << v.axiom;
  if (!v.tuple.empty()) {
    out << " (";
    for (std::size_t i = 0; i < v.tuple.size(); ++i) {
      if (i) out << ", ";
      out << v.tuple[i];
    }
    out << ")";
  }
  if (!v.detail.empty()) out << ": " << v.detail;
  return out.str();
}

namespace {

void check_tree(const DecoratedStructure& s, ValidationReport& report) {
  const auto& elems = s.elements();
  for (const auto& a : elems) {
    if (!s.leq(a, a)) {
      report.violations.push_back({"T1", {a}, "missing reflexive pair"});
    }
  }
  for (const auto& a : elems) {
    for (const auto& b : elems) {
      if (a < b && s.leq(a, b) && s.leq(b, a)) {
        report.violations.push_back({"T2", {a, b}, "order cycle"});
      }
    }
  }
  for (const auto& a : elems) {
    for (const auto& b : elems) {
      if (a == b || !s.leq(a, b)) continue;
      for (const auto& c : elems) {
        if (s.leq(b, c) && !s.leq(a, c)) {
          report.violations.push_back({"T3", {a, b, c}, "transitivity gap"});
        }
      }
    }
  }
  for (const auto& x : elems) {
    std::vector<std::string> down = s.below(x);
    down.push_back(x);
    for (std::size_t i = 0; i < down.size(); ++i) {
      for (std::size_t j = i + 1; j < down.size(); ++j) {
        if (!s.comparable(down[i], down[j])) {
          report.violations.push_back(
              {"T4", {x, down[i], down[j]}, "set below is not a chain"});
        }
      }
    }
  }
  for (const auto& a : elems) {
    for (const auto& b : elems) {
      if (a < b && !s.meet(a, b)) {
        report.violations.push_back(
            {"T6", {a, b}, "no greatest common lower bound"});
      }
    }
  }
}

void check_universal(const DecoratedStructure& s, ValidationReport& report) {
  // EQ: the equality lift is definitional, so nothing may be stored for it
  // (the parser already refuses; direct construction cannot reach it either
  // because "=" is not a signature symbol).  What remains checkable is OC
  // and WD on every stored tuple.
  for (const auto& [symbol, tuples] : s.stars()) {
    for (const auto& tuple : tuples) {
      const std::string& center = tuple.front();
      for (std::size_t i = 1; i < tuple.size(); ++i) {
        if (!s.less(center, tuple[i])) {
          report.violations.push_back(
              {"OC", tuple, "entry not strictly above the center"});
          break;
        }
      }
    }
  }
  // WD per center: a stored set is closed under the cone equivalence iff
  // for each cone-level tuple the number of stored expansions equals the
  // product of the cone sizes.
  for (const auto& c : s.elements()) {
    // Partition {x : x > c} by hand; cone_partition itself expects a
    // structure that already passed this mode.
    std::map<std::string, std::string> rep;  // element -> cone representative
    std::map<std::string, std::size_t> cone_size;
    for (const auto& x : s.above(c)) {
      if (rep.count(x)) continue;
      std::vector<std::string> cone;
      for (const auto& y : s.above(c)) {
        if (y == x || s.same_cone(c, x, y)) cone.push_back(y);
      }
      for (const auto& y : cone) rep[y] = cone.front();
      cone_size[cone.front()] = cone.size();
    }
    for (const auto& [symbol, tuples] : s.stars()) {
      std::map<std::vector<std::string>, std::size_t> seen;
      for (const auto& tuple : tuples) {
        if (tuple.front() != c) continue;
        std::vector<std::string> key;
        bool ok = true;
        for (std::size_t i = 1; i < tuple.size(); ++i) {
          auto it = rep.find(tuple[i]);
          if (it == rep.end()) {
            ok = false;  // OC violation already reported
            break;
          }
          key.push_back(it->second);
        }
        if (ok) ++seen[key];
      }
      for (const auto& [key, count] : seen) {
        std::size_t expect = 1;
        for (const auto& r : key) expect *= cone_size[r];
        if (count != expect) {
          std::vector<std::string> tuple{c};
          tuple.insert(tuple.end(), key.begin(), key.end());
          report.violations.push_back(
              {"WD", tuple,
               "membership must depend only on cones (" +
                   std::to_string(count) + " of " + std::to_string(expect) +
                   " expansions stored for " + symbol + ")"});
        }
      }
    }
  }
}

void check_cones(const DecoratedStructure& s, const BaseClass& base,
                 ValidationReport& report) {
  for (const auto& c : s.elements()) {
    ConeQuotient q = cone_partition(s, c);
    for (const auto& v : base.check(q.quotient)) {
      std::vector<std::string> tuple{c};
      tuple.insert(tuple.end(), v.tuple.begin(), v.tuple.end());
      report.violations.push_back(
          {"cone:" + v.rule, tuple, "cone quotient at " + c});
    }
  }
}

}  // namespace

ValidationReport validate(const DecoratedStructure& s, ValidateMode mode) {
  if (mode == ValidateMode::kCones) {
    return validate(s, base_by_name(s.signature().name()), mode);
  }
  ValidationReport report;
  check_tree(s, report);
  if (mode == ValidateMode::kUniversal && report.ok()) {
    check_universal(s, report);
  }
  return report;
}

ValidationReport validate(const DecoratedStructure& s, const BaseClass& base,
                          ValidateMode mode) {
  if (base.signature() != s.signature()) {
    throw std::invalid_argument("signature mismatch: structure has '" +
                                s.signature().name() + "', base class is '" +
                                base.name() + "'");
  }
  ValidationReport report;
  check_tree(s, report);
  if (mode == ValidateMode::kTreeOnly || !report.ok()) return report;
  check_universal(s, report);
  if (mode == ValidateMode::kUniversal || !report.ok()) return report;
  check_cones(s, base, report);
  return report;
}

}  // namespace conetree
