#include "conetree/witness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "conetree/types.hpp"
#include "conetree/validate.hpp"

namespace conetree {

namespace {

using StarMap = DecoratedStructure::StarMap;
using Pair = std::pair<std::string, std::string>;

constexpr const char* kVar = "?x";

const BaseClass& registered_base_for(const Signature& sig) {
  if (!base_registered(sig.name())) {
    throw std::invalid_argument("no registered base class named '" +
                                sig.name() + "'");
  }
  const BaseClass& base = base_by_name(sig.name());
  if (!(base.signature() == sig)) {
    throw std::invalid_argument("signature does not match base class '" +
                                sig.name() + "'");
  }
  return base;
}

// A one-point model of the base, required to be unique so that pure-marker
// atoms at the chain top have a determined value.
BaseStructure unique_one_point_model(const BaseClass& base) {
  std::vector<BaseStructure> models = base.one_element_models();
  if (models.size() != 1) {
    throw std::invalid_argument(
        "base class '" + base.name() +
        "' has several one-point models; branch atoms at the top are "
        "undetermined");
  }
  return models.front();
}

}  // namespace

// ---- branch types ------------------------------------------------------------

BranchTypeRecord branch_type(const DecoratedStructure& m,
                             const std::vector<std::string>& chain) {
  if (chain.empty()) {
    throw std::invalid_argument("branch_type: empty chain");
  }
  for (const auto& e : chain) {
    if (!m.has(e)) {
      throw std::invalid_argument("branch_type: unknown element " + e);
    }
  }
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!m.less(chain[i], chain[i + 1])) {
      throw std::invalid_argument("branch_type: chain is not ascending");
    }
  }
  const std::string& top = chain.back();
  std::vector<std::string> full = m.below(top);
  full.push_back(top);
  std::vector<std::string> sorted_chain = chain;
  std::sort(sorted_chain.begin(), sorted_chain.end());
  std::sort(full.begin(), full.end());
  if (sorted_chain != full || !m.above(top).empty()) {
    throw std::invalid_argument("branch_type: chain is not maximal");
  }

  const BaseClass& base = registered_base_for(m.signature());
  BaseStructure top_model = unique_one_point_model(base);

  BranchTypeRecord record;
  record.chain = chain;
  std::set<std::string> in_chain(chain.begin(), chain.end());
  for (const auto& e : m.elements()) {
    record.meet_with[e] = in_chain.count(e) ? e : *m.meet(e, top);
  }

  std::vector<std::string> slots_pool = m.elements();
  slots_pool.push_back(kVar);
  for (const auto& rel : m.signature().relations()) {
    int width = rel.arity + 1;
    std::vector<std::size_t> pick(width, 0);
    while (true) {
      std::vector<std::string> slots(width);
      bool has_var = false;
      for (int i = 0; i < width; ++i) {
        slots[i] = slots_pool[pick[i]];
        if (slots[i] == kVar) has_var = true;
      }
      if (has_var) {
        bool value = false;
        const std::string& center = slots[0];
        if (center != kVar && in_chain.count(center)) {
          bool entries_ok = true;
          bool pure = true;
          std::vector<std::string> entries(slots.begin() + 1, slots.end());
          for (auto& y : entries) {
            if (y == kVar) continue;
            pure = false;
            if (!m.less(center, y)) entries_ok = false;
          }
          if (entries_ok) {
            if (center == top) {
              // Nothing of M sits above the top, so only pure-marker atoms
              // can hold; they read off the one-point model of the new cone.
              if (pure) {
                value = top_model.holds(
                    rel.symbol, std::vector<std::string>(
                                    rel.arity, BaseClass::kOnePoint));
              }
            } else {
              for (auto& y : entries) {
                if (y == kVar) y = top;
              }
              value = m.star_holds(rel.symbol, center, entries);
            }
          }
        }
        record.star_atoms[{rel.symbol, slots}] = value;
      }
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < slots_pool.size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  }
  return record;
}

// ---- shatter and ict patterns --------------------------------------------------

ShatterWitness shatter_witness(int k) {
  if (k < 1 || k > 5) {
    throw std::invalid_argument("shatter_witness: k out of range (1..5)");
  }
  ShatterWitness w;
  w.center = "c";
  std::vector<std::string> elements{w.center};
  // One free point with no pattern, then k pins and 2^k selectors: the
  // center sees 1 + k + 2^k distinct cones.
  elements.push_back("x");
  for (int i = 0; i < k; ++i) {
    w.pins.push_back("d" + std::to_string(i));
    elements.push_back(w.pins.back());
  }
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::string bits;
    for (int i = 0; i < k; ++i) bits += (mask >> i & 1) ? '1' : '0';
    w.selectors[mask] = "e" + bits;
    elements.push_back(w.selectors[mask]);
  }

  std::vector<Pair> pairs;
  for (const auto& e : elements) {
    if (e != w.center) pairs.emplace_back(w.center, e);
  }
  StarMap stars;
  for (const auto& [mask, name] : w.selectors) {
    for (int i = 0; i < k; ++i) {
      if (mask >> i & 1) {
        stars["R"].insert({w.center, name, w.pins[i]});
        stars["R"].insert({w.center, w.pins[i], name});
      }
    }
  }
  w.structure =
      DecoratedStructure::make(Signature::graph(), elements, pairs, stars);
  return w;
}

IctWitness ict_pattern(int n) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument("ict_pattern: n out of range (1..4)");
  }
  IctWitness w;
  w.center = "c";
  std::vector<std::string> elements{w.center};
  w.rows.resize(2);
  for (int alpha = 0; alpha < 2; ++alpha) {
    for (int i = 0; i < n; ++i) {
      w.rows[alpha].push_back("r" + std::to_string(alpha) + "_" +
                              std::to_string(i));
      elements.push_back(w.rows[alpha].back());
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      w.realizations[{i, j}] =
          "b" + std::to_string(i) + "_" + std::to_string(j);
      elements.push_back(w.realizations[{i, j}]);
    }
  }

  std::vector<Pair> pairs;
  for (const auto& e : elements) {
    if (e != w.center) pairs.emplace_back(w.center, e);
  }

  // Every point sits in its own cone; the E1-class i collects row-0 point i
  // with the realizations (i, *), the E2-class j collects row-1 point j with
  // the realizations (*, j).  Both lifts are reflexive on the whole fan.
  StarMap stars;
  auto relate = [&](const std::string& symbol, const std::string& u,
                    const std::string& v) {
    stars[symbol].insert({w.center, u, v});
    stars[symbol].insert({w.center, v, u});
  };
  for (const auto& e : elements) {
    if (e == w.center) continue;
    stars["E1"].insert({w.center, e, e});
    stars["E2"].insert({w.center, e, e});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      relate("E1", w.rows[0][i], w.realizations[{i, j}]);
      relate("E2", w.rows[1][j], w.realizations[{i, j}]);
      for (int j2 = j + 1; j2 < n; ++j2) {
        relate("E1", w.realizations[{i, j}], w.realizations[{i, j2}]);
      }
      for (int i2 = i + 1; i2 < n; ++i2) {
        relate("E2", w.realizations[{i, j}], w.realizations[{i2, j}]);
      }
    }
  }
  w.structure =
      DecoratedStructure::make(Signature::eq2(), elements, pairs, stars);
  return w;
}

// ---- type growth profiles -------------------------------------------------------

std::vector<ProfileRow> type_growth_profile(const BaseClass& base,
                                            GrowthFamily family, int m_max) {
  if (m_max < 1) {
    throw std::invalid_argument("type_growth_profile: m_max must be >= 1");
  }
  std::vector<ProfileRow> rows;
  BaseStructure model = base.one_element_models().front();

  for (int m = 1; m <= m_max; ++m) {
    std::vector<std::string> elements;
    std::vector<Pair> pairs;
    StarMap stars;
    if (family == GrowthFamily::kFan) {
      elements.push_back("r");
      for (int i = 0; i < m; ++i) {
        std::string x = "x" + std::to_string(i);
        elements.push_back(x);
        pairs.emplace_back("r", x);
        for (const auto& [symbol, tuples] : model.relations()) {
          for (const auto& tuple : tuples) {
            std::vector<std::string> t{"r"};
            t.insert(t.end(), tuple.size(), x);
            stars[symbol].insert(std::move(t));
          }
        }
      }
    } else {
      for (int i = 0; i < m; ++i) {
        elements.push_back("x" + std::to_string(i));
      }
      for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
          pairs.emplace_back(elements[i], elements[j]);
        }
        std::vector<std::string> uppers(elements.begin() + i + 1,
                                        elements.end());
        if (uppers.empty()) continue;
        // One cone above each chain point; its one-point cone model expands
        // to every entry combination from the upper set.
        for (const auto& [symbol, tuples] : model.relations()) {
          if (tuples.empty()) continue;
          int arity = *base.signature().arity(symbol);
          std::vector<std::size_t> pick(arity, 0);
          while (true) {
            std::vector<std::string> t{elements[i]};
            for (int s = 0; s < arity; ++s) t.push_back(uppers[pick[s]]);
            stars[symbol].insert(std::move(t));
            std::size_t w = 0;
            for (; w < pick.size(); ++w) {
              if (++pick[w] < uppers.size()) break;
              pick[w] = 0;
            }
            if (w == pick.size()) break;
          }
        }
      }
    }
    DecoratedStructure a = DecoratedStructure::make(base.signature(), elements,
                                                    pairs, stars);
    rows.push_back({m, a.size(), count_1types(base, a)});
  }
  return rows;
}

LogLogFit fit_log_log(const std::vector<ProfileRow>& rows) {
  if (rows.size() < 2) {
    throw std::invalid_argument("fit_log_log: need at least two rows");
  }
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    xs.push_back(std::log(static_cast<double>(r.size)));
    ys.push_back(std::log(static_cast<double>(r.count)));
  }
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xm += xs[i];
    ym += ys[i];
  }
  xm /= xs.size();
  ym /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  if (sxx == 0) {
    throw std::invalid_argument("fit_log_log: all sizes equal");
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double res = ys[i] - (ym + fit.slope * (xs[i] - xm));
    fit.max_residual = std::max(fit.max_residual, std::abs(res));
  }
  return fit;
}

// ---- burden witness -------------------------------------------------------------

namespace {

// WD closure: regenerate the stored lift at every center from its quotient.
StarMap cone_equivalence_closure(const DecoratedStructure& tree,
                                 const StarMap& stars) {
  StarMap out;
  for (const auto& [symbol, tuples] : stars) {
    std::map<std::string, std::set<std::vector<std::string>>> per_center;
    for (const auto& tuple : tuples) per_center[tuple[0]].insert(tuple);
    for (const auto& [center, stored] : per_center) {
      std::vector<std::string> over = tree.above(center);
      std::map<std::string, std::vector<std::string>> cone_of;
      std::map<std::string, std::string> rep;
      for (const auto& y : over) {
        bool placed = false;
        for (auto& [r, members] : cone_of) {
          if (tree.same_cone(center, r, y)) {
            members.push_back(y);
            rep[y] = r;
            placed = true;
            break;
          }
        }
        if (!placed) {
          cone_of[y] = {y};
          rep[y] = y;
        }
      }
      std::set<std::vector<std::string>> classes;
      for (const auto& tuple : stored) {
        std::vector<std::string> c(tuple.begin() + 1, tuple.end());
        for (auto& y : c) y = rep.at(y);
        classes.insert(std::move(c));
      }
      auto& sink = out[symbol];
      for (const auto& cls : classes) {
        std::vector<std::string> acc(cls.size() + 1);
        acc[0] = center;
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
          if (pos == cls.size()) {
            sink.insert(acc);
            return;
          }
          for (const auto& y : cone_of.at(cls[pos])) {
            acc[pos + 1] = y;
            rec(pos + 1);
          }
        };
        rec(0);
      }
    }
  }
  return out;
}

}  // namespace

InpWitnessReport inp_witness(const BaseClass& base, const InpInput& input) {
  const DecoratedStructure& m = input.skeleton;
  InpWitnessReport report;
  report.sequence = input.sequence;

  auto fail = [&](const std::string& msg) { report.failures.push_back(msg); };

  if (!(m.signature() == base.signature())) {
    fail("skeleton signature does not match the base class");
    return report;
  }
  if (!m.has(input.center)) {
    fail("center is not an element of the skeleton");
    return report;
  }
  if (input.sequence.empty()) {
    fail("sequence is empty");
    return report;
  }
  for (const auto& a : input.sequence) {
    if (!m.has(a)) {
      fail("sequence entry " + a + " is not an element of the skeleton");
      return report;
    }
  }
  if (!validate(m, base, ValidateMode::kCones).ok()) {
    fail("skeleton is not a valid decorated structure");
    return report;
  }

  std::vector<std::string> generators = input.sequence;
  generators.push_back(input.center);
  std::vector<std::string> generated = meet_closure_elements(m, generators);
  if (generated != m.elements()) {
    fail("skeleton has elements outside the tree generated by the input");
  }

  // A single entry certifies itself: N is just the pair structure <a_0, c>.
  if (input.sequence.size() == 1) {
    if (!report.failures.empty()) {
      report.n = m;
      return report;
    }
    std::vector<std::string> pair_core =
        meet_closure_elements(m, {input.sequence[0], input.center});
    report.a0 = m.induced(pair_core);
    report.n = report.a0;
    return report;
  }

  // Shape checks: the sequence must come from the catalogue and meet the
  // center in a single point.
  const auto& seq = input.sequence;
  std::string base_meet = *m.meet(seq[0], input.center);
  for (const auto& a : seq) {
    if (*m.meet(a, input.center) != base_meet) {
      fail("sequence entries meet the center in different points");
      break;
    }
  }
  {
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (!m.less(seq[i], seq[i + 1])) monotone = false;
    }
    bool fan = true;
    std::string apex = *m.meet(seq[0], seq[1]);
    for (std::size_t i = 0; i < seq.size() && fan; ++i) {
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        if (*m.meet(seq[i], seq[j]) != apex) fan = false;
      }
    }
    // Comb: a_i ^ a_j depends only on min(i, j) and those spine points climb.
    bool comb = true;
    std::vector<std::string> spine;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      spine.push_back(*m.meet(seq[i], seq[i + 1]));
    }
    for (std::size_t i = 0; i + 1 < spine.size() && comb; ++i) {
      if (!m.less(spine[i], spine[i + 1])) comb = false;
    }
    for (std::size_t i = 0; i < seq.size() && comb; ++i) {
      for (std::size_t j = i + 1; j < seq.size(); ++j) {
        if (*m.meet(seq[i], seq[j]) != spine[i]) {
          comb = false;
          break;
        }
      }
    }
    if (!monotone && !fan && !comb) {
      fail("sequence shape is not monotone, fan, or comb");
    }
  }

  // Tree maps sigma_i: <a_0, c> -> <a_i, c> fixing the center.
  std::vector<std::string> pair_core =
      meet_closure_elements(m, {seq[0], input.center});
  report.a0 = m.induced(pair_core);

  std::vector<std::map<std::string, std::string>> sigma;
  for (const auto& a : seq) {
    std::map<std::string, std::string> map;
    map[input.center] = input.center;
    map[seq[0]] = a;
    map[*m.meet(seq[0], input.center)] = *m.meet(a, input.center);
    std::vector<std::string> target =
        meet_closure_elements(m, {a, input.center});
    std::vector<std::string> image;
    for (const auto& [u, v] : map) {
      (void)u;
      image.push_back(v);
    }
    std::sort(image.begin(), image.end());
    bool iso = map.size() == pair_core.size() && image == target;
    for (const auto& u : pair_core) {
      for (const auto& v : pair_core) {
        if (!iso) break;
        if (m.leq(u, v) != m.leq(map.at(u), map.at(v))) iso = false;
      }
    }
    if (!iso) {
      fail("no tree isomorphism onto the pair structure at " + a);
    }
    sigma.push_back(std::move(map));
  }
  if (!report.failures.empty()) {
    report.n = m;
    return report;
  }

  // The witness: copies of the pair data along the sequence, plus the
  // sequence's own data, closed under cone equivalence on the same tree.
  std::set<std::string> core_set(pair_core.begin(), pair_core.end());
  std::vector<std::string> seq_tree = meet_closure_elements(m, seq);
  std::set<std::string> seq_set(seq_tree.begin(), seq_tree.end());

  StarMap collected;
  std::vector<StarMap> copy_atoms(seq.size());
  for (const auto& [symbol, tuples] : m.stars()) {
    for (const auto& tuple : tuples) {
      bool in_core = true;
      bool in_seq = true;
      for (const auto& e : tuple) {
        if (!core_set.count(e)) in_core = false;
        if (!seq_set.count(e)) in_seq = false;
      }
      if (in_core) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
          std::vector<std::string> t = tuple;
          for (auto& e : t) e = sigma[i].at(e);
          copy_atoms[i][symbol].insert(t);
          collected[symbol].insert(std::move(t));
        }
      }
      if (in_seq) {
        collected[symbol].insert(tuple);
      }
    }
  }

  StarMap closed = cone_equivalence_closure(m, collected);
  report.n = DecoratedStructure::make(m.signature(), m.elements(),
                                      m.strict_pairs(), closed);

  // Certification.
  ValidationReport vr = validate(report.n, base, ValidateMode::kCones);
  for (const auto& v : vr.violations) {
    fail("witness invalid: " + to_string(v));
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (const auto& [symbol, tuples] : copy_atoms[i]) {
      for (const auto& tuple : tuples) {
        std::vector<std::string> entries(tuple.begin() + 1, tuple.end());
        if (!report.n.star_holds(symbol, tuple[0], entries)) {
          fail("copy " + std::to_string(i) + " lost atom " + symbol);
        }
      }
    }
  }
  for (const auto& [symbol, tuples] : m.stars()) {
    for (const auto& tuple : tuples) {
      bool in_seq = true;
      for (const auto& e : tuple) {
        if (!seq_set.count(e)) in_seq = false;
      }
      if (!in_seq) continue;
      std::vector<std::string> entries(tuple.begin() + 1, tuple.end());
      if (!report.n.star_holds(symbol, tuple[0], entries)) {
        fail("sequence data lost atom " + symbol);
      }
    }
  }
  // Reverse direction: on the subtrees it restricts to, the witness may not
  // exceed the given data -- an extra tuple means the copies conflict with
  // the sequence relations (or with each other) and the input was bad.
  auto tuple_text = [](const std::string& symbol,
                       const std::vector<std::string>& tuple) {
    std::string s = symbol + "*(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (i) s += ",";
      s += tuple[i];
    }
    return s + ")";
  };
  std::vector<std::set<std::string>> pair_images;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    std::set<std::string> img;
    for (const auto& e : pair_core) img.insert(sigma[i].at(e));
    pair_images.push_back(std::move(img));
  }
  for (const auto& [symbol, tuples] : report.n.stars()) {
    for (const auto& tuple : tuples) {
      std::vector<std::string> entries(tuple.begin() + 1, tuple.end());
      bool in_seq = true;
      for (const auto& e : tuple) {
        if (!seq_set.count(e)) in_seq = false;
      }
      if (in_seq && !m.star_holds(symbol, tuple[0], entries)) {
        fail("copies conflict with the sequence data on " +
             tuple_text(symbol, tuple));
      }
      for (std::size_t i = 0; i < seq.size(); ++i) {
        bool in_img = true;
        for (const auto& e : tuple) {
          if (!pair_images[i].count(e)) in_img = false;
        }
        if (in_img && !(copy_atoms[i].count(symbol) &&
                        copy_atoms[i].at(symbol).count(tuple))) {
          fail("pair " + std::to_string(i) + " gained atom " +
               tuple_text(symbol, tuple));
        }
      }
    }
  }
  std::string key0 =
      diagram_key(report.n, {seq[0], input.center}, {}, DiagramMode::kFull);
  for (std::size_t i = 1; i < seq.size(); ++i) {
    std::string key =
        diagram_key(report.n, {seq[i], input.center}, {}, DiagramMode::kFull);
    if (key != key0) {
      fail("pair type of (" + seq[i] + ", " + input.center +
           ") differs from the first pair");
    }
  }
  return report;
}

// ---- indiscernibility -------------------------------------------------------------

std::string diagram_key(const DecoratedStructure& m,
                        const std::vector<std::string>& tuple,
                        const std::vector<std::string>& a, DiagramMode mode) {
  std::vector<std::string> generators = a;
  generators.insert(generators.end(), tuple.begin(), tuple.end());
  if (generators.empty()) return "empty";
  std::vector<std::string> closure = meet_closure_elements(m, generators);

  // Generator labels: A-elements stay literal, tuple entries become
  // positions.  Every closure element is the meet of the generators above
  // it, so that set is a canonical, type-determined name.
  std::map<std::string, std::vector<std::string>> labels_of;
  std::set<std::string> a_set(a.begin(), a.end());
  for (const auto& g : a) labels_of[g].push_back(g);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    labels_of[tuple[i]].push_back("#" + std::to_string(i));
  }
  std::map<std::string, std::string> name;
  for (const auto& e : closure) {
    if (a_set.count(e)) {
      name[e] = e;
      continue;
    }
    std::set<std::string> ups;
    for (const auto& [g, labels] : labels_of) {
      if (m.leq(e, g)) ups.insert(labels.begin(), labels.end());
    }
    std::string n = "{";
    for (const auto& u : ups) {
      if (n.size() > 1) n += ",";
      n += u;
    }
    name[e] = n + "}";
  }

  std::set<std::string> atoms;
  for (const auto& x : closure) {
    for (const auto& y : closure) {
      if (x != y && m.less(x, y)) {
        atoms.insert("< " + name[x] + " " + name[y]);
      }
      if (x == y) atoms.insert("el " + name[x]);
    }
  }
  if (mode == DiagramMode::kFull) {
    for (const auto& rel : m.signature().relations()) {
      std::vector<std::size_t> pick(rel.arity + 1, 0);
      while (true) {
        std::vector<std::string> slots(rel.arity + 1);
        for (std::size_t i = 0; i < slots.size(); ++i) {
          slots[i] = closure[pick[i]];
        }
        std::vector<std::string> entries(slots.begin() + 1, slots.end());
        if (m.star_holds(rel.symbol, slots[0], entries)) {
          std::string atom = "* " + rel.symbol;
          for (const auto& s : slots) atom += " " + name[s];
          atoms.insert(std::move(atom));
        }
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
          if (++pick[i] < closure.size()) break;
          pick[i] = 0;
        }
        if (i == pick.size()) break;
      }
    }
  }

  std::ostringstream os;
  for (const auto& atom : atoms) os << atom << ";";
  return os.str();
}

IndiscernibleResult check_indiscernible(const DecoratedStructure& m,
                                        const std::vector<std::string>& sequence,
                                        const std::vector<std::string>& a,
                                        int tuple_len, DiagramMode mode) {
  IndiscernibleResult result;
  int n = static_cast<int>(sequence.size());
  for (int len = 1; len <= tuple_len && len <= n; ++len) {
    std::optional<std::vector<int>> first;
    std::string first_key;
    std::vector<int> idx(len);
    for (int i = 0; i < len; ++i) idx[i] = i;
    while (true) {
      std::vector<std::string> tuple;
      for (int i : idx) tuple.push_back(sequence[i]);
      std::string key = diagram_key(m, tuple, a, mode);
      if (!first) {
        first = idx;
        first_key = key;
      } else if (key != first_key) {
        result.ok = false;
        result.violation = {*first, idx};
        return result;
      }
      int i = len - 1;
      while (i >= 0 && idx[i] == n - len + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < len; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return result;
}

// ---- the collapsed binary relation -------------------------------------------------

std::set<std::pair<std::string, std::string>> r_prime(
    const DecoratedStructure& m) {
  if (m.signature().arity("R") != 2) {
    throw std::invalid_argument("r_prime: signature has no binary R");
  }
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& y : m.elements()) {
    for (const auto& z : m.elements()) {
      if (y == z) continue;
      std::optional<std::string> w = m.meet(y, z);
      if (!w || *w == y || *w == z) continue;
      if (m.star_holds("R", *w, {y, z})) out.insert({y, z});
    }
  }
  return out;
}

DecoratedStructure reconstruct_from_r_prime(
    const DecoratedStructure& tree,
    const std::set<std::pair<std::string, std::string>>& pairs) {
  if (tree.signature().arity("R") != 2) {
    throw std::invalid_argument(
        "reconstruct_from_r_prime: signature has no binary R");
  }
  StarMap stars;
  for (const auto& [y, z] : pairs) {
    std::optional<std::string> w = tree.meet(y, z);
    if (!w || *w == y || *w == z) {
      throw std::invalid_argument(
          "reconstruct_from_r_prime: pair " + y + "," + z +
          " has no interior meet");
    }
    stars["R"].insert({*w, y, z});
  }
  return DecoratedStructure::make(tree.signature(), tree.elements(),
                                  tree.strict_pairs(), stars);
}

}  // namespace conetree
