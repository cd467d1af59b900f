// Standalone acceptance gate: ten behavioral criteria, one pass/fail line
// each, with runtime budgets and tolerances pinned below.  Exit code is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conetree/amalgam.hpp"
#include "conetree/base_class.hpp"
#include "conetree/base_structure.hpp"
#include "conetree/cli.hpp"
#include "conetree/codec.hpp"
#include "conetree/formula.hpp"
#include "conetree/generic.hpp"
#include "conetree/structure.hpp"
#include "conetree/types.hpp"
#include "conetree/validate.hpp"
#include "conetree/witness.hpp"

#include "generators.hpp"
#include "oracle.hpp"

using namespace conetree;
using conetree::testing::oracle_all_structures;
using conetree::testing::oracle_extension_keys;
using conetree::testing::oracle_key_of_realization;
using conetree::testing::random_amalgam_triple;
using conetree::testing::random_base_formula;
using conetree::testing::random_structure;

namespace {

constexpr double kMaxSlope = 4.0;       // log-log growth bound, criterion 4
constexpr double kMaxResidual = 0.5;    // log-log fit residual, criterion 4

int failures = 0;

// Runs one criterion, enforces its wall-clock budget, prints a single line.
void criterion(int index, const std::string& label, double seconds,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (seconds > 0 && elapsed >= seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over budget");
  }
  std::ostringstream line;
  line << "criterion " << index << " " << label << ": "
       << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) line << " (" << detail << ")";
  line.setf(std::ios::fixed);
  line.precision(2);
  line << " [" << elapsed << "s";
  if (seconds > 0) line << " < " << static_cast<int>(seconds) << "s";
  line << "]";
  std::cout << line.str() << "\n";
  if (!ok) ++failures;
}

std::string data_file(const std::string& name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

// Every order atom and star atom of `small` holds in `big`.
bool contains_atoms(const DecoratedStructure& big,
                    const DecoratedStructure& small, std::string& why) {
  for (const auto& [lo, hi] : small.strict_pairs()) {
    if (!big.less(lo, hi)) {
      why = "missing order atom " + lo + " < " + hi;
      return false;
    }
  }
  for (const auto& [symbol, tuples] : small.stars()) {
    for (const auto& tuple : tuples) {
      std::vector<std::string> entries(tuple.begin() + 1, tuple.end());
      if (!big.star_holds(symbol, tuple[0], entries)) {
        why = "missing star atom " + symbol;
        return false;
      }
    }
  }
  return true;
}

// Valid burden inputs over the graph signature: fans and monotone chains
// with decoration applied uniformly along the sequence, so the sequence is
// tree-indiscernible over the center by construction.
InpInput random_inp_input(std::mt19937_64& rng) {
  int n = 1 + static_cast<int>(rng() % 4);
  bool fan = n < 2 || rng() % 2 == 0;
  bool pair_edge = rng() % 2 == 0;
  bool seq_edges = fan && n >= 2 && rng() % 2 == 0;

  std::vector<std::string> seq;
  for (int i = 0; i < n; ++i) seq.push_back("a" + std::to_string(i));

  std::vector<std::string> elems = {"w", "c"};
  elems.insert(elems.end(), seq.begin(), seq.end());
  std::vector<std::pair<std::string, std::string>> pairs;
  pairs.emplace_back("w", "c");
  for (const auto& a : seq) pairs.emplace_back("w", a);
  if (!fan) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(seq[i], seq[j]);
    }
  }
  DecoratedStructure::StarMap stars;
  if (pair_edge) {
    for (const auto& a : seq) {
      stars["R"].insert({"w", a, "c"});
      stars["R"].insert({"w", "c", a});
    }
  }
  if (seq_edges) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) stars["R"].insert({"w", seq[i], seq[j]});
      }
    }
  }
  InpInput input;
  input.skeleton = DecoratedStructure::make(
      base_by_name("graph").signature(), elems, pairs, stars);
  input.center = "c";
  input.sequence = seq;
  return input;
}

bool closure_bound(std::string& detail) {
  std::mt19937_64 rng(101);
  const BaseClass& base = base_by_name("equality");
  for (int trial = 0; trial < 1000; ++trial) {
    DecoratedStructure tree =
        random_structure(rng, base, 1 + rng() % 12);
    std::set<std::string> picked;
    std::size_t want = std::min<std::size_t>(1 + rng() % 6, tree.size());
    while (picked.size() < want) {
      picked.insert(tree.elements()[rng() % tree.size()]);
    }
    std::vector<std::string> gens(picked.begin(), picked.end());
    std::vector<std::string> closed = meet_closure_elements(tree, gens);
    if (closed.size() > 2 * gens.size()) {
      detail = "closure exceeded 2n at trial " + std::to_string(trial);
      return false;
    }
    std::vector<std::string> plus = closed;
    plus.push_back(tree.elements()[rng() % tree.size()]);
    if (meet_closure_elements(tree, plus).size() > closed.size() + 2) {
      detail = "single point added more than 2 at trial " +
               std::to_string(trial);
      return false;
    }
  }
  detail = "1000 trees, |closure| <= 2n, single point adds <= 2";
  return true;
}

bool amalgamation_soundness(std::string& detail) {
  for (const auto* name : {"graph", "eq2", "equality"}) {
    const BaseClass& base = base_by_name(name);
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 500; ++trial) {
      auto t = random_amalgam_triple(rng, base, 5);
      DecoratedStructure d = amalgamate(base, t.a, t.b, t.c);
      if (!validate(d, base, ValidateMode::kCones).ok()) {
        detail = std::string(name) + " output invalid at trial " +
                 std::to_string(trial);
        return false;
      }
      // Strong: the factors meet exactly in the base.
      std::vector<std::string> shared;
      std::set_intersection(t.b.elements().begin(), t.b.elements().end(),
                            t.c.elements().begin(), t.c.elements().end(),
                            std::back_inserter(shared));
      if (shared != t.a.elements()) {
        detail = std::string(name) + " amalgam not strong at trial " +
                 std::to_string(trial);
        return false;
      }
      // Atom-for-atom restriction to both factors.
      if (!(d.induced(t.b.elements()) == t.b) ||
          !(d.induced(t.c.elements()) == t.c)) {
        detail = std::string(name) + " restriction differs at trial " +
                 std::to_string(trial);
        return false;
      }
    }
  }
  detail = "500 triples per base: valid, strong, restriction-exact";
  return true;
}

bool oracle_equivalence(std::string& detail) {
  const std::map<std::string, std::size_t> singleton_counts = {
      {"equality", 4}, {"graph", 5}, {"eq2", 7}};
  std::size_t structures = 0;
  for (const auto& [name, singleton] : singleton_counts) {
    const BaseClass& base = base_by_name(name);
    if (oracle_extension_keys(base, oracle_all_structures(base, 1)[0])
            .size() != singleton) {
      detail = name + " singleton count is not " + std::to_string(singleton);
      return false;
    }
    for (int n = 1; n <= 3; ++n) {
      for (const auto& a : oracle_all_structures(base, n)) {
        ++structures;
        std::set<std::string> expected = oracle_extension_keys(base, a);
        std::vector<TypeDescriptor> types = enumerate_1types(base, a);
        std::set<std::string> got;
        for (const auto& t : types) {
          Realization r = realize_type(base, a, a.elements(), t);
          got.insert(
              oracle_key_of_realization(r.structure, a.elements(), r.element));
        }
        if (types.size() != expected.size() || got != expected) {
          detail = name + " mismatch on a size-" + std::to_string(n) +
                   " structure";
          return false;
        }
      }
    }
  }
  detail = std::to_string(structures) +
           " structures exhaustively matched; singletons 4/5/7";
  return true;
}

bool growth_dichotomy(std::string& detail) {
  std::vector<ProfileRow> graph_rows =
      type_growth_profile(base_by_name("graph"), GrowthFamily::kFan, 6);
  for (const auto& r : graph_rows) {
    if (r.count < (1u << r.m)) {
      detail = "graph fan count below 2^m at m=" + std::to_string(r.m);
      return false;
    }
  }
  for (const auto* name : {"equality", "eq2"}) {
    std::vector<ProfileRow> rows =
        type_growth_profile(base_by_name(name), GrowthFamily::kFan, 8);
    LogLogFit fit = fit_log_log(rows);
    if (fit.slope > kMaxSlope || fit.max_residual >= kMaxResidual) {
      std::ostringstream s;
      s << name << " fan fit slope " << fit.slope << " residual "
        << fit.max_residual;
      detail = s.str();
      return false;
    }
  }
  detail = "graph >= 2^m for m <= 6; equality/eq2 polynomial to m = 8";
  return true;
}

bool interpretation_soundness(std::string& detail) {
  std::mt19937_64 rng(505);
  std::vector<std::string> vars = {"v0", "v1", "v2"};
  const char* names[3] = {"graph", "eq2", "equality"};
  int done = 0;
  for (int i = 0; done < 1000; i = (i + 1) % 3) {
    const BaseClass& base = base_by_name(names[i]);
    DecoratedStructure s = random_structure(rng, base, 2 + rng() % 8);
    std::string c = s.elements()[rng() % s.size()];
    std::vector<std::string> above = s.above(c);
    if (above.empty()) continue;
    ConeQuotient q = cone_partition(s, c);
    Assignment up, reps;
    for (const auto& v : vars) {
      const std::string& pick = above[rng() % above.size()];
      up[v] = pick;
      reps[v] = q.representative_of(pick);
    }
    BaseFormula psi = random_base_formula(rng, base.signature(), vars, 3);
    QfFormula starred = star_translate(psi, Term::element(c));
    if (eval_base(q.quotient, psi, reps) != eval_qf(s, starred, up)) {
      detail = std::string(names[i]) + " quotient/star mismatch at case " +
               std::to_string(done);
      return false;
    }
    ++done;
  }
  detail = "1000 quotient evaluations equal star evaluations";
  return true;
}

bool generic_approximation(std::string& detail) {
  const BaseClass& equality = base_by_name("equality");
  BuildResult one = build_generic(equality, 300, 1, 1, 7);
  std::vector<std::string> seed = {"p0"};
  std::set<TypeDescriptor> seen;
  for (const auto& e : one.structure.elements()) {
    seen.insert(compute_descriptor(one.structure, seed, e));
  }
  std::vector<TypeDescriptor> types =
      enumerate_1types(equality, one.structure.induced(seed));
  if (one.structure.size() != 4 || types.size() != 4 ||
      seen != std::set<TypeDescriptor>(types.begin(), types.end())) {
    detail = "equality round is not exactly the 4 one-type realizations";
    return false;
  }

  const BaseClass& graph = base_by_name("graph");
  BuildResult r = build_generic(graph, 300, 2, 2, 1);
  if (r.structure.size() > 300) {
    detail = "graph build exceeded its element budget";
    return false;
  }
  CoverageReport cov = check_extension_property_on(
      graph, r.structure, r.processed_substructures());
  if (cov.fraction() != 1.0) {
    std::ostringstream s;
    s << "graph coverage " << cov.realized_count() << "/" << cov.pairs.size();
    detail = s.str();
    return false;
  }
  detail = "equality: 4 realizations; graph: " +
           std::to_string(cov.pairs.size()) + " sampled pairs all realized";
  return true;
}

bool witness_certificates(std::string& detail) {
  const BaseClass& graph = base_by_name("graph");
  int atoms = 0;
  for (int k = 1; k <= 3; ++k) {
    ShatterWitness w = shatter_witness(k);
    if (!validate(w.structure, graph, ValidateMode::kCones).ok()) {
      detail = "shatter witness invalid at k=" + std::to_string(k);
      return false;
    }
    if (w.selectors.size() != (1u << k)) {
      detail = "shatter witness misses patterns at k=" + std::to_string(k);
      return false;
    }
    for (const auto& [mask, selector] : w.selectors) {
      for (int i = 0; i < k; ++i) {
        QfFormula atom = QfFormula::star(
            "R", {Term::element(w.center), Term::element(selector),
                  Term::element(w.pins[i])});
        if (eval_qf(w.structure, atom, {}) != (((mask >> i) & 1u) != 0)) {
          detail = "shatter pattern wrong at k=" + std::to_string(k);
          return false;
        }
        ++atoms;
      }
    }
  }
  const BaseClass& eq2 = base_by_name("eq2");
  const char* symbols[2] = {"E1", "E2"};
  for (int n = 1; n <= 3; ++n) {
    IctWitness w = ict_pattern(n);
    if (!validate(w.structure, eq2, ValidateMode::kCones).ok()) {
      detail = "ict pattern invalid at n=" + std::to_string(n);
      return false;
    }
    if (w.realizations.size() != static_cast<std::size_t>(n) * n) {
      detail = "ict pattern misses realizations at n=" + std::to_string(n);
      return false;
    }
    for (const auto& [eta, b] : w.realizations) {
      int pick[2] = {eta.first, eta.second};
      for (int alpha = 0; alpha < 2; ++alpha) {
        for (std::size_t i = 0; i < w.rows[alpha].size(); ++i) {
          QfFormula atom = QfFormula::star(
              symbols[alpha],
              {Term::element(w.center), Term::element(b),
               Term::element(w.rows[alpha][i])});
          bool expected = static_cast<std::size_t>(pick[alpha]) == i;
          if (eval_qf(w.structure, atom, {}) != expected) {
            detail = "ict atom wrong at n=" + std::to_string(n);
            return false;
          }
          ++atoms;
        }
      }
    }
  }
  detail = std::to_string(atoms) + " certified atoms re-verified";
  return true;
}

bool inp_construction(std::string& detail) {
  const BaseClass& graph = base_by_name("graph");
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    InpInput input = random_inp_input(rng);
    InpWitnessReport rep = inp_witness(graph, input);
    std::string tag = " at trial " + std::to_string(trial);
    if (!rep.certified()) {
      detail = "input not certified" + tag;
      return false;
    }
    if (!validate(rep.n, graph, ValidateMode::kCones).ok()) {
      detail = "witness invalid" + tag;
      return false;
    }
    // N contains the pair structure and the sequence tree atom-for-atom.
    std::string why;
    if (!(rep.n.induced(rep.a0.elements()) == rep.a0)) {
      detail = "pair structure distorted" + tag;
      return false;
    }
    std::vector<std::string> seq_tree =
        meet_closure_elements(input.skeleton, input.sequence);
    if (!contains_atoms(rep.n, input.skeleton.induced(seq_tree), why)) {
      detail = why + tag;
      return false;
    }
    // Every pair (a_i, c) has the same qf-type to term depth 2.
    std::set<std::string> keys;
    for (const auto& a : input.sequence) {
      keys.insert(diagram_key(rep.n, {a, input.center}, {},
                              DiagramMode::kFull));
    }
    if (keys.size() != 1) {
      detail = "pair types differ" + tag;
      return false;
    }
  }
  detail = "100 inputs certified; containment and pair types re-checked";
  return true;
}

bool branch_determinacy(std::string& detail) {
  std::mt19937_64 rng(909);
  const char* names[3] = {"graph", "eq2", "equality"};
  for (int trial = 0; trial < 50; ++trial) {
    const BaseClass& base = base_by_name(names[trial % 3]);
    DecoratedStructure m = random_structure(rng, base, 3 + rng() % 8);
    std::vector<std::string> tops;
    for (const auto& e : m.elements()) {
      if (m.above(e).empty()) tops.push_back(e);
    }
    std::string top = tops[rng() % tops.size()];
    std::vector<std::string> chain = m.below(top);
    chain.push_back(top);
    std::sort(chain.begin(), chain.end(),
              [&](const std::string& x, const std::string& y) {
                return m.less(x, y);
              });
    BranchTypeRecord rec = branch_type(m, chain);

    std::vector<TypeDescriptor> matching;
    for (const auto& t : enumerate_1types(base, m)) {
      if (t.kind == TypeDescriptor::Kind::kInA && t.ref == top) {
        matching.push_back(t);
      }
    }
    std::string tag = " at trial " + std::to_string(trial);
    if (matching.size() != 1) {
      detail = "branch type is not determined" + tag;
      return false;
    }
    Realization r1 = realize_type(base, m, m.elements(), matching[0]);
    Realization r2 =
        realize_type(base, r1.structure, m.elements(), matching[0]);
    std::string k1 =
        diagram_key(r1.structure, {r1.element}, m.elements(),
                    DiagramMode::kFull);
    std::string k2 =
        diagram_key(r2.structure, {r2.element}, m.elements(),
                    DiagramMode::kFull);
    if (k1 != k2) {
      detail = "realizations disagree over M" + tag;
      return false;
    }
    // Both follow the branch record's meet pattern.
    for (const auto& [e, w] : rec.meet_with) {
      if (*r1.structure.meet(r1.element, e) != w ||
          *r2.structure.meet(r2.element, e) != w) {
        detail = "realization breaks the branch meets" + tag;
        return false;
      }
    }
  }
  detail = "50 chains: independent realizations have equal diagrams";
  return true;
}

bool cli_determinism(std::string& detail) {
  std::vector<std::vector<std::string>> commands = {
      {"validate", "--base", "eq2", "--mode", "cones",
       data_file("model_eq2.ct")},
      {"validate", "--mode", "tree", data_file("invalid_cycle.ct")},
      {"types", "--base", "equality", data_file("point.ct")},
      {"generate", "--base", "graph", "--budget", "60", "--closure", "2",
       "--rounds", "2", "--seed", "17"},
      {"generate", "--base", "eq2", "--budget", "40", "--seed", "5"},
      {"amalgamate", "--base", "equality", data_file("amalgam_a.ct"),
       data_file("amalgam_b.ct"), data_file("amalgam_c.ct")},
      {"jep", "--base", "graph", data_file("vee_graph.ct"),
       data_file("chain_graph.ct")},
      {"check-ep", "--base", "equality", data_file("point.ct"), "--s", "1"},
      {"baf", "--base", "graph", data_file("vee_graph.ct"),
       data_file("vee_graph.ct"), "--steps", "2", "--seed", "5", "--map",
       "r=r"},
      {"branch-type", data_file("vee_graph.ct"), "--branch", "r,a"},
      {"witness", "ip", "--k", "3"},
      {"witness", "ict", "--n", "3"},
      {"witness", "inp", "--spec", data_file("fan3_graph.ct")},
      {"profile", "--base", "eq2", "--family", "fan", "--max", "6",
       "--format", "jsonl"},
      {"cones", data_file("fan3_graph.ct"), "--center", "w", "--format",
       "jsonl"},
      {"eval", data_file("vee_graph.ct"), "--formula", "R*(r, a, b)"},
  };
  for (const auto& argv : commands) {
    CommandResult first = run_command(argv);
    CommandResult second = run_command(argv);
    if (first.exit_code != second.exit_code || first.out != second.out ||
        first.err != second.err) {
      detail = "bytes differ for subcommand " + argv[0];
      return false;
    }
  }
  detail = std::to_string(commands.size()) + " invocations byte-identical";
  return true;
}

}  // namespace

int main() {
  criterion(1, "meet-closure bound", 5, closure_bound);
  criterion(2, "amalgamation soundness", 30, amalgamation_soundness);
  criterion(3, "type enumeration vs oracle", 60, oracle_equivalence);
  criterion(4, "type growth dichotomy", 120, growth_dichotomy);
  criterion(5, "quotient interpretation", 10, interpretation_soundness);
  criterion(6, "generic approximation", 60, generic_approximation);
  criterion(7, "combinatorial witnesses", 10, witness_certificates);
  criterion(8, "sequence-copy witness", 30, inp_construction);
  criterion(9, "branch-type determinacy", 10, branch_determinacy);
  criterion(10, "cli determinism", 0, cli_determinism);
  if (failures == 0) {
    std::cout << "all criteria passed\n";
  } else {
    std::cout << failures << " criteria failed\n";
  }
  return failures;
}
