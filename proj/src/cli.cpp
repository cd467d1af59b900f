#include "conetree/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conetree/amalgam.hpp"
#include "conetree/base_class.hpp"
#include "conetree/codec.hpp"
#include "conetree/formula.hpp"
#include "conetree/generic.hpp"
#include "conetree/structure.hpp"
#include "conetree/types.hpp"
#include "conetree/validate.hpp"
#include "conetree/witness.hpp"

namespace conetree {

namespace {

using nlohmann::json;

// Randomized subcommands refuse to run without an explicit seed: a silent
// default would make "same command, same bytes" meaningless.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("CONETREE_SEED");
  if (env && *env) return std::stoull(env);
  throw CLI::ValidationError("seed",
                             "pass --seed or set CONETREE_SEED");
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

void emit_structure(const DecoratedStructure& s, const std::string& out_path,
                    std::ostream& out) {
  if (out_path.empty()) {
    out << serialize_structure(s);
  } else {
    write_structure_file(out_path, s);
  }
}

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += sep;
    s += items[i];
  }
  return s;
}

// Default inp sequence: elements a0, a1, ... in index order.
std::vector<std::string> numbered_sequence(const DecoratedStructure& m) {
  std::vector<std::pair<long, std::string>> found;
  for (const auto& e : m.elements()) {
    if (e.size() < 2 || e[0] != 'a') continue;
    bool digits = true;
    for (std::size_t i = 1; i < e.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(e[i]))) digits = false;
    }
    if (digits) found.emplace_back(std::stol(e.substr(1)), e);
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto& [k, e] : found) out.push_back(e);
  return out;
}

struct Flags {
  std::string base;
  std::string mode = "cones";
  std::vector<std::string> files;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::uint64_t budget = 0;
  int closure = 1;
  int rounds = 1;
  bool count_only = false;
  int type_index = -1;
  int s = 1;
  std::uint64_t sample = 0;
  int steps = 0;
  std::vector<std::string> map_pairs;
  std::string branch;
  int k = 1;
  int n = 2;
  std::string center = "c";
  std::string seq;
  std::string family = "fan";
  int max_m = 4;
  std::string format = "csv";
  std::string cones_format = "text";
  std::string formula;
  std::vector<std::string> lets;
};

int run_validate(const Flags& f, std::ostream& out, std::ostream& err) {
  DecoratedStructure m = read_structure_file(f.files.at(0));
  ValidateMode mode;
  if (f.mode == "tree") {
    mode = ValidateMode::kTreeOnly;
  } else if (f.mode == "universal") {
    mode = ValidateMode::kUniversal;
  } else if (f.mode == "cones") {
    mode = ValidateMode::kCones;
  } else {
    throw CLI::ValidationError("mode", "one of tree, universal, cones");
  }
  ValidationReport report =
      f.base.empty() ? validate(m, mode)
                     : validate(m, base_by_name(f.base), mode);
  if (report.ok()) {
    out << "valid\n";
    return 0;
  }
  for (const auto& v : report.violations) err << to_string(v) << "\n";
  return 1;
}

int run_amalgamate(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure a = read_structure_file(f.files.at(0));
  DecoratedStructure b = read_structure_file(f.files.at(1));
  DecoratedStructure c = read_structure_file(f.files.at(2));
  emit_structure(amalgamate(base, a, b, c), f.out_path, out);
  return 0;
}

int run_jep(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure b = read_structure_file(f.files.at(0));
  DecoratedStructure c = read_structure_file(f.files.at(1));
  emit_structure(jep(base, b, c), f.out_path, out);
  return 0;
}

int run_generate(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  BuildResult r = build_generic(base, f.budget, f.closure, f.rounds,
                                resolve_seed(f.seed));
  if (f.out_path.empty()) {
    out << serialize_structure(r.structure);
  } else {
    write_structure_file(f.out_path, r.structure);
    out << "elements " << r.structure.size() << "\n";
    out << "realizations " << r.realizations << "\n";
  }
  return 0;
}

int run_types(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure a = read_structure_file(f.files.at(0));
  std::vector<TypeDescriptor> types = enumerate_1types(base, a);
  if (f.count_only) {
    out << types.size() << "\n";
  } else {
    for (const auto& t : types) out << t.to_string() << "\n";
  }
  return 0;
}

int run_realize(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure m = read_structure_file(f.files.at(0));
  std::vector<TypeDescriptor> types = enumerate_1types(base, m);
  if (f.type_index < 0 ||
      static_cast<std::size_t>(f.type_index) >= types.size()) {
    throw CLI::ValidationError(
        "type", "index must name one of the " +
                    std::to_string(types.size()) + " enumerated types");
  }
  Realization r =
      realize_type(base, m, m.elements(), types[f.type_index]);
  if (!f.out_path.empty()) {
    write_structure_file(f.out_path, r.structure);
    out << "element " << r.element << "\n";
    if (r.meet_point) out << "meet " << *r.meet_point << "\n";
  } else {
    out << serialize_structure(r.structure);
  }
  return 0;
}

int run_check_ep(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure m = read_structure_file(f.files.at(0));
  CoverageReport report = check_extension_property(base, m, f.s, f.sample);
  out << "realized " << report.realized_count() << "/"
      << report.pairs.size() << "\n";
  out << "fraction " << std::fixed << std::setprecision(6)
      << report.fraction() << "\n";
  for (const auto& p : report.pairs) {
    if (!p.realized) {
      out << "missing " << join(p.substructure, ",") << " :: "
          << p.type.to_string() << "\n";
    }
  }
  return report.realized_count() == report.pairs.size() ? 0 : 1;
}

int run_baf(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  DecoratedStructure m = read_structure_file(f.files.at(0));
  DecoratedStructure n = read_structure_file(f.files.at(1));
  std::map<std::string, std::string> start;
  for (const auto& pair : f.map_pairs) {
    auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("map", "want x=y");
    }
    start[pair.substr(0, eq)] = pair.substr(eq + 1);
  }
  BafResult r =
      back_and_forth(base, m, n, start, f.steps, resolve_seed(f.seed));
  out << "steps " << r.steps_completed << "\n";
  out << "exhausted " << (r.exhausted ? "true" : "false") << "\n";
  for (const auto& [x, y] : r.map) out << "map " << x << " " << y << "\n";
  if (!r.ok()) {
    out << "failed " << *r.failed_element << ": " << r.detail << "\n";
    return 1;
  }
  return 0;
}

int run_branch_type(const Flags& f, std::ostream& out) {
  DecoratedStructure m = read_structure_file(f.files.at(0));
  BranchTypeRecord record = branch_type(m, split_commas(f.branch));
  out << "branch " << join(record.chain, ",") << "\n";
  for (const auto& [e, p] : record.meet_with) {
    out << "meet " << e << " " << p << "\n";
  }
  for (const auto& [atom, value] : record.star_atoms) {
    out << "atom " << atom.symbol << "*(" << join(atom.slots, ",") << ") "
        << (value ? "true" : "false") << "\n";
  }
  return 0;
}

// Re-checks the shatter pattern through the formula evaluator rather than
// trusting the constructor's own bookkeeping.
int run_witness_ip(const Flags& f, std::ostream& out, std::ostream& err) {
  ShatterWitness w = shatter_witness(f.k);
  std::size_t checked = 0;
  bool ok = true;
  for (const auto& [mask, selector] : w.selectors) {
    for (std::size_t i = 0; i < w.pins.size(); ++i) {
      QfFormula atom = QfFormula::star(
          "R", {Term::element(w.center), Term::element(selector),
                Term::element(w.pins[i])});
      bool expected = (mask >> i) & 1u;
      if (eval_qf(w.structure, atom, {}) != expected) {
        err << "pattern mismatch at selector " << selector << " pin "
            << w.pins[i] << "\n";
        ok = false;
      }
      ++checked;
    }
  }
  out << "center " << w.center << "\n";
  out << "pins " << join(w.pins, ",") << "\n";
  std::vector<std::string> selectors;
  for (const auto& [mask, e] : w.selectors) selectors.push_back(e);
  out << "selectors " << join(selectors, ",") << "\n";
  out << "certified " << checked << " atoms\n";
  if (!f.out_path.empty()) write_structure_file(f.out_path, w.structure);
  return ok ? 0 : 1;
}

int run_witness_ict(const Flags& f, std::ostream& out, std::ostream& err) {
  IctWitness w = ict_pattern(f.n);
  const char* symbols[2] = {"E1", "E2"};
  std::size_t checked = 0;
  bool ok = true;
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
          err << "pattern mismatch at " << b << " row " << alpha
              << " class " << i << "\n";
          ok = false;
        }
        ++checked;
      }
    }
  }
  out << "center " << w.center << "\n";
  for (int alpha = 0; alpha < 2; ++alpha) {
    out << "row" << alpha + 1 << " " << join(w.rows[alpha], ",") << "\n";
  }
  std::vector<std::string> bs;
  for (const auto& [eta, b] : w.realizations) bs.push_back(b);
  out << "realizations " << join(bs, ",") << "\n";
  out << "certified " << checked << " atoms\n";
  if (!f.out_path.empty()) write_structure_file(f.out_path, w.structure);
  return ok ? 0 : 1;
}

int run_witness_inp(const Flags& f, std::ostream& out, std::ostream& err) {
  InpInput input;
  input.skeleton = read_structure_file(f.files.at(0));
  input.center = f.center;
  input.sequence = f.seq.empty() ? numbered_sequence(input.skeleton)
                                 : split_commas(f.seq);
  const BaseClass& base = base_by_name(input.skeleton.signature().name());
  InpWitnessReport report = inp_witness(base, input);
  if (!f.out_path.empty()) write_structure_file(f.out_path, report.n);
  if (report.certified()) {
    out << "certified\n";
    return 0;
  }
  for (const auto& msg : report.failures) err << msg << "\n";
  return 1;
}

int run_profile(const Flags& f, std::ostream& out) {
  const BaseClass& base = base_by_name(f.base);
  GrowthFamily family;
  if (f.family == "fan") {
    family = GrowthFamily::kFan;
  } else if (f.family == "chain") {
    family = GrowthFamily::kChain;
  } else {
    throw CLI::ValidationError("family", "one of fan, chain");
  }
  std::vector<ProfileRow> rows = type_growth_profile(base, family, f.max_m);
  if (f.format == "csv") {
    out << "m,size,count\n";
    for (const auto& r : rows) {
      out << r.m << "," << r.size << "," << r.count << "\n";
    }
  } else if (f.format == "jsonl") {
    for (const auto& r : rows) {
      json j{{"m", r.m}, {"size", r.size}, {"count", r.count}};
      out << j.dump() << "\n";
    }
  } else {
    throw CLI::ValidationError("format", "one of csv, jsonl");
  }
  return 0;
}

int run_cones(const Flags& f, std::ostream& out) {
  DecoratedStructure m = read_structure_file(f.files.at(0));
  ConeQuotient q = cone_partition(m, f.center);
  if (f.cones_format == "jsonl") {
    for (const auto& cone : q.cones) {
      json j{{"representative", cone.front()}, {"members", cone}};
      out << j.dump() << "\n";
    }
    for (const auto& [symbol, tuples] : q.quotient.relations()) {
      for (const auto& tuple : tuples) {
        json j{{"relation", symbol}, {"tuple", tuple}};
        out << j.dump() << "\n";
      }
    }
  } else {
    out << "center " << f.center << "\n";
    for (const auto& cone : q.cones) {
      out << "cone " << cone.front() << ": " << join(cone, " ") << "\n";
    }
    for (const auto& [symbol, tuples] : q.quotient.relations()) {
      for (const auto& tuple : tuples) {
        out << "rel " << symbol << " " << join(tuple, " ") << "\n";
      }
    }
  }
  return 0;
}

int run_eval(const Flags& f, std::ostream& out) {
  DecoratedStructure m = read_structure_file(f.files.at(0));
  QfFormula formula = parse_formula(f.formula);
  Assignment assignment;
  for (const auto& let : f.lets) {
    auto eq = let.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("let", "want var=element");
    }
    assignment[let.substr(0, eq)] = let.substr(eq + 1);
  }
  out << (eval_qf(m, formula, assignment) ? "true" : "false") << "\n";
  return 0;
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv) {
  CommandResult result;
  std::ostringstream out, err;
  Flags f;

  CLI::App app{"finite decorated meet-trees over a pluggable base class"};
  app.require_subcommand(1);

  auto add_base = [&f](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--base", f.base, "base class name");
    if (required) opt->required();
  };

  auto* validate_cmd = app.add_subcommand("validate", "check the axioms");
  add_base(validate_cmd, false);
  validate_cmd->add_option("--mode", f.mode, "tree | universal | cones");
  validate_cmd->add_option("file", f.files, "structure file")->required();

  auto* amalgamate_cmd =
      app.add_subcommand("amalgamate", "amalgamate B and C over A");
  add_base(amalgamate_cmd, true);
  amalgamate_cmd->add_option("files", f.files, "A B C")
      ->expected(3)
      ->required();
  amalgamate_cmd->add_option("-o,--out", f.out_path, "output file");

  auto* jep_cmd = app.add_subcommand("jep", "joint embedding of B and C");
  add_base(jep_cmd, true);
  jep_cmd->add_option("files", f.files, "B C")->expected(2)->required();
  jep_cmd->add_option("-o,--out", f.out_path, "output file");

  auto* generate_cmd =
      app.add_subcommand("generate", "grow a finite generic approximation");
  add_base(generate_cmd, true);
  generate_cmd->add_option("--budget", f.budget, "element budget")
      ->required();
  generate_cmd->add_option("--closure", f.closure, "generators per core");
  generate_cmd->add_option("--rounds", f.rounds, "rounds");
  generate_cmd->add_option("--seed", f.seed, "rng seed");
  generate_cmd->add_option("-o,--out", f.out_path, "output file");

  auto* types_cmd = app.add_subcommand("types", "enumerate 1-types over A");
  add_base(types_cmd, true);
  types_cmd->add_option("file", f.files, "structure file")->required();
  types_cmd->add_flag("--count", f.count_only, "print only the count");

  auto* realize_cmd =
      app.add_subcommand("realize", "realize an enumerated 1-type");
  add_base(realize_cmd, true);
  realize_cmd->add_option("file", f.files, "structure file")->required();
  realize_cmd->add_option("--type", f.type_index, "index into `types`")
      ->required();
  realize_cmd->add_option("-o,--out", f.out_path, "output file");

  auto* check_cmd =
      app.add_subcommand("check-ep", "check the extension property");
  add_base(check_cmd, true);
  check_cmd->add_option("file", f.files, "structure file")->required();
  check_cmd->add_option("--s", f.s, "generators per substructure");
  check_cmd->add_option("--sample", f.sample, "substructure sample limit");

  auto* baf_cmd =
      app.add_subcommand("baf", "seeded back-and-forth between two models");
  add_base(baf_cmd, true);
  baf_cmd->add_option("files", f.files, "M N")->expected(2)->required();
  baf_cmd->add_option("--steps", f.steps, "extension steps")->required();
  baf_cmd->add_option("--seed", f.seed, "rng seed");
  baf_cmd->add_option("--map", f.map_pairs, "initial pairs x=y");

  auto* branch_cmd =
      app.add_subcommand("branch-type", "the 1-type of a maximal branch");
  branch_cmd->add_option("file", f.files, "structure file")->required();
  branch_cmd->add_option("--branch", f.branch, "comma-joined chain")
      ->required();

  auto* witness_cmd = app.add_subcommand("witness", "explicit witnesses");
  witness_cmd->require_subcommand(1);
  auto* ip_cmd = witness_cmd->add_subcommand("ip", "shatter a pin family");
  ip_cmd->add_option("--k", f.k, "pins")->required();
  ip_cmd->add_option("-o,--out", f.out_path, "output file");
  auto* ict_cmd = witness_cmd->add_subcommand("ict", "depth-2 class pattern");
  ict_cmd->add_option("--n", f.n, "width")->required();
  ict_cmd->add_option("-o,--out", f.out_path, "output file");
  auto* inp_cmd =
      witness_cmd->add_subcommand("inp", "sequence-copying witness");
  inp_cmd->add_option("--spec", f.files, "skeleton file")
      ->expected(1)
      ->required();
  inp_cmd->add_option("--center", f.center, "center element");
  inp_cmd->add_option("--seq", f.seq, "comma-joined sequence");
  inp_cmd->add_option("-o,--out", f.out_path, "output file");

  auto* profile_cmd =
      app.add_subcommand("profile", "1-type counts over canonical families");
  add_base(profile_cmd, true);
  profile_cmd->add_option("--family", f.family, "fan | chain");
  profile_cmd->add_option("--max", f.max_m, "largest m")->required();
  profile_cmd->add_option("--format", f.format, "csv | jsonl");

  auto* cones_cmd =
      app.add_subcommand("cones", "cone partition and quotient at a center");
  cones_cmd->add_option("file", f.files, "structure file")->required();
  cones_cmd->add_option("--center", f.center, "center element")->required();
  cones_cmd->add_option("--format", f.cones_format, "text | jsonl");

  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate a quantifier-free formula");
  eval_cmd->add_option("file", f.files, "structure file")->required();
  eval_cmd->add_option("--formula", f.formula, "formula text")->required();
  eval_cmd->add_option("--let", f.lets, "assignments var=element");

  try {
    std::vector<std::string> args(argv.rbegin(), argv.rend());
    app.parse(args);

    if (validate_cmd->parsed()) {
      result.exit_code = run_validate(f, out, err);
    } else if (amalgamate_cmd->parsed()) {
      result.exit_code = run_amalgamate(f, out);
    } else if (jep_cmd->parsed()) {
      result.exit_code = run_jep(f, out);
    } else if (generate_cmd->parsed()) {
      result.exit_code = run_generate(f, out);
    } else if (types_cmd->parsed()) {
      result.exit_code = run_types(f, out);
    } else if (realize_cmd->parsed()) {
      result.exit_code = run_realize(f, out);
    } else if (check_cmd->parsed()) {
      result.exit_code = run_check_ep(f, out);
    } else if (baf_cmd->parsed()) {
      result.exit_code = run_baf(f, out);
    } else if (branch_cmd->parsed()) {
      result.exit_code = run_branch_type(f, out);
    } else if (witness_cmd->parsed()) {
      if (ip_cmd->parsed()) {
        result.exit_code = run_witness_ip(f, out, err);
      } else if (ict_cmd->parsed()) {
        result.exit_code = run_witness_ict(f, out, err);
      } else {
        result.exit_code = run_witness_inp(f, out, err);
      }
    } else if (profile_cmd->parsed()) {
      result.exit_code = run_profile(f, out);
    } else if (cones_cmd->parsed()) {
      result.exit_code = run_cones(f, out);
    } else if (eval_cmd->parsed()) {
      result.exit_code = run_eval(f, out);
    }
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    result.exit_code = 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    result.exit_code = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    result.exit_code = 2;
  }

  result.out = out.str();
  result.err = err.str();
  return result;
}

}  // namespace conetree
