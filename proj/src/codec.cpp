#include "conetree/codec.hpp"

#include <fstream>
#include <sstream>

#include "conetree/base_class.hpp"

namespace conetree {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

DecoratedStructure parse_structure(const std::string& text) {
  std::optional<Signature> sig;
  std::vector<std::string> elements;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, std::string>> leq_pairs;
  DecoratedStructure::StarMap stars;
  struct Pending {
    int line;
    std::vector<std::string> ids;
  };
  std::vector<Pending> pending_leq;
  std::vector<Pending> pending_rel;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string& head = tok.front();
    if (head == "signature") {
      if (sig) throw ParseError(line_no, "duplicate signature line");
      if (tok.size() != 2) throw ParseError(line_no, "signature wants a name");
      if (!base_registered(tok[1])) {
        throw ParseError(line_no, "unknown signature '" + tok[1] + "'");
      }
      sig = base_by_name(tok[1]).signature();
    } else if (head == "element") {
      if (tok.size() < 2) throw ParseError(line_no, "element wants ids");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i][0] == '?') {
          throw ParseError(line_no, "element id may not start with '?'");
        }
        if (!seen.insert(tok[i]).second) {
          throw ParseError(line_no, "duplicate element '" + tok[i] + "'");
        }
        elements.push_back(tok[i]);
      }
    } else if (head == "leq") {
      if (tok.size() != 3) throw ParseError(line_no, "leq wants two ids");
      pending_leq.push_back({line_no, {tok[1], tok[2]}});
    } else if (head == "rel") {
      if (tok.size() < 4) {
        throw ParseError(line_no, "rel wants a symbol, a center and entries");
      }
      pending_rel.push_back({line_no, {tok.begin() + 1, tok.end()}});
    } else {
      throw ParseError(line_no, "unknown directive '" + head + "'");
    }
  }

  if (!sig) sig = Signature::equality();
  for (const auto& p : pending_leq) {
    for (const auto& id : p.ids) {
      if (!seen.count(id)) {
        throw ParseError(p.line, "leq references unknown element '" + id + "'");
      }
    }
    leq_pairs.emplace_back(p.ids[0], p.ids[1]);
  }
  for (const auto& p : pending_rel) {
    const std::string& symbol = p.ids.front();
    if (symbol == "=") {
      throw ParseError(p.line, "equality tuples are implicit");
    }
    auto lifted = sig->lifted_arity(symbol);
    if (!lifted) {
      throw ParseError(p.line, "relation '" + symbol + "' not in signature '" +
                                   sig->name() + "'");
    }
    if (static_cast<int>(p.ids.size()) - 1 != *lifted) {
      throw ParseError(p.line, "relation '" + symbol + "' wants " +
                                   std::to_string(*lifted) + " entries");
    }
    for (std::size_t i = 1; i < p.ids.size(); ++i) {
      if (!seen.count(p.ids[i])) {
        throw ParseError(p.line,
                         "rel references unknown element '" + p.ids[i] + "'");
      }
    }
    stars[symbol].insert(
        std::vector<std::string>(p.ids.begin() + 1, p.ids.end()));
  }

  try {
    return DecoratedStructure::make(*sig, elements, leq_pairs, stars);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

std::string serialize_structure(const DecoratedStructure& s) {
  std::ostringstream out;
  out << "signature " << s.signature().name() << "\n";
  for (const auto& e : s.elements()) out << "element " << e << "\n";
  for (const auto& [a, b] : s.strict_pairs()) {
    out << "leq " << a << " " << b << "\n";
  }
  for (const auto& [symbol, tuples] : s.stars()) {
    for (const auto& tuple : tuples) {
      out << "rel " << symbol;
      for (const auto& e : tuple) out << " " << e;
      out << "\n";
    }
  }
  return out.str();
}

DecoratedStructure read_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_structure(buf.str());
}

void write_structure_file(const std::string& path,
                          const DecoratedStructure& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize_structure(s);
}

}  // namespace conetree
