#include "conetree/formula.hpp"

#include <cctype>
#include <sstream>

namespace conetree {

// ---- Term -------------------------------------------------------------------

Term Term::var(std::string name) {
  Term t;
  t.kind_ = Kind::kVar;
  t.name_ = std::move(name);
  return t;
}

Term Term::element(std::string id) {
  Term t;
  t.kind_ = Kind::kElement;
  t.name_ = std::move(id);
  return t;
}

Term Term::meet(Term lhs, Term rhs) {
  Term t;
  t.kind_ = Kind::kMeet;
  t.kids_ = std::make_shared<const std::vector<Term>>(
      std::vector<Term>{std::move(lhs), std::move(rhs)});
  return t;
}

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::kVar:
      return "?" + name_;
    case Kind::kElement:
      return name_;
    case Kind::kMeet:
      return "(" + lhs().to_string() + " ^ " + rhs().to_string() + ")";
  }
  return "";
}

// ---- QfFormula --------------------------------------------------------------

QfFormula QfFormula::leq(Term lhs, Term rhs) {
  QfFormula f;
  f.kind_ = Kind::kLeq;
  f.terms_ = {std::move(lhs), std::move(rhs)};
  return f;
}

QfFormula QfFormula::eq(Term lhs, Term rhs) {
  QfFormula f;
  f.kind_ = Kind::kEq;
  f.terms_ = {std::move(lhs), std::move(rhs)};
  return f;
}

QfFormula QfFormula::star(std::string symbol, std::vector<Term> args) {
  QfFormula f;
  f.kind_ = Kind::kStar;
  f.symbol_ = std::move(symbol);
  f.terms_ = std::move(args);
  return f;
}

QfFormula QfFormula::negation(QfFormula inner) {
  QfFormula f;
  f.kind_ = Kind::kNot;
  f.kids_ = std::make_shared<const std::vector<QfFormula>>(
      std::vector<QfFormula>{std::move(inner)});
  return f;
}

QfFormula QfFormula::conjunction(std::vector<QfFormula> fs) {
  QfFormula f;
  f.kind_ = Kind::kAnd;
  f.kids_ = std::make_shared<const std::vector<QfFormula>>(std::move(fs));
  return f;
}

QfFormula QfFormula::disjunction(std::vector<QfFormula> fs) {
  QfFormula f;
  f.kind_ = Kind::kOr;
  f.kids_ = std::make_shared<const std::vector<QfFormula>>(std::move(fs));
  return f;
}

QfFormula QfFormula::truth(bool value) {
  QfFormula f;
  f.kind_ = value ? Kind::kTrue : Kind::kFalse;
  return f;
}

std::string QfFormula::to_string() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kLeq:
      out << terms_[0].to_string() << " <= " << terms_[1].to_string();
      break;
    case Kind::kEq:
      out << terms_[0].to_string() << " = " << terms_[1].to_string();
      break;
    case Kind::kStar:
      out << symbol_ << "*(";
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out << ", ";
        out << terms_[i].to_string();
      }
      out << ")";
      break;
    case Kind::kNot:
      out << "!(" << children()[0].to_string() << ")";
      break;
    case Kind::kAnd:
    case Kind::kOr: {
      const char* op = kind_ == Kind::kAnd ? " & " : " | ";
      out << "(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out << op;
        out << children()[i].to_string();
      }
      out << ")";
      break;
    }
    case Kind::kTrue:
      out << "true";
      break;
    case Kind::kFalse:
      out << "false";
      break;
  }
  return out.str();
}

// ---- BaseFormula ------------------------------------------------------------

BaseFormula BaseFormula::rel(std::string symbol,
                             std::vector<std::string> vars) {
  BaseFormula f;
  f.kind_ = Kind::kRel;
  f.symbol_ = std::move(symbol);
  f.vars_ = std::move(vars);
  return f;
}

BaseFormula BaseFormula::eq(std::string lhs, std::string rhs) {
  BaseFormula f;
  f.kind_ = Kind::kEq;
  f.vars_ = {std::move(lhs), std::move(rhs)};
  return f;
}

BaseFormula BaseFormula::negation(BaseFormula inner) {
  BaseFormula f;
  f.kind_ = Kind::kNot;
  f.kids_ = std::make_shared<const std::vector<BaseFormula>>(
      std::vector<BaseFormula>{std::move(inner)});
  return f;
}

BaseFormula BaseFormula::conjunction(std::vector<BaseFormula> fs) {
  BaseFormula f;
  f.kind_ = Kind::kAnd;
  f.kids_ = std::make_shared<const std::vector<BaseFormula>>(std::move(fs));
  return f;
}

BaseFormula BaseFormula::disjunction(std::vector<BaseFormula> fs) {
  BaseFormula f;
  f.kind_ = Kind::kOr;
  f.kids_ = std::make_shared<const std::vector<BaseFormula>>(std::move(fs));
  return f;
}

BaseFormula BaseFormula::truth(bool value) {
  BaseFormula f;
  f.kind_ = value ? Kind::kTrue : Kind::kFalse;
  return f;
}

std::string BaseFormula::to_string() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::kRel:
      out << symbol_ << "(";
      for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i) out << ", ";
        out << "?" << vars_[i];
      }
      out << ")";
      break;
    case Kind::kEq:
      out << "?" << vars_[0] << " = ?" << vars_[1];
      break;
    case Kind::kNot:
      out << "!(" << children()[0].to_string() << ")";
      break;
    case Kind::kAnd:
    case Kind::kOr: {
      const char* op = kind_ == Kind::kAnd ? " & " : " | ";
      out << "(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out << op;
        out << children()[i].to_string();
      }
      out << ")";
      break;
    }
    case Kind::kTrue:
      out << "true";
      break;
    case Kind::kFalse:
      out << "false";
      break;
  }
  return out.str();
}

// ---- evaluation -------------------------------------------------------------

std::string eval_term(const DecoratedStructure& s, const Term& t,
                      const Assignment& assignment) {
  switch (t.kind()) {
    case Term::Kind::kVar: {
      auto it = assignment.find(t.name());
      if (it == assignment.end()) {
        throw EvalError("unbound variable ?" + t.name());
      }
      if (!s.has(it->second)) {
        throw EvalError("variable ?" + t.name() + " bound to unknown element " +
                        it->second);
      }
      return it->second;
    }
    case Term::Kind::kElement:
      if (!s.has(t.name())) throw EvalError("unknown element " + t.name());
      return t.name();
    case Term::Kind::kMeet: {
      std::string a = eval_term(s, t.lhs(), assignment);
      std::string b = eval_term(s, t.rhs(), assignment);
      auto m = s.meet(a, b);
      if (!m) throw EvalError("no meet of " + a + " and " + b);
      return *m;
    }
  }
  throw EvalError("bad term");
}

bool eval_qf(const DecoratedStructure& s, const QfFormula& f,
             const Assignment& assignment) {
  switch (f.kind()) {
    case QfFormula::Kind::kLeq:
      return s.leq(eval_term(s, f.terms()[0], assignment),
                   eval_term(s, f.terms()[1], assignment));
    case QfFormula::Kind::kEq:
      return eval_term(s, f.terms()[0], assignment) ==
             eval_term(s, f.terms()[1], assignment);
    case QfFormula::Kind::kStar: {
      std::vector<std::string> vals;
      for (const Term& t : f.terms()) {
        vals.push_back(eval_term(s, t, assignment));
      }
      if (f.symbol() == "=") {
        // (EQ): =*(c, y, y') means c < y ^ y'.
        if (vals.size() != 3) throw EvalError("=* wants three terms");
        auto m = s.meet(vals[1], vals[2]);
        if (!m) throw EvalError("no meet of " + vals[1] + " and " + vals[2]);
        return s.less(vals[0], *m);
      }
      auto lifted = s.signature().lifted_arity(f.symbol());
      if (!lifted) throw EvalError("unknown relation " + f.symbol());
      if (static_cast<int>(vals.size()) != *lifted) {
        throw EvalError("arity mismatch for " + f.symbol() + "*");
      }
      return s.star_holds(
          f.symbol(), vals.front(),
          std::vector<std::string>(vals.begin() + 1, vals.end()));
    }
    case QfFormula::Kind::kNot:
      return !eval_qf(s, f.children()[0], assignment);
    case QfFormula::Kind::kAnd:
      for (const auto& g : f.children()) {
        if (!eval_qf(s, g, assignment)) return false;
      }
      return true;
    case QfFormula::Kind::kOr:
      for (const auto& g : f.children()) {
        if (eval_qf(s, g, assignment)) return true;
      }
      return false;
    case QfFormula::Kind::kTrue:
      return true;
    case QfFormula::Kind::kFalse:
      return false;
  }
  throw EvalError("bad formula");
}

bool eval_base(const BaseStructure& s, const BaseFormula& f,
               const Assignment& assignment) {
  auto value = [&](const std::string& var) {
    auto it = assignment.find(var);
    if (it == assignment.end()) throw EvalError("unbound variable ?" + var);
    if (!s.has(it->second)) {
      throw EvalError("variable ?" + var + " bound to unknown element " +
                      it->second);
    }
    return it->second;
  };
  switch (f.kind()) {
    case BaseFormula::Kind::kRel: {
      std::vector<std::string> tuple;
      for (const auto& v : f.vars()) tuple.push_back(value(v));
      auto arity = s.signature().arity(f.symbol());
      if (!arity) throw EvalError("unknown relation " + f.symbol());
      if (static_cast<int>(tuple.size()) != *arity) {
        throw EvalError("arity mismatch for " + f.symbol());
      }
      return s.holds(f.symbol(), tuple);
    }
    case BaseFormula::Kind::kEq:
      return value(f.vars()[0]) == value(f.vars()[1]);
    case BaseFormula::Kind::kNot:
      return !eval_base(s, f.children()[0], assignment);
    case BaseFormula::Kind::kAnd:
      for (const auto& g : f.children()) {
        if (!eval_base(s, g, assignment)) return false;
      }
      return true;
    case BaseFormula::Kind::kOr:
      for (const auto& g : f.children()) {
        if (eval_base(s, g, assignment)) return true;
      }
      return false;
    case BaseFormula::Kind::kTrue:
      return true;
    case BaseFormula::Kind::kFalse:
      return false;
  }
  throw EvalError("bad formula");
}

QfFormula star_translate(const BaseFormula& psi, const Term& center) {
  switch (psi.kind()) {
    case BaseFormula::Kind::kRel: {
      std::vector<Term> args{center};
      for (const auto& v : psi.vars()) args.push_back(Term::var(v));
      return QfFormula::star(psi.symbol(), std::move(args));
    }
    case BaseFormula::Kind::kEq:
      return QfFormula::star(
          "=", {center, Term::var(psi.vars()[0]), Term::var(psi.vars()[1])});
    case BaseFormula::Kind::kNot:
      return QfFormula::negation(star_translate(psi.children()[0], center));
    case BaseFormula::Kind::kAnd:
    case BaseFormula::Kind::kOr: {
      std::vector<QfFormula> kids;
      for (const auto& g : psi.children()) {
        kids.push_back(star_translate(g, center));
      }
      return psi.kind() == BaseFormula::Kind::kAnd
                 ? QfFormula::conjunction(std::move(kids))
                 : QfFormula::disjunction(std::move(kids));
    }
    case BaseFormula::Kind::kTrue:
      return QfFormula::truth(true);
    case BaseFormula::Kind::kFalse:
      return QfFormula::truth(false);
  }
  throw EvalError("bad formula");
}

// ---- parser -----------------------------------------------------------------

namespace {

struct Lexer {
  std::string text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(
                                    text[pos]))) {
      ++pos;
    }
  }

  bool eat(const std::string& tok) {
    skip();
    if (text.compare(pos, tok.size(), tok) == 0) {
      pos += tok.size();
      return true;
    }
    return false;
  }

  char peek() {
    skip();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '~' || c == '.' || c == '-';
  }

  std::string ident() {
    skip();
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (start == pos) {
      throw EvalError("formula syntax error at offset " +
                      std::to_string(pos));
    }
    return text.substr(start, pos - start);
  }

  [[noreturn]] void fail(const std::string& what) {
    throw EvalError("formula syntax error at offset " + std::to_string(pos) +
                    ": expected " + what);
  }
};

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) { lex_.text = text; }

  QfFormula parse() {
    QfFormula f = formula();
    lex_.skip();
    if (lex_.pos != lex_.text.size()) lex_.fail("end of input");
    return f;
  }

 private:
  Lexer lex_;

  Term term() {
    Term t = primary();
    while (lex_.peek() == '^') {
      lex_.eat("^");
      t = Term::meet(std::move(t), primary());
    }
    return t;
  }

  Term primary() {
    if (lex_.eat("(")) {
      Term t = term();
      if (!lex_.eat(")")) lex_.fail("')'");
      return t;
    }
    if (lex_.eat("?")) return Term::var(lex_.ident());
    return Term::element(lex_.ident());
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    if (!lex_.eat("(")) lex_.fail("'('");
    args.push_back(term());
    while (lex_.eat(",")) args.push_back(term());
    if (!lex_.eat(")")) lex_.fail("')'");
    return args;
  }

  QfFormula atom() {
    if (lex_.eat("(")) {
      QfFormula f = formula();
      if (!lex_.eat(")")) lex_.fail("')'");
      return f;
    }
    if (lex_.eat("=*")) {
      std::vector<Term> args = arguments();
      if (args.size() != 3) lex_.fail("three arguments for =*");
      return QfFormula::star("=", std::move(args));
    }
    // A star atom begins with an identifier immediately followed by "*(".
    lex_.skip();
    std::size_t mark = lex_.pos;
    if (lex_.ident_char(lex_.peek())) {
      std::string name = lex_.ident();
      if (name == "true") return QfFormula::truth(true);
      if (name == "false") return QfFormula::truth(false);
      if (lex_.eat("*")) return QfFormula::star(name, arguments());
      lex_.pos = mark;
    }
    Term lhs = term();
    if (lex_.eat("<=")) return QfFormula::leq(std::move(lhs), term());
    if (lex_.eat("<")) {
      Term rhs = term();
      return QfFormula::conjunction(
          {QfFormula::leq(lhs, rhs),
           QfFormula::negation(QfFormula::eq(lhs, rhs))});
    }
    if (lex_.eat("=")) return QfFormula::eq(std::move(lhs), term());
    lex_.fail("comparison operator");
  }

  QfFormula unary() {
    if (lex_.eat("!")) return QfFormula::negation(unary());
    return atom();
  }

  QfFormula conjunction() {
    QfFormula f = unary();
    if (lex_.peek() != '&') return f;
    std::vector<QfFormula> kids{std::move(f)};
    while (lex_.eat("&")) kids.push_back(unary());
    return QfFormula::conjunction(std::move(kids));
  }

  QfFormula formula() {
    QfFormula f = conjunction();
    if (lex_.peek() != '|') return f;
    std::vector<QfFormula> kids{std::move(f)};
    while (lex_.eat("|")) kids.push_back(conjunction());
    return QfFormula::disjunction(std::move(kids));
  }
};

}  // namespace

QfFormula parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

}  // namespace conetree
