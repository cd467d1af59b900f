#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "conetree/base_structure.hpp"
#include "conetree/structure.hpp"

namespace conetree {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Terms of the decorated language: variables, element constants, and meets.
class Term {
 public:
  enum class Kind { kVar, kElement, kMeet };

  static Term var(std::string name);
  static Term element(std::string id);
  static Term meet(Term lhs, Term rhs);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // var / element
  const Term& lhs() const { return kids_->at(0); }
  const Term& rhs() const { return kids_->at(1); }

  std::string to_string() const;

 private:
  Kind kind_ = Kind::kVar;
  std::string name_;
  std::shared_ptr<const std::vector<Term>> kids_;
};

// Quantifier-free formulas over the decorated language.  Atoms: t <= t,
// t = t, and lifted relations R*(t0, .., tn) with the center first.  The
// equality lift =*(c, y, y') is definitional (it means c < y ^ y') and is
// written with symbol "=".
class QfFormula {
 public:
  enum class Kind { kLeq, kEq, kStar, kNot, kAnd, kOr, kTrue, kFalse };

  static QfFormula leq(Term lhs, Term rhs);
  static QfFormula eq(Term lhs, Term rhs);
  static QfFormula star(std::string symbol, std::vector<Term> args);
  static QfFormula negation(QfFormula f);
  static QfFormula conjunction(std::vector<QfFormula> fs);
  static QfFormula disjunction(std::vector<QfFormula> fs);
  static QfFormula truth(bool value);

  Kind kind() const { return kind_; }
  const std::string& symbol() const { return symbol_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<QfFormula>& children() const { return *kids_; }

  std::string to_string() const;

 private:
  Kind kind_ = Kind::kTrue;
  std::string symbol_;
  std::vector<Term> terms_;
  std::shared_ptr<const std::vector<QfFormula>> kids_;
};

// Quantifier-free formulas of the base language: relation atoms and equality
// over plain variables, with the same connectives.
class BaseFormula {
 public:
  enum class Kind { kRel, kEq, kNot, kAnd, kOr, kTrue, kFalse };

  static BaseFormula rel(std::string symbol, std::vector<std::string> vars);
  static BaseFormula eq(std::string lhs, std::string rhs);
  static BaseFormula negation(BaseFormula f);
  static BaseFormula conjunction(std::vector<BaseFormula> fs);
  static BaseFormula disjunction(std::vector<BaseFormula> fs);
  static BaseFormula truth(bool value);

  Kind kind() const { return kind_; }
  const std::string& symbol() const { return symbol_; }
  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<BaseFormula>& children() const { return *kids_; }

  std::string to_string() const;

 private:
  Kind kind_ = Kind::kTrue;
  std::string symbol_;
  std::vector<std::string> vars_;
  std::shared_ptr<const std::vector<BaseFormula>> kids_;
};

using Assignment = std::map<std::string, std::string>;

// Tarskian evaluation.  Meets are taken from the derived table; a missing
// meet, unbound variable, unknown constant or ill-arity atom throws
// EvalError.
std::string eval_term(const DecoratedStructure& s, const Term& t,
                      const Assignment& assignment);
bool eval_qf(const DecoratedStructure& s, const QfFormula& f,
             const Assignment& assignment);

bool eval_base(const BaseStructure& s, const BaseFormula& f,
               const Assignment& assignment);

// The star translation at a center: every base atom R(y..) becomes
// R*(x, y..) and every equality y = y' becomes =*(x, y, y'), i.e.
// x < y ^ y'.  Base variables keep their names.
QfFormula star_translate(const BaseFormula& psi, const Term& center);

// Text syntax for the decorated language, used by the CLI:
//   terms:     ident | ?var | term ^ term | ( term )
//   atoms:     t <= t | t < t | t = t | R*(t, t, ...) | =*(t, t, t)
//   formulas:  !f | f & f | f | f | ( f ) | true | false
QfFormula parse_formula(const std::string& text);

}  // namespace conetree
