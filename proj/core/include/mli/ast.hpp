#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace mli {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// First-order terms. Immutable; transformations build new nodes and share
// unchanged subtrees. `type` is the domain type of the term (for a function
// application, its return type).
struct Term {
  enum class Kind { Variable, Constant, Function };

  Kind kind;
  std::string name;
  std::string type;
  std::vector<TermPtr> args;  // Function only

  static TermPtr variable(std::string name, std::string type);
  static TermPtr constant(std::string name, std::string type);
  static TermPtr function(std::string name, std::string type,
                          std::vector<TermPtr> args);
};

bool equal(const TermPtr& a, const TermPtr& b);
bool is_ground(const TermPtr& t);
int term_depth(const TermPtr& t);  // constants and variables have depth 0
std::string to_string(const Term& t);

// Substitution maps variable names to terms.
using Substitution = std::map<std::string, TermPtr>;
TermPtr substitute(const TermPtr& t, const Substitution& s);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class Connective { Atom, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula {
  Connective kind;

  // Atom
  std::string predicate;
  std::vector<TermPtr> args;

  // Not (1), And/Or/Implies/Iff (2), Forall/Exists (body)
  std::vector<FormulaPtr> operands;

  // Quantifiers
  std::string var;
  std::string var_type;

  static FormulaPtr atom(std::string predicate, std::vector<TermPtr> args);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implication(FormulaPtr a, FormulaPtr b);
  static FormulaPtr equivalence(FormulaPtr a, FormulaPtr b);
  static FormulaPtr forall(std::string var, std::string var_type,
                           FormulaPtr body);
  static FormulaPtr exists(std::string var, std::string var_type,
                           FormulaPtr body);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::string to_string(const Formula& f);
FormulaPtr substitute(const FormulaPtr& f, const Substitution& s);

// Free variables in first-occurrence order (left to right).
std::vector<std::pair<std::string, std::string>> free_variables(
    const FormulaPtr& f);

}  // namespace mli
