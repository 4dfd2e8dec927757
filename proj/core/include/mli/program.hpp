#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mli/ast.hpp"
#include "mli/signature.hpp"

namespace mli {

// A weighted sentence as written by the user. `weight` may be +infinity
// for hard constraints.
struct WeightedFormula {
  double weight = 0.0;
  FormulaPtr formula;
};

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<TermPtr> args;
};

std::string to_string(const Literal& lit);
bool equal(const Literal& a, const Literal& b);

// One first-order clause produced from formula `origin`. A formula that
// compiles to n clauses contributes weight/n to each of them, so the
// origin's weight is recovered by the clause count and the shared origin
// index rather than by floating-point summation.
struct WeightedClause {
  std::vector<Literal> literals;
  double weight = 0.0;
  std::size_t origin = 0;
};

std::string to_string(const WeightedClause& c);

struct Program {
  Signature signature;
  std::vector<WeightedFormula> formulas;

  // Derived by compile_clauses().
  std::vector<WeightedClause> clauses;
  std::vector<std::string> warnings;
  bool compiled = false;
};

// Source-level equality: declarations and weighted formulas. Derived
// clauses and warnings are not compared.
bool operator==(const Program& a, const Program& b);

// Canonical text form. Parsing the result yields an equal Program.
std::string print_program(const Program& p);

}  // namespace mli
