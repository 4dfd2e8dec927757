#pragma once

#include <cstddef>

#include "mli/program.hpp"

namespace mli {

struct CnfOptions {
  // Distribution to clause form can be exponential; abort a formula whose
  // clause count would exceed this.
  std::size_t max_clauses_per_formula = 10000;
};

// Rewrites a sentence into prenex form with a CNF matrix. Equivalence is
// preserved exactly: connective elimination, negation normal form, and
// distribution of disjunction over conjunction only. No fresh predicates
// or variables are introduced beyond renaming bound variables apart.
FormulaPtr to_prenex_cnf(const FormulaPtr& f, const Signature& sig,
                         const CnfOptions& opts = {});

// Expands existential quantifiers over finite types into disjunctions and
// drops the remaining universal prefix, yielding a quantifier-free CNF over
// the open matrix. Rejects existentials over infinite types.
FormulaPtr expand_finite_existentials(const FormulaPtr& f, const Signature& sig,
                                      const CnfOptions& opts = {});

// Converts every formula of the program to clauses, splitting each weight
// equally across the formula's clauses. Tautological clauses are removed
// (with a warning) before the split. Idempotent.
const std::vector<WeightedClause>& compile_clauses(Program& p,
                                                   const CnfOptions& opts = {});

}  // namespace mli
