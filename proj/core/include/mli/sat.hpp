#pragma once

#include <optional>

#include "mli/gibbs.hpp"

namespace mli {

// Every grounding of the hard clauses whose atoms stay within the given
// term depth. Ground tautologies are dropped and duplicate clauses merged.
struct TruncatedKB {
  int depth = 0;
  std::vector<AtomId> atoms;  // sorted by text
  std::vector<std::vector<GroundLiteral>> clauses;
};

// Requires every formula weight to be infinite and the program to be
// sigma-determinate.
TruncatedKB ground_truncation(Grounder& g, int depth);

struct SatModel {
  std::vector<std::pair<AtomId, bool>> assignment;  // one entry per kb atom
};

// Complete search with unit propagation. nullopt means unsatisfiable.
std::optional<SatModel> solve_ground(const TruncatedKB& kb);

bool model_satisfies(const TruncatedKB& kb, const SatModel& model);

enum class SatVerdict {
  // Some truncation is already contradictory, which settles the
  // infinite-domain question.
  UnsatisfiableCertified,
  // Every truncation up to the horizon has a model. Says nothing final:
  // a deeper truncation may still be contradictory.
  SatisfiableUpToDepth,
};

std::string to_string(SatVerdict v);

struct DepthResult {
  int depth = 0;
  std::size_t atom_count = 0;
  std::size_t clause_count = 0;
  bool satisfiable = true;
};

struct SatReport {
  SatVerdict verdict = SatVerdict::SatisfiableUpToDepth;
  int depth = 0;  // certificate depth, or the horizon when satisfiable
  std::vector<DepthResult> per_depth;
  // Model at the horizon when satisfiable, keyed by atom text so the report
  // stays valid after the grounder that produced it is gone. Empty when
  // unsatisfiable.
  std::vector<std::pair<std::string, bool>> model;
};

// Deepens the truncation until it is contradictory or the horizon is hit.
// Truncations only grow with depth, so the first contradiction is final.
SatReport check_satisfiable(Grounder& g, int max_depth);

// Entailment via refutation: alpha follows from the knowledge base exactly
// when kb plus the negation of alpha has no model. Certificates transfer;
// "satisfiable up to depth" leaves entailment open.
SatReport check_entailment(const Program& kb, const FormulaPtr& alpha,
                           int max_depth);

struct LimitDistribution {
  std::vector<AtomId> atoms;          // row bit i corresponds to atoms[i]
  std::vector<double> probabilities;  // uniform over the argmax rows
  std::size_t max_satisfied = 0;
};

// The zero-temperature limit of the conditional: mass spreads evenly over
// the configurations that satisfy the most clauses. Requires every clause
// weight to be infinite.
LimitDistribution limit_conditional(const Volume& v,
                                    const BoundaryAssignment& boundary,
                                    std::size_t max_atoms = kExactConditionalCap);

}  // namespace mli
