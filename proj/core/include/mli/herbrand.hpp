#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mli/program.hpp"

namespace mli {

using TermId = std::uint32_t;
using AtomId = std::uint32_t;

struct GroundTerm {
  std::string head;
  std::vector<TermId> args;
  std::string type;
  int depth = 0;       // constants are depth 0
  std::string text;    // canonical print form, e.g. "s(s(0))"
};

struct GroundAtom {
  std::string predicate;
  std::vector<TermId> args;
  int depth = 0;       // max argument depth
  std::string text;    // e.g. "Q(s(0),0)"
};

struct GroundLiteral {
  AtomId atom = 0;
  bool positive = true;

  friend bool operator==(const GroundLiteral&, const GroundLiteral&) = default;
  friend auto operator<=>(const GroundLiteral&, const GroundLiteral&) = default;
};

// A fully ground instance of one program clause. `distinct_atoms` counts
// unique atoms, not literals; a ground tautology like Q(0) | !Q(0) has one.
struct GroundClause {
  std::size_t source = 0;  // index into Program::clauses
  double weight = 0.0;
  std::vector<GroundLiteral> literals;
  std::size_t distinct_atoms = 0;
};

// Interning store for ground terms and atoms. Equal structures always get
// the same id. Reads are concurrent; insertions take the write lock.
class HerbrandStore {
 public:
  TermId intern_term(const TermPtr& ground);
  AtomId intern_atom(const std::string& predicate,
                     const std::vector<TermId>& args);
  AtomId intern_atom(const FormulaPtr& ground_atom);

  const GroundTerm& term(TermId id) const { return terms_[id]; }
  const GroundAtom& atom(AtomId id) const { return atoms_[id]; }
  const std::string& term_text(TermId id) const { return terms_[id].text; }
  const std::string& atom_text(AtomId id) const { return atoms_[id].text; }

  std::size_t term_count() const;
  std::size_t atom_count() const;

 private:
  // Builds or finds the term for head(args). Assumes the argument ids are
  // valid; used by the store itself and by the Grounder.
  TermId intern_term_parts(const std::string& head,
                           const std::vector<TermId>& args,
                           const std::string& type);

  mutable std::shared_mutex mutex_;
  std::vector<GroundTerm> terms_;
  std::vector<GroundAtom> atoms_;
  std::unordered_map<std::string, TermId> term_index_;   // by text
  std::unordered_map<std::string, AtomId> atom_index_;   // by text
  friend class Grounder;
};

struct ClauseDeterminacy {
  bool determinate = true;
  // Infinite-domain variables that are missing from at least one literal.
  std::vector<std::string> violating_variables;
};

struct DeterminacyReport {
  bool determinate = true;
  std::vector<ClauseDeterminacy> clauses;
  // Static upper bound on the number of ground clauses any single atom can
  // appear in (and hence on its neighbor count).
  std::uint64_t clause_bound = 0;
};

DeterminacyReport check_sigma_determinate(const Program& p);

// Lazy grounding over the Herbrand base. Construction requires a compiled
// program; the per-atom operations additionally require sigma-determinacy
// and throw RejectionError without it.
class Grounder {
 public:
  explicit Grounder(const Program& p);

  const Program& program() const { return *program_; }
  HerbrandStore& store() { return store_; }
  const HerbrandStore& store() const { return store_; }
  const DeterminacyReport& determinacy() const { return determinacy_; }

  // All ground terms of `type` up to the given depth, ordered by depth,
  // then by text.
  std::vector<TermId> universe(const std::string& type, int max_depth);

  // All ground atoms whose arguments stay within `max_depth`, ordered by
  // depth, then by predicate and text.
  std::vector<AtomId> atoms_up_to_depth(int max_depth);

  AtomId intern_atom(const FormulaPtr& ground_atom);

  // Applies a complete variable binding to a term and interns the result.
  TermId ground_term(const TermPtr& t,
                     const std::map<std::string, TermId>& bindings);

  // Throws RejectionError (with the violating clauses and variables) when
  // the program is not sigma-determinate.
  void require_sigma_determinate() const;

  // Every ground clause containing the atom, each in canonical form:
  // literals sorted by atom text, duplicates merged. Finite in a
  // sigma-determinate program.
  const std::vector<GroundClause>& clauses_containing(AtomId atom);

  // Distinct atoms sharing a ground clause with `atom`, excluding the atom
  // itself, sorted by text.
  std::vector<AtomId> neighbors(AtomId atom);

 private:
  const std::vector<TermId>& terms_at_depth(const std::string& type, int depth);

  const Program* program_;
  HerbrandStore store_;
  DeterminacyReport determinacy_;
  std::map<std::string, std::vector<std::vector<TermId>>> universe_by_depth_;
  std::unordered_map<AtomId, std::vector<GroundClause>> clause_cache_;
};

}  // namespace mli
