#include "mli/sat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mli/cnf.hpp"
#include "mli/errors.hpp"
#include "mli/format.hpp"

namespace mli {

TruncatedKB ground_truncation(Grounder& g, int depth) {
  const Program& p = g.program();
  g.require_sigma_determinate();
  for (std::size_t i = 0; i < p.formulas.size(); ++i) {
    if (!std::isinf(p.formulas[i].weight)) {
      throw RejectionError(
          "satisfiability analysis needs hard constraints only; formula " +
          std::to_string(i) + " has weight " +
          format_double(p.formulas[i].weight));
    }
  }

  const HerbrandStore& store = g.store();
  TruncatedKB kb;
  kb.depth = depth;
  std::set<std::vector<GroundLiteral>> seen;
  std::set<AtomId> atoms;

  for (const WeightedClause& clause : p.clauses) {
    std::map<std::string, std::string> vars;
    for (const Literal& lit : clause.literals) {
      auto collect = [&](const TermPtr& t, auto&& self) -> void {
        if (t->kind == Term::Kind::Variable) {
          vars.emplace(t->name, t->type);
          return;
        }
        for (const auto& a : t->args) self(a, self);
      };
      for (const auto& a : lit.args) collect(a, collect);
    }

    std::vector<std::string> names;
    std::vector<std::vector<TermId>> pools;
    for (const auto& [name, type] : vars) {
      names.push_back(name);
      pools.push_back(g.universe(type, depth));
    }
    if (std::any_of(pools.begin(), pools.end(),
                    [](const auto& p) { return p.empty(); }))
      continue;

    std::vector<std::size_t> idx(pools.size(), 0);
    for (;;) {
      std::map<std::string, TermId> bindings;
      for (std::size_t i = 0; i < names.size(); ++i)
        bindings[names[i]] = pools[i][idx[i]];

      std::vector<GroundLiteral> lits;
      bool within = true;
      for (const Literal& lit : clause.literals) {
        std::vector<TermId> args;
        args.reserve(lit.args.size());
        for (const auto& a : lit.args) args.push_back(g.ground_term(a, bindings));
        AtomId atom = g.store().intern_atom(lit.predicate, args);
        if (g.store().atom(atom).depth > depth) {
          within = false;
          break;
        }
        lits.push_back({atom, lit.positive});
      }
      if (within) {
        std::sort(lits.begin(), lits.end(),
                  [&](const GroundLiteral& a, const GroundLiteral& b) {
                    if (a.atom != b.atom)
                      return store.atom_text(a.atom) < store.atom_text(b.atom);
                    return a.positive < b.positive;
                  });
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        bool tautology = false;
        for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
          if (lits[i].atom == lits[i + 1].atom) {
            tautology = true;
            break;
          }
        }
        if (!tautology && seen.insert(lits).second) {
          for (const GroundLiteral& l : lits) atoms.insert(l.atom);
          kb.clauses.push_back(std::move(lits));
        }
      }

      std::size_t i = 0;
      for (; i < pools.size(); ++i) {
        if (++idx[i] < pools[i].size()) break;
        idx[i] = 0;
      }
      if (i == pools.size()) break;
    }
  }

  kb.atoms.assign(atoms.begin(), atoms.end());
  std::sort(kb.atoms.begin(), kb.atoms.end(), [&](AtomId a, AtomId b) {
    return store.atom_text(a) < store.atom_text(b);
  });
  return kb;
}

namespace {

// Depth-first search with unit propagation and chronological backtracking.
// free_count tracks unassigned variables per clause regardless of
// satisfaction, so undo is a plain reversal.
class Solver {
 public:
  explicit Solver(const TruncatedKB& kb) {
    for (std::size_t i = 0; i < kb.atoms.size(); ++i)
      var_of_.emplace(kb.atoms[i], static_cast<int>(i));
    value_.assign(kb.atoms.size(), -1);
    occ_.assign(kb.atoms.size() * 2, {});
    for (const auto& clause : kb.clauses) {
      const int ci = static_cast<int>(clauses_.size());
      std::vector<int> lits;
      for (const GroundLiteral& l : clause)
        lits.push_back(var_of_.at(l.atom) * 2 + (l.positive ? 1 : 0));
      for (int lit : lits) occ_[lit].push_back(ci);
      free_count_.push_back(static_cast<int>(lits.size()));
      sat_by_.push_back(-1);
      clauses_.push_back(std::move(lits));
    }
  }

  bool solve() {
    // Top-level units (and the empty clause, which cannot occur here but
    // would show up as free_count 0).
    std::vector<int> units;
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      if (free_count_[ci] == 0) return false;
      if (free_count_[ci] == 1) units.push_back(static_cast<int>(ci));
    }
    if (!propagate(units)) return false;
    return search();
  }

  bool value(int var) const { return value_[var] == 1; }
  bool assigned(int var) const { return value_[var] != -1; }

 private:
  bool assign(int var, int val, std::vector<int>& units) {
    value_[var] = val;
    trail_.push_back(var);
    for (int ci : occ_[var * 2 + val]) {
      if (sat_by_[ci] < 0) sat_by_[ci] = var;
    }
    bool ok = true;
    for (int ci : occ_[var * 2 + (1 - val)]) {
      --free_count_[ci];
      if (sat_by_[ci] >= 0) continue;
      if (free_count_[ci] == 0) ok = false;
      if (free_count_[ci] == 1) units.push_back(ci);
    }
    return ok;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const int var = trail_.back();
      trail_.pop_back();
      const int val = value_[var];
      value_[var] = -1;
      for (int ci : occ_[var * 2 + val]) {
        if (sat_by_[ci] == var) sat_by_[ci] = -1;
      }
      for (int ci : occ_[var * 2 + (1 - val)]) ++free_count_[ci];
    }
  }

  bool propagate(std::vector<int>& units) {
    for (std::size_t k = 0; k < units.size(); ++k) {
      const int ci = units[k];
      if (sat_by_[ci] >= 0 || free_count_[ci] != 1) continue;
      int lit = -1;
      for (int l : clauses_[ci]) {
        if (value_[l / 2] == -1) {
          lit = l;
          break;
        }
      }
      if (lit < 0) continue;  // raced with an earlier unit in this batch
      if (!assign(lit / 2, lit & 1, units)) return false;
    }
    return true;
  }

  bool search() {
    int var = -1;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      if (value_[i] == -1) {
        var = static_cast<int>(i);
        break;
      }
    }
    if (var < 0) return true;
    for (int val : {1, 0}) {
      const std::size_t mark = trail_.size();
      std::vector<int> units;
      if (assign(var, val, units) && propagate(units) && search()) return true;
      undo_to(mark);
    }
    return false;
  }

  std::map<AtomId, int> var_of_;
  std::vector<std::vector<int>> clauses_;  // literal = 2*var + polarity
  std::vector<std::vector<int>> occ_;
  std::vector<int> free_count_;
  std::vector<int> sat_by_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
};

}  // namespace

std::optional<SatModel> solve_ground(const TruncatedKB& kb) {
  Solver solver(kb);
  if (!solver.solve()) return std::nullopt;
  SatModel model;
  for (std::size_t i = 0; i < kb.atoms.size(); ++i) {
    // Variables the search never reached are free; fix them false.
    model.assignment.emplace_back(
        kb.atoms[i],
        solver.assigned(static_cast<int>(i)) && solver.value(static_cast<int>(i)));
  }
  return model;
}

bool model_satisfies(const TruncatedKB& kb, const SatModel& model) {
  std::map<AtomId, bool> values(model.assignment.begin(),
                                model.assignment.end());
  for (const auto& clause : kb.clauses) {
    bool sat = false;
    for (const GroundLiteral& l : clause) {
      auto it = values.find(l.atom);
      const bool v = it != values.end() && it->second;
      if (v == l.positive) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::string to_string(SatVerdict v) {
  return v == SatVerdict::UnsatisfiableCertified ? "unsatisfiable-certified"
                                                 : "satisfiable-up-to-depth";
}

SatReport check_satisfiable(Grounder& g, int max_depth) {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  SatReport report;
  for (int d = 0; d <= max_depth; ++d) {
    TruncatedKB kb = ground_truncation(g, d);
    auto model = solve_ground(kb);
    report.per_depth.push_back(
        {d, kb.atoms.size(), kb.clauses.size(), model.has_value()});
    if (!model) {
      report.verdict = SatVerdict::UnsatisfiableCertified;
      report.depth = d;
      report.model.clear();
      return report;
    }
    report.verdict = SatVerdict::SatisfiableUpToDepth;
    report.depth = d;
    report.model.clear();
    for (const auto& [atom, value] : model->assignment)
      report.model.emplace_back(g.store().atom_text(atom), value);
  }
  return report;
}

SatReport check_entailment(const Program& kb, const FormulaPtr& alpha,
                           int max_depth) {
  Program extended;
  extended.signature = kb.signature;
  extended.formulas = kb.formulas;
  extended.formulas.push_back(
      {std::numeric_limits<double>::infinity(), Formula::negation(alpha)});
  compile_clauses(extended);
  Grounder g(extended);
  return check_satisfiable(g, max_depth);
}

LimitDistribution limit_conditional(const Volume& v,
                                    const BoundaryAssignment& boundary,
                                    std::size_t max_atoms) {
  for (const VolumeClause& c : v.clauses) {
    if (!(std::isinf(c.weight) && c.weight > 0)) {
      throw RejectionError(
          "the limit conditional applies when every weight is infinite; "
          "clause " +
          std::to_string(c.source) + " has weight " + format_double(c.weight));
    }
  }
  if (boundary.values.size() != v.boundary_atoms.size())
    throw std::invalid_argument("boundary assignment does not fit the volume");
  if (v.atoms.size() > max_atoms) {
    throw RejectionError("limit conditional over " +
                         std::to_string(v.atoms.size()) +
                         " atoms exceeds the cap of " +
                         std::to_string(max_atoms));
  }

  const std::uint64_t n = std::uint64_t{1} << v.atoms.size();
  std::vector<std::size_t> satisfied(n, 0);
  std::size_t best = 0;
  for (std::uint64_t config = 0; config < n; ++config) {
    std::size_t count = 0;
    for (const VolumeClause& c : v.clauses) {
      bool sat = false;
      for (const VolumeLit& lit : c.literals) {
        const bool value = lit.in_volume ? ((config >> lit.index) & 1) != 0
                                         : boundary.values[lit.index] != 0;
        if (value == lit.positive) {
          sat = true;
          break;
        }
      }
      if (sat) ++count;
    }
    satisfied[config] = count;
    best = std::max(best, count);
  }

  LimitDistribution out;
  out.atoms = v.atoms;
  out.max_satisfied = best;
  out.probabilities.assign(n, 0.0);
  std::size_t support = 0;
  for (std::uint64_t config = 0; config < n; ++config)
    if (satisfied[config] == best) ++support;
  for (std::uint64_t config = 0; config < n; ++config) {
    if (satisfied[config] == best)
      out.probabilities[config] = 1.0 / static_cast<double>(support);
  }
  return out;
}

}  // namespace mli
