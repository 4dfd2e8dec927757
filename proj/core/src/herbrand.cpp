#include "mli/herbrand.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <set>
#include <stdexcept>

#include "mli/errors.hpp"

namespace mli {

// ---- HerbrandStore ----

TermId HerbrandStore::intern_term(const TermPtr& ground) {
  if (ground->kind == Term::Kind::Variable)
    throw std::logic_error("cannot intern a non-ground term");
  std::vector<TermId> args;
  args.reserve(ground->args.size());
  for (const auto& a : ground->args) args.push_back(intern_term(a));
  return intern_term_parts(ground->name, args, ground->type);
}

TermId HerbrandStore::intern_term_parts(const std::string& head,
                                         const std::vector<TermId>& args,
                                         const std::string& type) {
  std::string text = head;
  if (!args.empty()) {
    text += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) text += ',';
      text += terms_[args[i]].text;
    }
    text += ')';
  }
  {
    std::shared_lock lock(mutex_);
    auto it = term_index_.find(text);
    if (it != term_index_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] =
      term_index_.emplace(text, static_cast<TermId>(terms_.size()));
  if (!inserted) return it->second;
  GroundTerm t;
  t.head = head;
  t.args = args;
  t.type = type;
  for (TermId a : args) t.depth = std::max(t.depth, terms_[a].depth + 1);
  t.text = std::move(text);
  terms_.push_back(std::move(t));
  return it->second;
}

AtomId HerbrandStore::intern_atom(const std::string& predicate,
                                  const std::vector<TermId>& args) {
  std::string text = predicate;
  if (!args.empty()) {
    std::shared_lock lock(mutex_);
    text += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) text += ',';
      text += terms_[args[i]].text;
    }
    text += ')';
  }
  {
    std::shared_lock lock(mutex_);
    auto it = atom_index_.find(text);
    if (it != atom_index_.end()) return it->second;
  }
  std::unique_lock lock(mutex_);
  auto [it, inserted] =
      atom_index_.emplace(text, static_cast<AtomId>(atoms_.size()));
  if (!inserted) return it->second;
  GroundAtom a;
  a.predicate = predicate;
  a.args = args;
  for (TermId t : args) a.depth = std::max(a.depth, terms_[t].depth);
  a.text = std::move(text);
  atoms_.push_back(std::move(a));
  return it->second;
}

AtomId HerbrandStore::intern_atom(const FormulaPtr& ground_atom) {
  if (ground_atom->kind != Connective::Atom)
    throw std::logic_error("expected an atom");
  std::vector<TermId> args;
  args.reserve(ground_atom->args.size());
  for (const auto& a : ground_atom->args) args.push_back(intern_term(a));
  return intern_atom(ground_atom->predicate, args);
}

std::size_t HerbrandStore::term_count() const {
  std::shared_lock lock(mutex_);
  return terms_.size();
}

std::size_t HerbrandStore::atom_count() const {
  std::shared_lock lock(mutex_);
  return atoms_.size();
}

// ---- sigma-determinacy ----

namespace {

void term_variables(const TermPtr& t,
                    std::map<std::string, std::string>& vars) {
  if (t->kind == Term::Kind::Variable) {
    vars.emplace(t->name, t->type);
    return;
  }
  for (const auto& a : t->args) term_variables(a, vars);
}

std::map<std::string, std::string> literal_variables(const Literal& lit) {
  std::map<std::string, std::string> vars;
  for (const auto& a : lit.args) term_variables(a, vars);
  return vars;
}

}  // namespace

DeterminacyReport check_sigma_determinate(const Program& p) {
  if (!p.compiled)
    throw std::logic_error("compile_clauses must run before determinacy");
  DeterminacyReport report;
  for (const auto& clause : p.clauses) {
    std::vector<std::map<std::string, std::string>> per_literal;
    per_literal.reserve(clause.literals.size());
    std::map<std::string, std::string> all_vars;
    for (const auto& lit : clause.literals) {
      per_literal.push_back(literal_variables(lit));
      all_vars.insert(per_literal.back().begin(), per_literal.back().end());
    }
    ClauseDeterminacy cd;
    for (const auto& [name, type] : all_vars) {
      if (!p.signature.is_infinite_type(type)) continue;
      for (const auto& lit_vars : per_literal) {
        if (!lit_vars.count(name)) {
          cd.violating_variables.push_back(name);
          cd.determinate = false;
          break;
        }
      }
    }
    report.determinate = report.determinate && cd.determinate;
    report.clauses.push_back(std::move(cd));
  }

  // Any atom matches a given literal in at most one way; the remaining
  // finite variables range over their constants.
  for (const auto& clause : p.clauses) {
    std::map<std::string, std::string> all_vars;
    for (const auto& lit : clause.literals) {
      auto lv = literal_variables(lit);
      all_vars.insert(lv.begin(), lv.end());
    }
    for (const auto& lit : clause.literals) {
      auto bound = literal_variables(lit);
      std::uint64_t combos = 1;
      for (const auto& [name, type] : all_vars) {
        if (bound.count(name)) continue;
        if (p.signature.is_infinite_type(type)) continue;
        auto it = p.signature.types.find(type);
        if (it != p.signature.types.end())
          combos *= it->second.constants.size();
      }
      report.clause_bound += combos;
    }
  }
  return report;
}

// ---- Grounder ----

Grounder::Grounder(const Program& p)
    : program_(&p), determinacy_(check_sigma_determinate(p)) {}

void Grounder::require_sigma_determinate() const {
  if (determinacy_.determinate) return;
  std::string msg = "program is not sigma-determinate:";
  for (std::size_t i = 0; i < determinacy_.clauses.size(); ++i) {
    const auto& cd = determinacy_.clauses[i];
    if (cd.determinate) continue;
    msg += " clause " + std::to_string(i) + " (" +
           to_string(program_->clauses[i]) + ") has infinite-domain variable(s)";
    for (const auto& v : cd.violating_variables) msg += " '" + v + "'";
    msg += " missing from some literal;";
  }
  msg.pop_back();
  throw RejectionError(msg);
}

const std::vector<TermId>& Grounder::terms_at_depth(const std::string& type,
                                                    int depth) {
  auto& buckets = universe_by_depth_[type];
  while (static_cast<int>(buckets.size()) <= depth) {
    int d = static_cast<int>(buckets.size());
    std::vector<TermId> bucket;
    if (d == 0) {
      auto tit = program_->signature.types.find(type);
      assert(tit != program_->signature.types.end());
      for (const auto& c : tit->second.constants)
        bucket.push_back(store_.intern_term_parts(c, {}, type));
    } else {
      for (const FunctionDecl* fn :
           program_->signature.generators_of(type)) {
        // Argument tuples with maximum argument depth exactly d-1.
        std::vector<std::vector<TermId>> pools;
        for (const auto& at : fn->arg_types) {
          std::vector<TermId> pool;
          for (int k = 0; k < d; ++k) {
            const auto& b = terms_at_depth(at, k);
            pool.insert(pool.end(), b.begin(), b.end());
          }
          pools.push_back(std::move(pool));
        }
        bool empty = std::any_of(pools.begin(), pools.end(),
                                 [](const auto& p) { return p.empty(); });
        if (empty) continue;
        std::vector<std::size_t> idx(pools.size(), 0);
        for (;;) {
          int max_depth = 0;
          std::vector<TermId> args(pools.size());
          for (std::size_t i = 0; i < pools.size(); ++i) {
            args[i] = pools[i][idx[i]];
            max_depth = std::max(max_depth, store_.terms_[args[i]].depth);
          }
          if (max_depth == d - 1)
            bucket.push_back(
                store_.intern_term_parts(fn->name, args, type));
          std::size_t i = 0;
          for (; i < pools.size(); ++i) {
            if (++idx[i] < pools[i].size()) break;
            idx[i] = 0;
          }
          if (i == pools.size()) break;
        }
      }
    }
    std::sort(bucket.begin(), bucket.end(), [&](TermId a, TermId b) {
      return store_.term_text(a) < store_.term_text(b);
    });
    buckets.push_back(std::move(bucket));
  }
  return buckets[depth];
}

std::vector<TermId> Grounder::universe(const std::string& type, int max_depth) {
  if (!program_->signature.types.count(type))
    throw std::invalid_argument("unknown type '" + type + "'");
  std::vector<TermId> out;
  for (int d = 0; d <= max_depth; ++d) {
    const auto& bucket = terms_at_depth(type, d);
    out.insert(out.end(), bucket.begin(), bucket.end());
  }
  return out;
}

std::vector<AtomId> Grounder::atoms_up_to_depth(int max_depth) {
  std::vector<AtomId> out;
  for (const auto& [name, pred] : program_->signature.predicates) {
    if (pred.arg_types.empty()) {
      out.push_back(store_.intern_atom(name, {}));
      continue;
    }
    std::vector<std::vector<TermId>> pools;
    for (const auto& at : pred.arg_types) pools.push_back(universe(at, max_depth));
    if (std::any_of(pools.begin(), pools.end(),
                    [](const auto& p) { return p.empty(); }))
      continue;
    std::vector<std::size_t> idx(pools.size(), 0);
    for (;;) {
      std::vector<TermId> args(pools.size());
      for (std::size_t i = 0; i < pools.size(); ++i) args[i] = pools[i][idx[i]];
      out.push_back(store_.intern_atom(name, args));
      std::size_t i = 0;
      for (; i < pools.size(); ++i) {
        if (++idx[i] < pools[i].size()) break;
        idx[i] = 0;
      }
      if (i == pools.size()) break;
    }
  }
  std::sort(out.begin(), out.end(), [&](AtomId a, AtomId b) {
    const auto& ga = store_.atom(a);
    const auto& gb = store_.atom(b);
    if (ga.depth != gb.depth) return ga.depth < gb.depth;
    return ga.text < gb.text;
  });
  return out;
}

AtomId Grounder::intern_atom(const FormulaPtr& ground_atom) {
  return store_.intern_atom(ground_atom);
}

namespace {

bool match_term(const HerbrandStore& store, const TermPtr& pattern,
                TermId subject, std::map<std::string, TermId>& bindings) {
  const GroundTerm& t = store.term(subject);
  switch (pattern->kind) {
    case Term::Kind::Variable: {
      auto [it, inserted] = bindings.emplace(pattern->name, subject);
      return inserted || it->second == subject;
    }
    case Term::Kind::Constant:
      return t.args.empty() && t.head == pattern->name;
    case Term::Kind::Function: {
      if (t.head != pattern->name || t.args.size() != pattern->args.size())
        return false;
      for (std::size_t i = 0; i < pattern->args.size(); ++i)
        if (!match_term(store, pattern->args[i], t.args[i], bindings))
          return false;
      return true;
    }
  }
  return false;
}

}  // namespace

TermId Grounder::ground_term(const TermPtr& t,
                             const std::map<std::string, TermId>& bindings) {
  switch (t->kind) {
    case Term::Kind::Variable:
      return bindings.at(t->name);
    case Term::Kind::Constant:
      return store_.intern_term_parts(t->name, {}, t->type);
    case Term::Kind::Function: {
      std::vector<TermId> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(ground_term(a, bindings));
      return store_.intern_term_parts(t->name, args, t->type);
    }
  }
  return 0;
}

const std::vector<GroundClause>& Grounder::clauses_containing(AtomId atom) {
  require_sigma_determinate();
  auto cached = clause_cache_.find(atom);
  if (cached != clause_cache_.end()) return cached->second;

  const GroundAtom ga = store_.atom(atom);  // copy; store may grow below
  std::vector<GroundClause> result;
  std::set<std::pair<std::size_t, std::vector<GroundLiteral>>> seen;

  for (std::size_t j = 0; j < program_->clauses.size(); ++j) {
    const WeightedClause& clause = program_->clauses[j];
    std::map<std::string, std::string> clause_vars;
    for (const auto& lit : clause.literals) {
      auto lv = literal_variables(lit);
      clause_vars.insert(lv.begin(), lv.end());
    }
    for (const auto& lit : clause.literals) {
      if (lit.predicate != ga.predicate ||
          lit.args.size() != ga.args.size())
        continue;
      std::map<std::string, TermId> bindings;
      bool ok = true;
      for (std::size_t i = 0; i < lit.args.size() && ok; ++i)
        ok = match_term(store_, lit.args[i], ga.args[i], bindings);
      if (!ok) continue;

      // Sigma-determinacy bound every infinite-domain variable; what is
      // left ranges over finite constants.
      std::vector<std::pair<std::string, const DomainType*>> open;
      for (const auto& [name, type] : clause_vars) {
        if (bindings.count(name)) continue;
        const DomainType& ty = program_->signature.types.at(type);
        assert(!ty.infinite);
        open.emplace_back(name, &ty);
      }
      std::vector<std::size_t> idx(open.size(), 0);
      for (;;) {
        auto full = bindings;
        for (std::size_t i = 0; i < open.size(); ++i) {
          full[open[i].first] = store_.intern_term_parts(
              open[i].second->constants[idx[i]], {}, open[i].second->name);
        }
        std::vector<GroundLiteral> lits;
        for (const auto& l : clause.literals) {
          std::vector<TermId> args;
          args.reserve(l.args.size());
          for (const auto& a : l.args) args.push_back(ground_term(a, full));
          lits.push_back({store_.intern_atom(l.predicate, args), l.positive});
        }
        std::sort(lits.begin(), lits.end(),
                  [&](const GroundLiteral& a, const GroundLiteral& b) {
                    if (a.atom != b.atom)
                      return store_.atom_text(a.atom) < store_.atom_text(b.atom);
                    return a.positive < b.positive;
                  });
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        if (seen.emplace(j, lits).second) {
          GroundClause gc;
          gc.source = j;
          gc.weight = clause.weight;
          std::set<AtomId> uniq;
          for (const auto& l : lits) uniq.insert(l.atom);
          gc.distinct_atoms = uniq.size();
          gc.literals = std::move(lits);
          result.push_back(std::move(gc));
        }
        std::size_t i = 0;
        for (; i < open.size(); ++i) {
          if (++idx[i] < open[i].second->constants.size()) break;
          idx[i] = 0;
        }
        if (i == open.size()) break;
      }
    }
  }

  std::sort(result.begin(), result.end(),
            [&](const GroundClause& a, const GroundClause& b) {
              if (a.source != b.source) return a.source < b.source;
              const std::size_t n = std::min(a.literals.size(), b.literals.size());
              for (std::size_t i = 0; i < n; ++i) {
                const auto& ta = store_.atom_text(a.literals[i].atom);
                const auto& tb = store_.atom_text(b.literals[i].atom);
                if (ta != tb) return ta < tb;
                if (a.literals[i].positive != b.literals[i].positive)
                  return a.literals[i].positive < b.literals[i].positive;
              }
              return a.literals.size() < b.literals.size();
            });
  return clause_cache_.emplace(atom, std::move(result)).first->second;
}

std::vector<AtomId> Grounder::neighbors(AtomId atom) {
  std::set<AtomId> uniq;
  for (const auto& gc : clauses_containing(atom))
    for (const auto& lit : gc.literals)
      if (lit.atom != atom) uniq.insert(lit.atom);
  std::vector<AtomId> out(uniq.begin(), uniq.end());
  std::sort(out.begin(), out.end(), [&](AtomId a, AtomId b) {
    return store_.atom_text(a) < store_.atom_text(b);
  });
  return out;
}

}  // namespace mli
