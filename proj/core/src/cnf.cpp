#include "mli/cnf.hpp"

#include <set>
#include <span>

#include "mli/errors.hpp"

namespace mli {

namespace {

// Rewrites <=> and => in terms of !, &, |. Equivalence duplicates its
// operands, so binders may appear twice afterwards; rename_binders_apart
// repairs that before prenexing.
FormulaPtr eliminate_connectives(const FormulaPtr& f) {
  switch (f->kind) {
    case Connective::Atom:
      return f;
    case Connective::Not:
      return Formula::negation(eliminate_connectives(f->operands[0]));
    case Connective::And:
      return Formula::conjunction(eliminate_connectives(f->operands[0]),
                                  eliminate_connectives(f->operands[1]));
    case Connective::Or:
      return Formula::disjunction(eliminate_connectives(f->operands[0]),
                                  eliminate_connectives(f->operands[1]));
    case Connective::Implies: {
      auto a = eliminate_connectives(f->operands[0]);
      auto b = eliminate_connectives(f->operands[1]);
      return Formula::disjunction(Formula::negation(std::move(a)), std::move(b));
    }
    case Connective::Iff: {
      auto a = eliminate_connectives(f->operands[0]);
      auto b = eliminate_connectives(f->operands[1]);
      return Formula::conjunction(
          Formula::disjunction(Formula::negation(a), b),
          Formula::disjunction(Formula::negation(b), a));
    }
    case Connective::Forall:
      return Formula::forall(f->var, f->var_type,
                             eliminate_connectives(f->operands[0]));
    case Connective::Exists:
      return Formula::exists(f->var, f->var_type,
                             eliminate_connectives(f->operands[0]));
  }
  return f;
}

FormulaPtr to_nnf(const FormulaPtr& f, bool positive) {
  switch (f->kind) {
    case Connective::Atom:
      return positive ? f : Formula::negation(f);
    case Connective::Not:
      return to_nnf(f->operands[0], !positive);
    case Connective::And: {
      auto a = to_nnf(f->operands[0], positive);
      auto b = to_nnf(f->operands[1], positive);
      return positive ? Formula::conjunction(std::move(a), std::move(b))
                      : Formula::disjunction(std::move(a), std::move(b));
    }
    case Connective::Or: {
      auto a = to_nnf(f->operands[0], positive);
      auto b = to_nnf(f->operands[1], positive);
      return positive ? Formula::disjunction(std::move(a), std::move(b))
                      : Formula::conjunction(std::move(a), std::move(b));
    }
    case Connective::Forall: {
      auto body = to_nnf(f->operands[0], positive);
      return positive ? Formula::forall(f->var, f->var_type, std::move(body))
                      : Formula::exists(f->var, f->var_type, std::move(body));
    }
    case Connective::Exists: {
      auto body = to_nnf(f->operands[0], positive);
      return positive ? Formula::exists(f->var, f->var_type, std::move(body))
                      : Formula::forall(f->var, f->var_type, std::move(body));
    }
    default:
      break;
  }
  // Implies/Iff are gone by now.
  return f;
}

class NameGen {
 public:
  void reserve(const std::string& name) { used_.insert(name); }

  std::string fresh(const std::string& base) {
    std::string name = base;
    int suffix = 2;
    while (used_.count(name)) name = base + "_" + std::to_string(suffix++);
    used_.insert(name);
    return name;
  }

 private:
  std::set<std::string> used_;
};

void collect_names(const FormulaPtr& f, NameGen& gen) {
  auto visit_term = [&](const TermPtr& t, auto&& self) -> void {
    if (t->kind == Term::Kind::Variable) gen.reserve(t->name);
    for (const auto& a : t->args) self(a, self);
  };
  if (f->kind == Connective::Atom) {
    for (const auto& a : f->args) visit_term(a, visit_term);
    return;
  }
  if (f->kind == Connective::Forall || f->kind == Connective::Exists)
    gen.reserve(f->var);
  for (const auto& op : f->operands) collect_names(op, gen);
}

// Gives every binder a globally unique name. `seen` tracks binder names
// already emitted; occurrences are rewritten through `renames`.
FormulaPtr rename_binders(const FormulaPtr& f, NameGen& gen,
                          std::set<std::string>& seen, Substitution& renames) {
  switch (f->kind) {
    case Connective::Atom:
      return renames.empty() ? f : substitute(f, renames);
    case Connective::Forall:
    case Connective::Exists: {
      std::string name = f->var;
      bool renamed = false;
      if (seen.count(name)) {
        name = gen.fresh(f->var);
        renamed = true;
      }
      seen.insert(name);
      TermPtr saved;
      if (renamed) {
        auto it = renames.find(f->var);
        if (it != renames.end()) saved = it->second;
        renames[f->var] = Term::variable(name, f->var_type);
      }
      auto body = rename_binders(f->operands[0], gen, seen, renames);
      if (renamed) {
        if (saved)
          renames[f->var] = saved;
        else
          renames.erase(f->var);
      }
      return f->kind == Connective::Forall
                 ? Formula::forall(name, f->var_type, std::move(body))
                 : Formula::exists(name, f->var_type, std::move(body));
    }
    default: {
      std::vector<FormulaPtr> ops;
      ops.reserve(f->operands.size());
      for (const auto& op : f->operands)
        ops.push_back(rename_binders(op, gen, seen, renames));
      auto g = std::make_shared<Formula>(*f);
      g->operands = std::move(ops);
      return g;
    }
  }
}

struct PrefixEntry {
  bool universal;
  std::string var;
  std::string type;
};

// Hoists quantifiers in traversal order. Binders are unique by now, so no
// capture is possible.
FormulaPtr split_prenex(const FormulaPtr& f, std::vector<PrefixEntry>& prefix) {
  switch (f->kind) {
    case Connective::Forall:
    case Connective::Exists:
      prefix.push_back({f->kind == Connective::Forall, f->var, f->var_type});
      return split_prenex(f->operands[0], prefix);
    case Connective::And:
    case Connective::Or: {
      auto a = split_prenex(f->operands[0], prefix);
      auto b = split_prenex(f->operands[1], prefix);
      return f->kind == Connective::And
                 ? Formula::conjunction(std::move(a), std::move(b))
                 : Formula::disjunction(std::move(a), std::move(b));
    }
    default:
      return f;
  }
}

void collect_universals(std::span<const PrefixEntry> prefix,
                        std::vector<const PrefixEntry*>& out) {
  for (const auto& e : prefix)
    if (e.universal) out.push_back(&e);
}

// Turns the quantifier prefix into an open formula, outermost entry first.
// A universal variable simply stays free. A finite existential becomes a
// disjunction over the type's constants; the copies get their inner
// universal variables renamed apart, which keeps the disjunction of
// universally closed disjuncts equivalent to the single implicitly closed
// result.
FormulaPtr expand_prefix(std::span<const PrefixEntry> prefix, FormulaPtr matrix,
                         const Signature& sig, NameGen& gen) {
  if (prefix.empty()) return matrix;
  const PrefixEntry& head = prefix.front();
  auto rest = prefix.subspan(1);
  if (head.universal) return expand_prefix(rest, std::move(matrix), sig, gen);

  auto tit = sig.types.find(head.type);
  if (tit == sig.types.end() || tit->second.infinite) {
    throw RejectionError(
        "existential quantifier over infinite type '" + head.type +
        "' cannot be expanded; only existentials over finite types are "
        "supported");
  }
  std::vector<const PrefixEntry*> inner_universals;
  collect_universals(rest, inner_universals);

  FormulaPtr result;
  for (const auto& constant : tit->second.constants) {
    Substitution bind;
    bind[head.var] = Term::constant(constant, head.type);
    auto copy = expand_prefix(rest, substitute(matrix, bind), sig, gen);
    if (!inner_universals.empty()) {
      Substitution fresh;
      for (const PrefixEntry* e : inner_universals)
        fresh[e->var] = Term::variable(gen.fresh(e->var), e->type);
      copy = substitute(copy, fresh);
    }
    result = result ? Formula::disjunction(std::move(result), std::move(copy))
                    : std::move(copy);
  }
  return result;
}

using LitVec = std::vector<Literal>;

Literal literal_of(const FormulaPtr& f) {
  if (f->kind == Connective::Atom) return {true, f->predicate, f->args};
  return {false, f->operands[0]->predicate, f->operands[0]->args};
}

// Distributes an open NNF formula into clause form, failing once the
// clause count passes the limit.
std::vector<LitVec> distribute(const FormulaPtr& f, std::size_t max_clauses) {
  switch (f->kind) {
    case Connective::Atom:
    case Connective::Not:
      return {{literal_of(f)}};
    case Connective::And: {
      auto a = distribute(f->operands[0], max_clauses);
      auto b = distribute(f->operands[1], max_clauses);
      if (a.size() + b.size() > max_clauses)
        throw RejectionError("clause form exceeds " +
                             std::to_string(max_clauses) +
                             " clauses for one formula");
      a.insert(a.end(), std::make_move_iterator(b.begin()),
               std::make_move_iterator(b.end()));
      return a;
    }
    case Connective::Or: {
      auto a = distribute(f->operands[0], max_clauses);
      auto b = distribute(f->operands[1], max_clauses);
      if (!b.empty() && a.size() > max_clauses / b.size())
        throw RejectionError("clause form exceeds " +
                             std::to_string(max_clauses) +
                             " clauses for one formula");
      std::vector<LitVec> out;
      out.reserve(a.size() * b.size());
      for (const auto& ca : a) {
        for (const auto& cb : b) {
          LitVec merged = ca;
          merged.insert(merged.end(), cb.begin(), cb.end());
          out.push_back(std::move(merged));
        }
      }
      return out;
    }
    default:
      throw RejectionError("unexpected connective in open matrix");
  }
}

struct OpenCnf {
  std::vector<LitVec> clauses;
  std::size_t tautologies_dropped = 0;
};

bool complementary(const Literal& a, const Literal& b) {
  if (a.positive == b.positive || a.predicate != b.predicate) return false;
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(a.args[i], b.args[i])) return false;
  return true;
}

OpenCnf canonicalize(std::vector<LitVec> raw) {
  OpenCnf out;
  for (auto& clause : raw) {
    LitVec lits;
    bool tautology = false;
    for (auto& lit : clause) {
      bool dup = false;
      for (const auto& kept : lits) {
        if (equal(kept, lit)) {
          dup = true;
          break;
        }
        if (complementary(kept, lit)) {
          tautology = true;
          break;
        }
      }
      if (tautology) break;
      if (!dup) lits.push_back(std::move(lit));
    }
    if (tautology) {
      ++out.tautologies_dropped;
      continue;
    }
    out.clauses.push_back(std::move(lits));
  }
  return out;
}

OpenCnf open_clause_form(const FormulaPtr& f, const Signature& sig,
                         const CnfOptions& opts) {
  auto nnf = to_nnf(eliminate_connectives(f), true);
  NameGen gen;
  collect_names(nnf, gen);
  std::set<std::string> seen;
  Substitution renames;
  auto renamed = rename_binders(nnf, gen, seen, renames);
  std::vector<PrefixEntry> prefix;
  auto matrix = split_prenex(renamed, prefix);
  auto open = expand_prefix(prefix, std::move(matrix), sig, gen);
  return canonicalize(distribute(open, opts.max_clauses_per_formula));
}

FormulaPtr clause_to_formula(const LitVec& clause) {
  FormulaPtr out;
  for (const auto& lit : clause) {
    FormulaPtr l = Formula::atom(lit.predicate, lit.args);
    if (!lit.positive) l = Formula::negation(std::move(l));
    out = out ? Formula::disjunction(std::move(out), std::move(l))
              : std::move(l);
  }
  return out;
}

}  // namespace

FormulaPtr to_prenex_cnf(const FormulaPtr& f, const Signature& sig,
                         const CnfOptions& opts) {
  (void)sig;
  auto nnf = to_nnf(eliminate_connectives(f), true);
  NameGen gen;
  collect_names(nnf, gen);
  std::set<std::string> seen;
  Substitution renames;
  auto renamed = rename_binders(nnf, gen, seen, renames);
  std::vector<PrefixEntry> prefix;
  auto matrix = split_prenex(renamed, prefix);
  auto cnf = canonicalize(distribute(matrix, opts.max_clauses_per_formula));
  FormulaPtr out;
  for (const auto& clause : cnf.clauses) {
    auto c = clause_to_formula(clause);
    out = out ? Formula::conjunction(std::move(out), std::move(c))
              : std::move(c);
  }
  if (!out) return nullptr;  // every clause was a tautology
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
    out = it->universal ? Formula::forall(it->var, it->type, std::move(out))
                        : Formula::exists(it->var, it->type, std::move(out));
  }
  return out;
}

FormulaPtr expand_finite_existentials(const FormulaPtr& f, const Signature& sig,
                                      const CnfOptions& opts) {
  auto cnf = open_clause_form(f, sig, opts);
  FormulaPtr out;
  for (const auto& clause : cnf.clauses) {
    auto c = clause_to_formula(clause);
    out = out ? Formula::conjunction(std::move(out), std::move(c))
              : std::move(c);
  }
  return out;  // null when every clause was a tautology
}

const std::vector<WeightedClause>& compile_clauses(Program& p,
                                                   const CnfOptions& opts) {
  if (p.compiled) return p.clauses;
  for (std::size_t i = 0; i < p.formulas.size(); ++i) {
    const auto& wf = p.formulas[i];
    auto cnf = open_clause_form(wf.formula, p.signature, opts);
    if (cnf.tautologies_dropped > 0) {
      p.warnings.push_back("formula " + std::to_string(i) + " (" +
                           to_string(*wf.formula) + "): dropped " +
                           std::to_string(cnf.tautologies_dropped) +
                           " tautological clause(s)");
    }
    if (cnf.clauses.empty()) {
      p.warnings.push_back("formula " + std::to_string(i) + " (" +
                           to_string(*wf.formula) +
                           "): no clauses remain; the formula is vacuous");
      continue;
    }
    const double share = wf.weight / static_cast<double>(cnf.clauses.size());
    for (auto& clause : cnf.clauses) {
      WeightedClause wc;
      wc.literals = std::move(clause);
      wc.weight = share;
      wc.origin = i;
      p.clauses.push_back(std::move(wc));
    }
  }
  p.compiled = true;
  return p.clauses;
}

}  // namespace mli
