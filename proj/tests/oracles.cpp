#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

std::string print_term(const mli::TermPtr& t, const Env& env) {
  switch (t->kind) {
    case mli::Term::Kind::Variable: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw std::logic_error("oracle: unbound variable " + t->name);
      return it->second;
    }
    case mli::Term::Kind::Constant:
      return t->name;
    case mli::Term::Kind::Function: {
      std::string out = t->name + "(";
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ',';
        out += print_term(t->args[i], env);
      }
      return out + ")";
    }
  }
  throw std::logic_error("oracle: unknown term kind");
}

std::string print_atom(const mli::Formula& atom, const Env& env) {
  if (atom.kind != mli::Connective::Atom)
    throw std::logic_error("oracle: print_atom on a non-atom");
  if (atom.args.empty()) return atom.predicate;
  std::string out = atom.predicate + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += print_term(atom.args[i], env);
  }
  return out + ")";
}

namespace {

const std::vector<std::string>& constants_of(const mli::Signature& sig,
                                             const std::string& type) {
  auto it = sig.types.find(type);
  if (it == sig.types.end())
    throw std::logic_error("oracle: unknown type " + type);
  if (it->second.infinite)
    throw std::logic_error("oracle: cannot expand infinite type " + type);
  return it->second.constants;
}

}  // namespace

bool eval(const mli::Formula& f, const mli::Signature& sig, const World& world,
          const Env& env) {
  using C = mli::Connective;
  switch (f.kind) {
    case C::Atom: {
      const std::string key = print_atom(f, env);
      auto it = world.find(key);
      if (it == world.end())
        throw std::logic_error("oracle: atom missing from world: " + key);
      return it->second;
    }
    case C::Not:
      return !eval(*f.operands[0], sig, world, env);
    case C::And:
      return eval(*f.operands[0], sig, world, env) &&
             eval(*f.operands[1], sig, world, env);
    case C::Or:
      return eval(*f.operands[0], sig, world, env) ||
             eval(*f.operands[1], sig, world, env);
    case C::Implies:
      return !eval(*f.operands[0], sig, world, env) ||
             eval(*f.operands[1], sig, world, env);
    case C::Iff:
      return eval(*f.operands[0], sig, world, env) ==
             eval(*f.operands[1], sig, world, env);
    case C::Forall: {
      for (const auto& c : constants_of(sig, f.var_type)) {
        Env inner = env;
        inner[f.var] = c;
        if (!eval(*f.operands[0], sig, world, inner)) return false;
      }
      return true;
    }
    case C::Exists: {
      for (const auto& c : constants_of(sig, f.var_type)) {
        Env inner = env;
        inner[f.var] = c;
        if (eval(*f.operands[0], sig, world, inner)) return true;
      }
      return false;
    }
  }
  throw std::logic_error("oracle: unknown connective");
}

std::vector<std::string> finite_ground_atoms(const mli::Signature& sig) {
  std::vector<std::string> out;
  for (const auto& [name, decl] : sig.predicates) {
    // Odometer over the argument positions.
    std::vector<const std::vector<std::string>*> columns;
    for (const auto& t : decl.arg_types) columns.push_back(&constants_of(sig, t));
    if (columns.empty()) {
      out.push_back(name);
      continue;
    }
    std::vector<std::size_t> idx(columns.size(), 0);
    for (;;) {
      std::string text = name + "(";
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) text += ',';
        text += (*columns[i])[idx[i]];
      }
      out.push_back(text + ")");
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == columns[pos]->size()) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> terms_up_to_depth(const mli::Signature& sig,
                                           const std::string& type,
                                           int depth) {
  auto it = sig.types.find(type);
  if (it == sig.types.end())
    throw std::logic_error("oracle: unknown type " + type);
  std::set<std::string> terms(it->second.constants.begin(),
                              it->second.constants.end());
  // Keep applying every function until the requested depth; T(d) reuses all
  // of T(d-1) as argument material.
  std::map<std::string, std::set<std::string>> by_type;
  for (const auto& [tname, decl] : sig.types)
    by_type[tname] = {decl.constants.begin(), decl.constants.end()};
  for (int d = 1; d <= depth; ++d) {
    std::map<std::string, std::set<std::string>> next = by_type;
    for (const auto& [fname, fdecl] : sig.functions) {
      std::vector<std::vector<std::string>> columns;
      for (const auto& at : fdecl.arg_types) {
        columns.emplace_back(by_type[at].begin(), by_type[at].end());
      }
      if (std::any_of(columns.begin(), columns.end(),
                      [](const auto& col) { return col.empty(); }))
        continue;
      std::vector<std::size_t> idx(columns.size(), 0);
      for (;;) {
        std::string text = fname + "(";
        for (std::size_t i = 0; i < columns.size(); ++i) {
          if (i) text += ',';
          text += columns[i][idx[i]];
        }
        next[fdecl.return_type].insert(text + ")");
        std::size_t pos = 0;
        while (pos < idx.size() && ++idx[pos] == columns[pos].size()) {
          idx[pos] = 0;
          ++pos;
        }
        if (pos == idx.size()) break;
      }
    }
    by_type = std::move(next);
  }
  return {by_type[type].begin(), by_type[type].end()};
}

std::vector<GroundClauseInstance> ground_clause_instances(
    const mli::WeightedClause& c, std::size_t source,
    const mli::Signature& sig, int var_depth) {
  // Collect the clause's variables with their types, in first-seen order.
  std::vector<std::pair<std::string, std::string>> vars;
  std::set<std::string> seen;
  std::function<void(const mli::TermPtr&, const std::string&)> scan_term =
      [&](const mli::TermPtr& t, const std::string& expected) {
        if (t->kind == mli::Term::Kind::Variable) {
          if (seen.insert(t->name).second) vars.emplace_back(t->name, expected);
        } else if (t->kind == mli::Term::Kind::Function) {
          const auto& decl = sig.functions.at(t->name);
          for (std::size_t i = 0; i < t->args.size(); ++i)
            scan_term(t->args[i], decl.arg_types[i]);
        }
      };
  for (const auto& lit : c.literals) {
    const auto& decl = sig.predicates.at(lit.predicate);
    for (std::size_t i = 0; i < lit.args.size(); ++i)
      scan_term(lit.args[i], decl.arg_types[i]);
  }

  std::vector<std::vector<std::string>> columns;
  for (const auto& [name, type] : vars)
    columns.push_back(terms_up_to_depth(sig, type, var_depth));

  std::set<GroundClauseKey> merged;
  std::vector<GroundClauseInstance> out;
  std::vector<std::size_t> idx(columns.size(), 0);
  for (;;) {
    Env env;
    for (std::size_t i = 0; i < vars.size(); ++i)
      env[vars[i].first] = columns[i][idx[i]];
    GroundClauseInstance inst;
    inst.source = source;
    std::set<std::string> positives, negatives;
    for (const auto& lit : c.literals) {
      std::string text = lit.predicate;
      if (!lit.args.empty()) {
        text += '(';
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
          if (i) text += ',';
          text += print_term(lit.args[i], env);
        }
        text += ')';
      }
      inst.literals.insert({text, lit.positive});
      (lit.positive ? positives : negatives).insert(text);
    }
    for (const auto& p : positives)
      if (negatives.count(p)) inst.tautological = true;
    if (merged.insert(inst.literals).second) out.push_back(std::move(inst));

    if (columns.empty()) break;
    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == columns[pos].size()) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return out;
}

namespace {

bool clause_satisfied(const mli::VolumeClause& c, std::uint64_t config,
                      const mli::BoundaryAssignment& y) {
  for (const auto& lit : c.literals) {
    const bool value = lit.in_volume ? ((config >> lit.index) & 1) != 0
                                     : y.values[lit.index] != 0;
    if (value == lit.positive) return true;
  }
  return false;
}

}  // namespace

std::vector<double> conditional_table(const mli::Volume& v,
                                      const mli::BoundaryAssignment& y) {
  const std::size_t n = v.atoms.size();
  const std::uint64_t rows = std::uint64_t{1} << n;
  std::vector<long double> weights(rows);
  long double total = 0.0L;
  for (std::uint64_t cfg = 0; cfg < rows; ++cfg) {
    long double h = 0.0L;
    for (const auto& c : v.clauses)
      if (clause_satisfied(c, cfg, y)) h += static_cast<long double>(c.weight);
    weights[cfg] = std::exp(h);
    total += weights[cfg];
  }
  std::vector<double> out(rows);
  for (std::uint64_t cfg = 0; cfg < rows; ++cfg)
    out[cfg] = static_cast<double>(weights[cfg] / total);
  return out;
}

std::size_t satisfied_count(const mli::Volume& v, std::uint64_t config,
                            const mli::BoundaryAssignment& y) {
  std::size_t n = 0;
  for (const auto& c : v.clauses)
    if (clause_satisfied(c, config, y)) ++n;
  return n;
}

std::optional<std::vector<bool>> exhaustive_sat(const mli::TruncatedKB& kb) {
  const std::size_t n = kb.atoms.size();
  if (n > 20) throw std::logic_error("oracle: truncation too big to exhaust");
  std::map<mli::AtomId, std::size_t> position;
  for (std::size_t i = 0; i < n; ++i) position[kb.atoms[i]] = i;
  const std::uint64_t rows = std::uint64_t{1} << n;
  for (std::uint64_t cfg = 0; cfg < rows; ++cfg) {
    bool all = true;
    for (const auto& clause : kb.clauses) {
      bool sat = false;
      for (const auto& lit : clause) {
        const bool value = ((cfg >> position.at(lit.atom)) & 1) != 0;
        if (value == lit.positive) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) {
      std::vector<bool> model(n);
      for (std::size_t i = 0; i < n; ++i) model[i] = ((cfg >> i) & 1) != 0;
      return model;
    }
  }
  return std::nullopt;
}

}  // namespace oracle
