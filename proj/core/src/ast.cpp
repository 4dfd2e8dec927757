#include "mli/ast.hpp"

#include <algorithm>
#include <cassert>

namespace mli {

TermPtr Term::variable(std::string name, std::string type) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Variable;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}

TermPtr Term::constant(std::string name, std::string type) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Constant;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}

TermPtr Term::function(std::string name, std::string type,
                       std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Function;
  t->name = std::move(name);
  t->type = std::move(type);
  t->args = std::move(args);
  return t;
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->type != b->type ||
      a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

bool is_ground(const TermPtr& t) {
  if (t->kind == Term::Kind::Variable) return false;
  return std::all_of(t->args.begin(), t->args.end(),
                     [](const TermPtr& a) { return is_ground(a); });
}

int term_depth(const TermPtr& t) {
  int d = 0;
  for (const auto& a : t->args) d = std::max(d, term_depth(a) + 1);
  return d;
}

static void print_term(const Term& t, std::string& out) {
  out += t.name;
  if (t.kind == Term::Kind::Function) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ',';
      print_term(*t.args[i], out);
    }
    out += ')';
  }
}

std::string to_string(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const Substitution& s) {
  switch (t->kind) {
    case Term::Kind::Variable: {
      auto it = s.find(t->name);
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Function: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        args.push_back(substitute(a, s));
        changed = changed || args.back() != a;
      }
      if (!changed) return t;
      return Term::function(t->name, t->type, std::move(args));
    }
  }
  return t;
}

FormulaPtr Formula::atom(std::string predicate, std::vector<TermPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = Connective::Atom;
  f->predicate = std::move(predicate);
  f->args = std::move(args);
  return f;
}

FormulaPtr Formula::negation(FormulaPtr f) {
  auto g = std::make_shared<Formula>();
  g->kind = Connective::Not;
  g->operands = {std::move(f)};
  return g;
}

static FormulaPtr binary(Connective kind, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->operands = {std::move(a), std::move(b)};
  return f;
}

FormulaPtr Formula::conjunction(FormulaPtr a, FormulaPtr b) {
  return binary(Connective::And, std::move(a), std::move(b));
}
FormulaPtr Formula::disjunction(FormulaPtr a, FormulaPtr b) {
  return binary(Connective::Or, std::move(a), std::move(b));
}
FormulaPtr Formula::implication(FormulaPtr a, FormulaPtr b) {
  return binary(Connective::Implies, std::move(a), std::move(b));
}
FormulaPtr Formula::equivalence(FormulaPtr a, FormulaPtr b) {
  return binary(Connective::Iff, std::move(a), std::move(b));
}

static FormulaPtr quantifier(Connective kind, std::string var,
                             std::string var_type, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->var = std::move(var);
  f->var_type = std::move(var_type);
  f->operands = {std::move(body)};
  return f;
}

FormulaPtr Formula::forall(std::string var, std::string var_type,
                           FormulaPtr body) {
  return quantifier(Connective::Forall, std::move(var), std::move(var_type),
                    std::move(body));
}
FormulaPtr Formula::exists(std::string var, std::string var_type,
                           FormulaPtr body) {
  return quantifier(Connective::Exists, std::move(var), std::move(var_type),
                    std::move(body));
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->predicate != b->predicate || a->var != b->var ||
      a->var_type != b->var_type)
    return false;
  if (a->args.size() != b->args.size() ||
      a->operands.size() != b->operands.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  for (std::size_t i = 0; i < a->operands.size(); ++i)
    if (!equal(a->operands[i], b->operands[i])) return false;
  return true;
}

namespace {

// Binding strength; higher binds tighter. Quantifiers extend maximally to
// the right, so they get the weakest level.
int precedence(Connective k) {
  switch (k) {
    case Connective::Atom: return 6;
    case Connective::Not: return 5;
    case Connective::And: return 4;
    case Connective::Or: return 3;
    case Connective::Implies: return 2;
    case Connective::Iff: return 1;
    case Connective::Forall:
    case Connective::Exists: return 0;
  }
  return 6;
}

const char* operator_text(Connective k) {
  switch (k) {
    case Connective::And: return " & ";
    case Connective::Or: return " | ";
    case Connective::Implies: return " => ";
    case Connective::Iff: return " <=> ";
    default: return "";
  }
}

void print_formula(const Formula& f, int context, std::string& out) {
  const int prec = precedence(f.kind);
  switch (f.kind) {
    case Connective::Atom:
      out += f.predicate;
      if (!f.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.args.size(); ++i) {
          if (i) out += ',';
          print_term(*f.args[i], out);
        }
        out += ')';
      }
      return;
    case Connective::Not: {
      out += '!';
      const Formula& child = *f.operands[0];
      if (precedence(child.kind) < prec) {
        out += '(';
        print_formula(child, 0, out);
        out += ')';
      } else {
        print_formula(child, prec, out);
      }
      return;
    }
    case Connective::And:
    case Connective::Or:
    case Connective::Implies:
    case Connective::Iff: {
      const bool needs_parens = context > prec;
      if (needs_parens) out += '(';
      const Formula& lhs = *f.operands[0];
      const Formula& rhs = *f.operands[1];
      // And/Or associate to the left; Implies/Iff to the right. A child on
      // the re-associating side at equal precedence keeps its parentheses.
      const bool right_assoc =
          f.kind == Connective::Implies || f.kind == Connective::Iff;
      int left_context = right_assoc ? prec + 1 : prec;
      int right_context = right_assoc ? prec : prec + 1;
      if (precedence(lhs.kind) < left_context) {
        out += '(';
        print_formula(lhs, 0, out);
        out += ')';
      } else {
        print_formula(lhs, left_context, out);
      }
      out += operator_text(f.kind);
      if (precedence(rhs.kind) < right_context) {
        out += '(';
        print_formula(rhs, 0, out);
        out += ')';
      } else {
        print_formula(rhs, right_context, out);
      }
      if (needs_parens) out += ')';
      return;
    }
    case Connective::Forall:
    case Connective::Exists: {
      const bool needs_parens = context > prec;
      if (needs_parens) out += '(';
      out += f.kind == Connective::Forall ? "forall " : "exists ";
      out += f.var;
      out += ':';
      out += f.var_type;
      out += ' ';
      print_formula(*f.operands[0], 0, out);
      if (needs_parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, 0, out);
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const Substitution& s) {
  switch (f->kind) {
    case Connective::Atom: {
      std::vector<TermPtr> args;
      args.reserve(f->args.size());
      bool changed = false;
      for (const auto& a : f->args) {
        args.push_back(substitute(a, s));
        changed = changed || args.back() != a;
      }
      if (!changed) return f;
      return Formula::atom(f->predicate, std::move(args));
    }
    case Connective::Forall:
    case Connective::Exists: {
      // Bound variables shadow the substitution.
      if (s.count(f->var)) {
        Substitution inner = s;
        inner.erase(f->var);
        if (inner.empty()) return f;
        auto body = substitute(f->operands[0], inner);
        if (body == f->operands[0]) return f;
        auto g = std::make_shared<Formula>(*f);
        g->operands = {std::move(body)};
        return g;
      }
      auto body = substitute(f->operands[0], s);
      if (body == f->operands[0]) return f;
      auto g = std::make_shared<Formula>(*f);
      g->operands = {std::move(body)};
      return g;
    }
    default: {
      std::vector<FormulaPtr> ops;
      ops.reserve(f->operands.size());
      bool changed = false;
      for (const auto& op : f->operands) {
        ops.push_back(substitute(op, s));
        changed = changed || ops.back() != op;
      }
      if (!changed) return f;
      auto g = std::make_shared<Formula>(*f);
      g->operands = std::move(ops);
      return g;
    }
  }
}

namespace {

void collect_free(const FormulaPtr& f, std::vector<std::string>& bound,
                  std::vector<std::pair<std::string, std::string>>& out) {
  auto visit_term = [&](const TermPtr& t, auto&& self) -> void {
    if (t->kind == Term::Kind::Variable) {
      if (std::find(bound.begin(), bound.end(), t->name) != bound.end())
        return;
      for (const auto& [name, type] : out)
        if (name == t->name) return;
      out.emplace_back(t->name, t->type);
      return;
    }
    for (const auto& a : t->args) self(a, self);
  };
  switch (f->kind) {
    case Connective::Atom:
      for (const auto& a : f->args) visit_term(a, visit_term);
      return;
    case Connective::Forall:
    case Connective::Exists:
      bound.push_back(f->var);
      collect_free(f->operands[0], bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& op : f->operands) collect_free(op, bound, out);
      return;
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> free_variables(
    const FormulaPtr& f) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> bound;
  collect_free(f, bound, out);
  return out;
}

}  // namespace mli
