#include "mli/program.hpp"

#include "mli/format.hpp"

namespace mli {

std::string to_string(const Literal& lit) {
  std::string out;
  if (!lit.positive) out += '!';
  out += to_string(*Formula::atom(lit.predicate, lit.args));
  return out;
}

bool equal(const Literal& a, const Literal& b) {
  if (a.positive != b.positive || a.predicate != b.predicate ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(a.args[i], b.args[i])) return false;
  return true;
}

std::string to_string(const WeightedClause& c) {
  std::string out = format_double(c.weight);
  out += ' ';
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += to_string(c.literals[i]);
  }
  return out;
}

bool operator==(const DomainType& a, const DomainType& b) {
  return a.name == b.name && a.infinite == b.infinite &&
         a.constants == b.constants;
}

bool operator==(const FunctionDecl& a, const FunctionDecl& b) {
  return a.name == b.name && a.arg_types == b.arg_types &&
         a.return_type == b.return_type;
}

bool operator==(const PredicateDecl& a, const PredicateDecl& b) {
  return a.name == b.name && a.arg_types == b.arg_types;
}

bool operator==(const Signature& a, const Signature& b) {
  return a.types == b.types && a.constants == b.constants &&
         a.functions == b.functions && a.predicates == b.predicates;
}

bool operator==(const Program& a, const Program& b) {
  if (!(a.signature == b.signature)) return false;
  if (a.formulas.size() != b.formulas.size()) return false;
  for (std::size_t i = 0; i < a.formulas.size(); ++i) {
    const auto& fa = a.formulas[i];
    const auto& fb = b.formulas[i];
    // Compare weights as values; inf == inf holds, nan never appears.
    if (fa.weight != fb.weight) return false;
    if (!equal(fa.formula, fb.formula)) return false;
  }
  return true;
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& [name, ty] : p.signature.types) {
    out += "type " + name + " = ";
    if (ty.infinite) {
      out += "infinite seed " + ty.seed();
    } else {
      out += '{';
      for (std::size_t i = 0; i < ty.constants.size(); ++i) {
        if (i) out += ", ";
        out += ty.constants[i];
      }
      out += '}';
    }
    out += '\n';
  }
  for (const auto& [name, fn] : p.signature.functions) {
    out += "function " + name + "(";
    for (std::size_t i = 0; i < fn.arg_types.size(); ++i) {
      if (i) out += ", ";
      out += fn.arg_types[i];
    }
    out += ") -> " + fn.return_type + '\n';
  }
  for (const auto& [name, pred] : p.signature.predicates) {
    out += "predicate " + name;
    if (!pred.arg_types.empty()) {
      out += '(';
      for (std::size_t i = 0; i < pred.arg_types.size(); ++i) {
        if (i) out += ", ";
        out += pred.arg_types[i];
      }
      out += ')';
    }
    out += '\n';
  }
  if (!p.formulas.empty()) out += '\n';
  for (const auto& wf : p.formulas) {
    out += format_double(wf.weight) + " " + to_string(*wf.formula) + '\n';
  }
  return out;
}

}  // namespace mli
