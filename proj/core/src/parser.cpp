#include "mli/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>
#include <set>

#include "mli/errors.hpp"

namespace mli {

namespace {

enum class Tok {
  Ident, Int, Float,
  LParen, RParen, LBrace, RBrace, Comma, Colon, Equal, Minus,
  Bang, Amp, Pipe, Implies, Iff, RArrow,
  End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const char* token_name(Tok k) {
  switch (k) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Float: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equal: return "'='";
    case Tok::Minus: return "'-'";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Implies: return "'=>'";
    case Tok::Iff: return "'<=>'";
    case Tok::RArrow: return "'->'";
    case Tok::End: return "end of line";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::set<std::string> kReserved = {
    "type", "function", "predicate", "forall", "exists",
    "infinite", "seed", "inf"};

// Tokenizes one source line. "//" comments are stripped by the caller.
std::vector<Token> lex_line(const std::string& text, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t start, std::size_t len) {
    out.push_back({k, text.substr(start, len), line, static_cast<int>(start) + 1});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < text.size() && ident_char(text[i])) ++i;
      push(Tok::Ident, start, i - start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      bool is_float = false;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.' && i + 1 < text.size() &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        is_float = true;
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          is_float = true;
          i = j;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      push(is_float ? Tok::Float : Tok::Int, start, i - start);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, i, 1); ++i; continue;
      case ')': push(Tok::RParen, i, 1); ++i; continue;
      case '{': push(Tok::LBrace, i, 1); ++i; continue;
      case '}': push(Tok::RBrace, i, 1); ++i; continue;
      case ',': push(Tok::Comma, i, 1); ++i; continue;
      case ':': push(Tok::Colon, i, 1); ++i; continue;
      case '!': push(Tok::Bang, i, 1); ++i; continue;
      case '&': push(Tok::Amp, i, 1); ++i; continue;
      case '|': push(Tok::Pipe, i, 1); ++i; continue;
      case '=':
        if (text.compare(i, 2, "=>") == 0) { push(Tok::Implies, i, 2); i += 2; }
        else { push(Tok::Equal, i, 1); ++i; }
        continue;
      case '<':
        if (text.compare(i, 3, "<=>") == 0) { push(Tok::Iff, i, 3); i += 3; continue; }
        throw ParseError("unexpected character '<'", line, static_cast<int>(i) + 1);
      case '-':
        if (text.compare(i, 2, "->") == 0) { push(Tok::RArrow, i, 2); i += 2; }
        else { push(Tok::Minus, i, 1); ++i; }
        continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         static_cast<int>(i) + 1);
    }
  }
  out.push_back({Tok::End, "", line, static_cast<int>(text.size()) + 1});
  return out;
}

bool starts_upper(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) ||
                        std::isdigit(static_cast<unsigned char>(s[0])));
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, const Signature& sig)
      : tokens_(std::move(tokens)), sig_(sig) {}

  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      throw ParseError(std::string("expected ") + (what ? what : token_name(k)) +
                           ", found " + describe(peek()),
                       peek().line, peek().col);
    }
    return take();
  }

  void expect_end() {
    if (!at(Tok::End))
      throw ParseError("trailing input: " + describe(peek()), peek().line,
                       peek().col);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::Float)
      return "'" + t.text + "'";
    return token_name(t.kind);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  // ---- formulas ----

  FormulaPtr parse_formula_line() {
    auto f = parse_quantified();
    expect_end();
    return close_formula(f);
  }

  std::vector<FormulaPtr> parse_ground_atom_list() {
    std::vector<FormulaPtr> out;
    out.push_back(parse_ground_atom());
    while (at(Tok::Comma)) {
      take();
      out.push_back(parse_ground_atom());
    }
    expect_end();
    return out;
  }

  std::vector<std::pair<FormulaPtr, bool>> parse_ground_assignment_list() {
    std::vector<std::pair<FormulaPtr, bool>> out;
    for (;;) {
      auto atom = parse_ground_atom();
      expect(Tok::Equal, "'='");
      auto v = expect(Tok::Int, "0 or 1");
      if (v.text != "0" && v.text != "1")
        throw ParseError("assignment value must be 0 or 1", v.line, v.col);
      out.emplace_back(std::move(atom), v.text == "1");
      if (!at(Tok::Comma)) break;
      take();
    }
    expect_end();
    return out;
  }

  double parse_weight() {
    bool negative = false;
    if (at(Tok::Minus)) {
      take();
      negative = true;
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "inf") {
      if (negative) fail("negative infinite weights are not supported");
      take();
      return std::numeric_limits<double>::infinity();
    }
    if (t.kind == Tok::Int || t.kind == Tok::Float) {
      double w = std::strtod(take().text.c_str(), nullptr);
      return negative ? -w : w;
    }
    fail("expected a weight (number or 'inf'), found " + describe(t));
  }

 private:
  struct Binding {
    std::string source_name;
    std::string actual_name;
    std::string type;
  };

  FormulaPtr parse_quantified() {
    if (at(Tok::Ident) && (peek().text == "forall" || peek().text == "exists")) {
      Token kw = take();
      bool universal = kw.text == "forall";
      std::vector<std::size_t> opened;
      for (;;) {
        Token var = expect(Tok::Ident, "a variable name");
        check_variable_name(var);
        expect(Tok::Colon, "':' after quantified variable");
        Token ty = expect(Tok::Ident, "a type name");
        if (!sig_.types.count(ty.text))
          throw ParseError("unknown type '" + ty.text + "'", ty.line, ty.col);
        opened.push_back(open_binding(var.text, ty.text));
        if (!at(Tok::Comma)) break;
        take();
      }
      auto body = parse_quantified();
      for (auto it = opened.rbegin(); it != opened.rend(); ++it) {
        const Binding& b = scope_[*it];
        body = universal ? Formula::forall(b.actual_name, b.type, body)
                         : Formula::exists(b.actual_name, b.type, body);
      }
      scope_.resize(scope_.size() - opened.size());
      return body;
    }
    return parse_iff();
  }

  FormulaPtr parse_iff() {
    auto lhs = parse_implies();
    if (at(Tok::Iff)) {
      take();
      return Formula::equivalence(std::move(lhs), parse_iff());
    }
    return lhs;
  }

  FormulaPtr parse_implies() {
    auto lhs = parse_or();
    if (at(Tok::Implies)) {
      take();
      return Formula::implication(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    auto f = parse_and();
    while (at(Tok::Pipe)) {
      take();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  FormulaPtr parse_and() {
    auto f = parse_unary();
    while (at(Tok::Amp)) {
      take();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  FormulaPtr parse_unary() {
    if (at(Tok::Bang)) {
      take();
      return Formula::negation(parse_unary());
    }
    if (at(Tok::LParen)) {
      take();
      auto f = parse_quantified();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at(Tok::Ident) && (peek().text == "forall" || peek().text == "exists")) {
      fail("quantifiers are only allowed at the start of a formula or after '('");
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    Token name = expect(Tok::Ident, "a predicate name");
    auto pit = sig_.predicates.find(name.text);
    if (pit == sig_.predicates.end()) {
      throw ParseError("unknown predicate '" + name.text + "'", name.line,
                       name.col);
    }
    const PredicateDecl& decl = pit->second;
    std::vector<TermPtr> args;
    if (at(Tok::LParen)) {
      take();
      if (!at(Tok::RParen)) {
        for (;;) {
          std::size_t pos = args.size();
          if (pos >= decl.arg_types.size()) break;  // arity error reported below
          args.push_back(parse_term(decl.arg_types[pos]));
          if (!at(Tok::Comma)) break;
          take();
        }
      }
      expect(Tok::RParen, "')'");
    }
    if (args.size() != decl.arg_types.size()) {
      throw ParseError("predicate '" + name.text + "' expects " +
                           std::to_string(decl.arg_types.size()) +
                           " argument(s), found " + std::to_string(args.size()),
                       name.line, name.col);
    }
    return Formula::atom(name.text, std::move(args));
  }

  TermPtr parse_term(const std::string& expected_type) {
    if (at(Tok::Int)) {
      Token t = take();
      return resolve_constant(t, expected_type);
    }
    Token name = expect(Tok::Ident, "a term");
    if (kReserved.count(name.text))
      throw ParseError("'" + name.text + "' is a reserved word", name.line,
                       name.col);
    if (at(Tok::LParen)) {
      auto fit = sig_.functions.find(name.text);
      if (fit == sig_.functions.end())
        throw ParseError("unknown function '" + name.text + "'", name.line,
                         name.col);
      const FunctionDecl& fn = fit->second;
      take();
      std::vector<TermPtr> args;
      if (!at(Tok::RParen)) {
        for (;;) {
          std::size_t pos = args.size();
          if (pos >= fn.arg_types.size()) break;
          args.push_back(parse_term(fn.arg_types[pos]));
          if (!at(Tok::Comma)) break;
          take();
        }
      }
      expect(Tok::RParen, "')'");
      if (args.size() != fn.arg_types.size()) {
        throw ParseError("function '" + name.text + "' expects " +
                             std::to_string(fn.arg_types.size()) +
                             " argument(s), found " + std::to_string(args.size()),
                         name.line, name.col);
      }
      if (fn.return_type != expected_type) {
        throw ParseError("function '" + name.text + "' returns " +
                             fn.return_type + " where " + expected_type +
                             " is required",
                         name.line, name.col);
      }
      return Term::function(name.text, fn.return_type, std::move(args));
    }
    if (starts_upper(name.text)) return resolve_constant(name, expected_type);
    return resolve_variable(name, expected_type);
  }

  TermPtr resolve_constant(const Token& t, const std::string& expected_type) {
    auto cit = sig_.constants.find(t.text);
    if (cit == sig_.constants.end())
      throw ParseError("unknown constant '" + t.text + "'", t.line, t.col);
    if (cit->second != expected_type) {
      throw ParseError("constant '" + t.text + "' has type " + cit->second +
                           " where " + expected_type + " is required",
                       t.line, t.col);
    }
    return Term::constant(t.text, cit->second);
  }

  TermPtr resolve_variable(const Token& t, const std::string& expected_type) {
    // Innermost binding wins.
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->source_name != t.text) continue;
      if (it->type != expected_type) {
        throw ParseError("variable '" + t.text + "' has type " + it->type +
                             " where " + expected_type + " is required",
                         t.line, t.col);
      }
      return Term::variable(it->actual_name, it->type);
    }
    for (const Binding& b : free_) {
      if (b.source_name != t.text) continue;
      if (b.type != expected_type) {
        throw ParseError("variable '" + t.text + "' is used both as " + b.type +
                             " and as " + expected_type,
                         t.line, t.col);
      }
      return Term::variable(b.actual_name, b.type);
    }
    free_.push_back({t.text, fresh_name(t.text), expected_type});
    return Term::variable(free_.back().actual_name, expected_type);
  }

  void check_variable_name(const Token& t) {
    if (kReserved.count(t.text))
      throw ParseError("'" + t.text + "' is a reserved word", t.line, t.col);
    if (starts_upper(t.text))
      throw ParseError("variable names start with a lowercase letter: '" +
                           t.text + "'",
                       t.line, t.col);
  }

  // Every binder in a formula gets a distinct name; a clash with any name
  // already seen is resolved with a numeric suffix.
  std::string fresh_name(const std::string& base) {
    std::string actual = base;
    int suffix = 2;
    while (used_names_.count(actual)) {
      actual = base + "_" + std::to_string(suffix++);
    }
    used_names_.insert(actual);
    return actual;
  }

  std::size_t open_binding(const std::string& name, const std::string& type) {
    scope_.push_back({name, fresh_name(name), type});
    return scope_.size() - 1;
  }

  // Wraps remaining free variables in universal quantifiers, outermost
  // first in order of first occurrence.
  FormulaPtr close_formula(FormulaPtr f) {
    for (auto it = free_.rbegin(); it != free_.rend(); ++it) {
      f = Formula::forall(it->actual_name, it->type, std::move(f));
    }
    return f;
  }

  FormulaPtr parse_ground_atom() {
    auto atom = parse_atom();
    for (const auto& arg : atom->args) {
      if (!is_ground(arg))
        fail("expected a ground atom, found variable in " + to_string(*atom));
    }
    return atom;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<Binding> scope_;
  std::vector<Binding> free_;
  std::set<std::string> used_names_;
};

// ---- declarations ----

void parse_type_decl(LineParser& p, Signature& sig) {
  Token name = p.expect(Tok::Ident, "a type name");
  if (sig.types.count(name.text))
    throw ParseError("type '" + name.text + "' is already declared", name.line,
                     name.col);
  if (kReserved.count(name.text))
    throw ParseError("'" + name.text + "' is a reserved word", name.line,
                     name.col);
  p.expect(Tok::Equal, "'='");
  DomainType ty;
  ty.name = name.text;
  auto add_constant = [&](const Token& t) {
    if (!starts_upper(t.text))
      throw ParseError(
          "constant names start with an uppercase letter or a digit: '" +
              t.text + "'",
          t.line, t.col);
    if (sig.constants.count(t.text))
      throw ParseError("constant '" + t.text + "' is already declared", t.line,
                       t.col);
    sig.constants.emplace(t.text, ty.name);
    ty.constants.push_back(t.text);
  };
  if (p.at(Tok::Ident) && p.peek().text == "infinite") {
    p.take();
    Token kw = p.expect(Tok::Ident, "'seed'");
    if (kw.text != "seed")
      throw ParseError("expected 'seed' after 'infinite'", kw.line, kw.col);
    ty.infinite = true;
    if (!p.at(Tok::Ident) && !p.at(Tok::Int)) p.fail("expected a seed constant");
    add_constant(p.take());
  } else {
    p.expect(Tok::LBrace, "'{' or 'infinite'");
    for (;;) {
      if (!p.at(Tok::Ident) && !p.at(Tok::Int)) p.fail("expected a constant");
      add_constant(p.take());
      if (!p.at(Tok::Comma)) break;
      p.take();
    }
    p.expect(Tok::RBrace, "'}'");
  }
  p.expect_end();
  sig.types.emplace(ty.name, std::move(ty));
}

std::vector<std::string> parse_type_list(LineParser& p, const Signature& sig) {
  std::vector<std::string> out;
  p.expect(Tok::LParen, "'('");
  if (!p.at(Tok::RParen)) {
    for (;;) {
      Token ty = p.expect(Tok::Ident, "a type name");
      if (!sig.types.count(ty.text))
        throw ParseError("unknown type '" + ty.text + "'", ty.line, ty.col);
      out.push_back(ty.text);
      if (!p.at(Tok::Comma)) break;
      p.take();
    }
  }
  p.expect(Tok::RParen, "')'");
  return out;
}

void parse_function_decl(LineParser& p, Signature& sig) {
  Token name = p.expect(Tok::Ident, "a function name");
  if (kReserved.count(name.text))
    throw ParseError("'" + name.text + "' is a reserved word", name.line,
                     name.col);
  if (sig.functions.count(name.text))
    throw ParseError("function '" + name.text + "' is already declared",
                     name.line, name.col);
  if (sig.constants.count(name.text) || sig.predicates.count(name.text))
    throw ParseError("'" + name.text + "' is already declared", name.line,
                     name.col);
  FunctionDecl fn;
  fn.name = name.text;
  fn.arg_types = parse_type_list(p, sig);
  if (fn.arg_types.empty())
    throw ParseError("function '" + name.text + "' needs at least one argument",
                     name.line, name.col);
  p.expect(Tok::RArrow, "'->'");
  Token ret = p.expect(Tok::Ident, "a return type");
  auto tit = sig.types.find(ret.text);
  if (tit == sig.types.end())
    throw ParseError("unknown type '" + ret.text + "'", ret.line, ret.col);
  if (!tit->second.infinite) {
    throw ParseError("function '" + name.text + "' returns finite type '" +
                         ret.text + "'; functions must return an infinite type",
                     ret.line, ret.col);
  }
  fn.return_type = ret.text;
  p.expect_end();
  sig.functions.emplace(fn.name, std::move(fn));
}

void parse_predicate_decl(LineParser& p, Signature& sig) {
  Token name = p.expect(Tok::Ident, "a predicate name");
  if (!starts_upper(name.text) ||
      std::isdigit(static_cast<unsigned char>(name.text[0])))
    throw ParseError("predicate names start with an uppercase letter: '" +
                         name.text + "'",
                     name.line, name.col);
  if (sig.predicates.count(name.text))
    throw ParseError("predicate '" + name.text + "' is already declared",
                     name.line, name.col);
  if (sig.constants.count(name.text) || sig.functions.count(name.text))
    throw ParseError("'" + name.text + "' is already declared", name.line,
                     name.col);
  PredicateDecl pred;
  pred.name = name.text;
  if (p.at(Tok::LParen)) pred.arg_types = parse_type_list(p, sig);
  p.expect_end();
  sig.predicates.emplace(pred.name, std::move(pred));
}

std::string strip_comment(std::string line) {
  auto pos = line.find("//");
  if (pos != std::string::npos) line.erase(pos);
  return line;
}

}  // namespace

Program parse_program(std::string_view text) {
  Program prog;
  std::string src(text);
  int line_no = 0;
  std::size_t start = 0;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    std::string line = strip_comment(
        src.substr(start, end == std::string::npos ? end : end - start));
    start = end == std::string::npos ? src.size() + 1 : end + 1;
    ++line_no;

    auto tokens = lex_line(line, line_no);
    if (tokens.front().kind == Tok::End) continue;
    LineParser p(std::move(tokens), prog.signature);
    if (p.at(Tok::Ident)) {
      const std::string& kw = p.peek().text;
      if (kw == "type") {
        p.take();
        parse_type_decl(p, prog.signature);
        continue;
      }
      if (kw == "function") {
        p.take();
        parse_function_decl(p, prog.signature);
        continue;
      }
      if (kw == "predicate") {
        p.take();
        parse_predicate_decl(p, prog.signature);
        continue;
      }
    }
    WeightedFormula wf;
    wf.weight = p.parse_weight();
    wf.formula = p.parse_formula_line();
    prog.formulas.push_back(std::move(wf));
  }
  return prog;
}

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  LineParser p(lex_line(std::string(text), 1), sig);
  return p.parse_formula_line();
}

std::vector<FormulaPtr> parse_ground_atoms(std::string_view text,
                                           const Signature& sig) {
  LineParser p(lex_line(std::string(text), 1), sig);
  return p.parse_ground_atom_list();
}

std::vector<std::pair<FormulaPtr, bool>> parse_ground_assignments(
    std::string_view text, const Signature& sig) {
  LineParser p(lex_line(std::string(text), 1), sig);
  return p.parse_ground_assignment_list();
}

}  // namespace mli
