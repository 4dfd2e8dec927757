#include <algorithm>
#include <set>
#include <thread>

#include "doctest.h"
#include "mli/cnf.hpp"
#include "mli/errors.hpp"
#include "mli/herbrand.hpp"
#include "mli/parser.hpp"
#include "oracles.hpp"

namespace {

mli::Program compiled(const std::string& text) {
  mli::Program p = mli::parse_program(text);
  mli::compile_clauses(p);
  return p;
}

const char* kChain =
    "type nat = infinite seed 0\n"
    "function s(nat) -> nat\n"
    "predicate Q(nat)\n"
    "0.9 Q(x) <=> Q(s(x))\n";

const char* kLattice =
    "type nat = infinite seed 0\n"
    "function s(nat) -> nat\n"
    "predicate Q(nat, nat)\n"
    "1 Q(x, y) <=> Q(s(x), y)\n"
    "1 Q(x, y) <=> Q(x, s(y))\n";

// Canonical key of an engine ground clause for comparison with the oracle.
oracle::GroundClauseKey key_of(const mli::HerbrandStore& store,
                               const mli::GroundClause& c) {
  oracle::GroundClauseKey key;
  for (const auto& lit : c.literals)
    key.insert({store.atom_text(lit.atom), lit.positive});
  return key;
}

}  // namespace

TEST_CASE("universe enumeration in depth-major order") {
  mli::Program p = compiled(
      "type t = infinite seed A\n"
      "function f(t) -> t\n"
      "predicate P(t)\n"
      "1 P(x)\n");
  mli::Grounder g(p);
  auto ids = g.universe("t", 2);
  std::vector<std::string> texts;
  for (auto id : ids) texts.push_back(g.store().term_text(id));
  CHECK(texts == std::vector<std::string>{"A", "f(A)", "f(f(A))"});
}

TEST_CASE("two unary generators give a binary tree of terms") {
  mli::Program p = compiled(
      "type t = infinite seed 0\n"
      "function s(t) -> t\n"
      "function t(t) -> t\n"
      "predicate P(t)\n"
      "1 P(x)\n");
  mli::Grounder g(p);
  CHECK(g.universe("t", 0).size() == 1);
  CHECK(g.universe("t", 1).size() == 3);
  CHECK(g.universe("t", 2).size() == 7);

  // Same count from the oracle's bottom-up construction.
  CHECK(oracle::terms_up_to_depth(p.signature, "t", 2).size() == 7);
}

TEST_CASE("universe enumeration agrees with the oracle and grows monotonically") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function f(nat) -> nat\n"
      "function g(nat, nat) -> nat\n"
      "predicate P(nat)\n"
      "1 P(x)\n");
  mli::Grounder g(p);
  std::vector<std::string> previous;
  for (int d = 0; d <= 3; ++d) {
    std::vector<std::string> engine;
    for (auto id : g.universe("nat", d))
      engine.push_back(g.store().term_text(id));
    auto expected = oracle::terms_up_to_depth(p.signature, "nat", d);
    std::sort(engine.begin(), engine.end());
    std::sort(expected.begin(), expected.end());
    CHECK(engine == expected);
    // Depth monotonicity: everything from depth d-1 is still there.
    CHECK(std::includes(engine.begin(), engine.end(), previous.begin(),
                        previous.end()));
    previous = std::move(engine);
  }
}

TEST_CASE("finite types enumerate to their constants at any depth") {
  mli::Program p = compiled(
      "type name = {Anna, Bob}\n"
      "predicate P(name)\n"
      "1 P(x)\n");
  mli::Grounder g(p);
  for (int d : {0, 3}) {
    auto ids = g.universe("name", d);
    std::vector<std::string> texts;
    for (auto id : ids) texts.push_back(g.store().term_text(id));
    CHECK(texts == std::vector<std::string>{"Anna", "Bob"});
  }
}

TEST_CASE("interning the same text twice yields the same id") {
  mli::Program p = compiled(kChain);
  mli::Grounder g(p);
  auto a1 = g.intern_atom(mli::parse_ground_atoms("Q(s(0))", p.signature)[0]);
  auto a2 = g.intern_atom(mli::parse_ground_atoms("Q(s(0))", p.signature)[0]);
  CHECK(a1 == a2);
  CHECK(g.store().atom_text(a1) == "Q(s(0))");
}

TEST_CASE("concurrent interning stays consistent") {
  mli::Program p = compiled(kChain);
  mli::Grounder g(p);
  auto atoms = mli::parse_ground_atoms(
      "Q(0),Q(s(0)),Q(s(s(0))),Q(s(s(s(0))))", p.signature);
  std::vector<std::vector<mli::AtomId>> results(4);
  {
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
      workers.emplace_back([&, w] {
        for (int rep = 0; rep < 200; ++rep)
          for (const auto& a : atoms) results[w].push_back(g.intern_atom(a));
      });
    }
    for (auto& t : workers) t.join();
  }
  for (int w = 1; w < 4; ++w) CHECK(results[w] == results[0]);
  CHECK(g.store().atom_count() == 4);
}

TEST_CASE("sigma-determinacy accepts functions that carry the variables") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function f(nat) -> nat\n"
      "function g(nat, nat) -> nat\n"
      "predicate Q(nat, nat)\n"
      "predicate R(nat, nat)\n"
      "1 Q(x, y) => R(f(x), g(x, y))\n");
  auto report = mli::check_sigma_determinate(p);
  CHECK(report.determinate);
  REQUIRE(report.clauses.size() == 1);
  CHECK(report.clauses[0].determinate);
}

TEST_CASE("sigma-determinacy rejects variables missing from a literal") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function s(nat) -> nat\n"
      "predicate P(nat)\n"
      "predicate Q(nat)\n"
      "1 P(x) | Q(y)\n");
  auto report = mli::check_sigma_determinate(p);
  CHECK(!report.determinate);
  REQUIRE(report.clauses.size() == 1);
  CHECK(report.clauses[0].violating_variables ==
        std::vector<std::string>{"x", "y"});

  mli::Grounder g(p);
  CHECK_THROWS_WITH_AS(g.require_sigma_determinate(),
                       doctest::Contains("not sigma-determinate"),
                       mli::RejectionError);
}

TEST_CASE("finite-domain variables are exempt from the determinacy rule") {
  // x is infinite and appears in both literals; the finite c does not need
  // to.
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "type color = {Red, Blue}\n"
      "function s(nat) -> nat\n"
      "predicate P(nat)\n"
      "predicate M(nat, color)\n"
      "1 P(x) => M(s(x), c)\n");
  auto report = mli::check_sigma_determinate(p);
  CHECK(report.determinate);
}

TEST_CASE("constants in every literal make a clause trivially determinate") {
  mli::Program p = compiled(
      "type name = {Anna, Bob}\n"
      "predicate L(name, name)\n"
      "1 L(Anna, x) | L(Bob, x)\n");
  // x is finite here, but the shape matters when x is infinite too.
  CHECK(mli::check_sigma_determinate(p).determinate);

  mli::Program q = compiled(
      "type person = infinite seed Anna\n"
      "function n(person) -> person\n"
      "predicate L(person, person)\n"
      "1 L(Anna, x) | L(n(Anna), x)\n");
  CHECK(mli::check_sigma_determinate(q).determinate);
}

TEST_CASE("clauses containing a chain atom, interior and boundary") {
  mli::Program p = compiled(kChain);
  mli::Grounder g(p);
  auto interior = g.intern_atom(mli::parse_ground_atoms("Q(s(0))", p.signature)[0]);
  auto origin = g.intern_atom(mli::parse_ground_atoms("Q(0)", p.signature)[0]);

  CHECK(g.clauses_containing(interior).size() == 4);
  // The seed constant has no predecessor: the s(x) patterns cannot match 0.
  CHECK(g.clauses_containing(origin).size() == 2);

  auto nb = g.neighbors(interior);
  std::vector<std::string> texts;
  for (auto id : nb) texts.push_back(g.store().atom_text(id));
  CHECK(texts == std::vector<std::string>{"Q(0)", "Q(s(s(0)))"});
  CHECK(g.neighbors(origin).size() == 1);
}

TEST_CASE("clauses containing lattice atoms match the enumeration oracle") {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);

  auto check_against_oracle = [&](const std::string& atom_text,
                                  std::size_t expected_count) {
    auto atom =
        g.intern_atom(mli::parse_ground_atoms(atom_text, p.signature)[0]);
    const auto& engine = g.clauses_containing(atom);
    CHECK(engine.size() == expected_count);

    // Oracle: enumerate every grounding with variables up to depth 3 and
    // keep the ones that mention the atom. Depth 3 is enough: the patterns
    // add at most one function layer to the atom's own depth.
    std::set<std::pair<std::size_t, oracle::GroundClauseKey>> expected;
    for (std::size_t i = 0; i < p.clauses.size(); ++i) {
      for (const auto& inst :
           oracle::ground_clause_instances(p.clauses[i], i, p.signature, 3)) {
        bool mentions = false;
        for (const auto& [text, positive] : inst.literals)
          if (text == atom_text) mentions = true;
        if (mentions) expected.insert({i, inst.literals});
      }
    }
    std::set<std::pair<std::size_t, oracle::GroundClauseKey>> actual;
    for (const auto& c : engine)
      actual.insert({c.source, key_of(g.store(), c)});
    CHECK(actual == expected);
  };

  check_against_oracle("Q(s(0),s(0))", 8);
  check_against_oracle("Q(0,0)", 4);
  check_against_oracle("Q(s(0),0)", 6);
}

TEST_CASE("lattice neighbors of interior and corner atoms") {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);
  auto interior =
      g.intern_atom(mli::parse_ground_atoms("Q(s(0),s(0))", p.signature)[0]);
  auto corner = g.intern_atom(mli::parse_ground_atoms("Q(0,0)", p.signature)[0]);

  std::vector<std::string> texts;
  for (auto id : g.neighbors(interior)) texts.push_back(g.store().atom_text(id));
  CHECK(texts == std::vector<std::string>{
                     "Q(0,s(0))", "Q(s(0),0)", "Q(s(0),s(s(0)))",
                     "Q(s(s(0)),s(0))"});
  CHECK(g.neighbors(corner).size() == 2);
}

TEST_CASE("neighbor relation is symmetric") {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);
  auto atoms = mli::parse_ground_atoms(
      "Q(0,0),Q(s(0),0),Q(s(0),s(0)),Q(s(s(0)),s(0))", p.signature);
  for (const auto& f : atoms) {
    auto a = g.intern_atom(f);
    for (auto b : g.neighbors(a)) {
      auto back = g.neighbors(b);
      CHECK(std::find(back.begin(), back.end(), a) != back.end());
    }
  }
}

TEST_CASE("every returned clause contains the queried atom") {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);
  auto a = g.intern_atom(mli::parse_ground_atoms("Q(s(0),s(0))", p.signature)[0]);
  for (const auto& c : g.clauses_containing(a)) {
    bool found = false;
    for (const auto& lit : c.literals) found |= lit.atom == a;
    CHECK(found);
  }
}

TEST_CASE("clause counts respect the static bound from the analysis") {
  mli::Program p = compiled(kLattice);
  auto det = mli::check_sigma_determinate(p);
  mli::Grounder g(p);
  auto a = g.intern_atom(mli::parse_ground_atoms("Q(s(0),s(0))", p.signature)[0]);
  CHECK(static_cast<double>(g.clauses_containing(a).size()) <=
        det.clause_bound);
}

TEST_CASE("unit-clause programs give single memberships and no neighbors") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function s(nat) -> nat\n"
      "predicate P(nat)\n"
      "2 P(x)\n");
  mli::Grounder g(p);
  auto a = g.intern_atom(mli::parse_ground_atoms("P(s(0))", p.signature)[0]);
  CHECK(g.clauses_containing(a).size() == 1);
  CHECK(g.neighbors(a).empty());
}

TEST_CASE("self-opposed groundings become single-atom tautologies") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function s(nat) -> nat\n"
      "predicate Q(nat, nat)\n"
      "1 Q(x, y) | !Q(y, x)\n");
  mli::Grounder g(p);
  auto diag = g.intern_atom(mli::parse_ground_atoms("Q(0,0)", p.signature)[0]);
  const auto& clauses = g.clauses_containing(diag);
  bool found_tautology = false;
  for (const auto& c : clauses) {
    if (c.distinct_atoms == 1 && c.literals.size() == 2)
      found_tautology = true;
  }
  CHECK(found_tautology);
  // The tautology contributes no neighbor.
  for (auto nb : g.neighbors(diag)) CHECK(nb != diag);
}

TEST_CASE("atoms_up_to_depth covers exactly the bounded Herbrand base") {
  mli::Program p = compiled(kChain);
  mli::Grounder g(p);
  auto atoms = g.atoms_up_to_depth(3);
  std::vector<std::string> texts;
  for (auto id : atoms) texts.push_back(g.store().atom_text(id));
  CHECK(texts == std::vector<std::string>{"Q(0)", "Q(s(0))", "Q(s(s(0)))",
                                          "Q(s(s(s(0))))"});
}

TEST_CASE("grounding operations refuse non-determinate programs") {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function s(nat) -> nat\n"
      "predicate P(nat)\n"
      "predicate Q(nat)\n"
      "1 P(x) | Q(y)\n");
  mli::Grounder g(p);
  auto a = g.intern_atom(mli::parse_ground_atoms("P(0)", p.signature)[0]);
  CHECK_THROWS_AS(g.clauses_containing(a), mli::RejectionError);
  CHECK_THROWS_AS(g.neighbors(a), mli::RejectionError);
}
