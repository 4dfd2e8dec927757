#include <benchmark/benchmark.h>

#include <random>

#include "mli/cnf.hpp"
#include "mli/gibbs.hpp"
#include "mli/parser.hpp"
#include "mli/sampler.hpp"
#include "mli/sat.hpp"

namespace {

const char* kLattice =
    "type nat = infinite seed 0\n"
    "function s(nat) -> nat\n"
    "predicate Q(nat, nat)\n"
    "1 Q(x, y) <=> Q(s(x), y)\n"
    "1 Q(x, y) <=> Q(x, s(y))\n";

mli::Program compiled(const std::string& text) {
  mli::Program p = mli::parse_program(text);
  mli::compile_clauses(p);
  return p;
}

mli::AtomId center(mli::Grounder& g) {
  std::string t = "0";
  for (int i = 0; i < 4; ++i) t = "s(" + t + ")";
  return g.intern_atom(
      mli::parse_ground_atoms("Q(" + t + "," + t + ")",
                              g.program().signature)[0]);
}

void bm_intern_atom(benchmark::State& state) {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);
  auto atoms = mli::parse_ground_atoms(
      "Q(0,0),Q(s(0),0),Q(0,s(0)),Q(s(s(0)),s(0))", p.signature);
  for (auto _ : state) {
    for (const auto& a : atoms) benchmark::DoNotOptimize(g.intern_atom(a));
  }
}
BENCHMARK(bm_intern_atom);

void bm_clauses_containing(benchmark::State& state) {
  // Rebuild the grounder each round so the cache does not absorb the work.
  mli::Program p = compiled(kLattice);
  for (auto _ : state) {
    mli::Grounder g(p);
    benchmark::DoNotOptimize(g.clauses_containing(center(g)).size());
  }
}
BENCHMARK(bm_clauses_containing);

void bm_gibbs_sweep(benchmark::State& state) {
  mli::Program p = compiled(kLattice);
  mli::Grounder g(p);
  mli::TruncationSpec spec;
  spec.query_atoms = {center(g)};
  spec.radius = static_cast<int>(state.range(0));
  spec.policy = mli::BoundaryPolicy::AllOne;
  mli::Truncation t = mli::truncate(g, spec);
  std::vector<std::uint8_t> cfg(t.volume.atoms.size(), 1);
  std::mt19937_64 rng(7);
  for (auto _ : state) {
    mli::gibbs_sweep(t.volume, t.boundary, cfg, rng);
    benchmark::DoNotOptimize(cfg.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(t.volume.atoms.size()));
}
BENCHMARK(bm_gibbs_sweep)->Arg(2)->Arg(4)->Arg(8);

void bm_exact_conditional(benchmark::State& state) {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function s(nat) -> nat\n"
      "predicate Q(nat)\n"
      "0.9 Q(x) <=> Q(s(x))\n");
  mli::Grounder g(p);
  std::vector<mli::AtomId> atoms =
      g.atoms_up_to_depth(static_cast<int>(state.range(0)) - 1);
  mli::Volume v = mli::build_volume(g, atoms);
  mli::BoundaryAssignment b = mli::uniform_boundary(v, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mli::conditional(v, b).log_partition);
  }
}
BENCHMARK(bm_exact_conditional)->Arg(8)->Arg(12);

void bm_ground_sat(benchmark::State& state) {
  mli::Program p = compiled(
      "type nat = infinite seed 0\n"
      "function f(nat) -> nat\n"
      "predicate P(nat)\n"
      "inf P(0)\n"
      "inf P(x) => P(f(x))\n");
  mli::Grounder g(p);
  mli::TruncatedKB kb =
      mli::ground_truncation(g, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mli::solve_ground(kb).has_value());
  }
}
BENCHMARK(bm_ground_sat)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
