#pragma once

#include <iosfwd>
#include <optional>
#include <random>
#include <string_view>

#include "mli/gibbs.hpp"

namespace mli {

enum class BoundaryPolicy { Free, AllZero, AllOne, Explicit };

std::string to_string(BoundaryPolicy p);
std::optional<BoundaryPolicy> boundary_policy_from(std::string_view name);

struct TruncationSpec {
  std::vector<AtomId> query_atoms;
  int radius = 0;
  BoundaryPolicy policy = BoundaryPolicy::Free;
  std::map<AtomId, bool> explicit_boundary;  // Explicit policy only
};

// The ball of the given radius around the query atoms, with the boundary
// fixed per policy. Free conditions on nothing: clauses that reach outside
// the ball are dropped and the boundary is empty.
struct Truncation {
  Volume volume;
  BoundaryAssignment boundary;
  // Position of each query atom in volume.atoms, aligned with
  // TruncationSpec::query_atoms.
  std::vector<std::uint32_t> query_positions;
};

Truncation truncate(Grounder& g, const TruncationSpec& spec);

// One systematic scan over the volume atoms in order. Uniform draws use
// the top 53 bits of the generator, so trajectories are bit-reproducible
// for a given seed.
void gibbs_sweep(const Volume& v, const BoundaryAssignment& boundary,
                 std::span<std::uint8_t> state, std::mt19937_64& rng);

struct MarginalEstimate {
  std::vector<AtomId> atoms;  // aligned with TruncationSpec::query_atoms
  std::vector<double> estimate;
  std::vector<double> std_error;  // batch-means standard error
  std::uint64_t sweeps = 0;
  std::uint64_t burnin = 0;
  std::uint64_t seed = 0;
};

// Runs one chain on an existing truncation. If `trace` is given, each
// post-burnin sweep writes one line of space-separated 0/1 values in
// volume atom order.
MarginalEstimate run_chain(const Truncation& t,
                           std::span<const AtomId> query_atoms,
                           std::uint64_t sweeps, std::uint64_t burnin,
                           std::uint64_t seed, std::ostream* trace = nullptr);

MarginalEstimate estimate_marginals(Grounder& g, const TruncationSpec& spec,
                                    std::uint64_t sweeps, std::uint64_t burnin,
                                    std::uint64_t seed,
                                    std::ostream* trace = nullptr);

struct SensitivityRun {
  BoundaryPolicy policy = BoundaryPolicy::Free;
  MarginalEstimate marginals;
};

struct SensitivityReport {
  std::vector<AtomId> query_atoms;
  std::vector<SensitivityRun> runs;  // one per policy, in the given order
  std::vector<double> spread;        // per query atom, max - min across runs
  double max_spread = 0.0;
};

// Reruns the same chain (same seed, same sweep schedule) under each
// boundary policy and reports how far the estimates disagree. Large
// spread that survives sweeps and radius is the practical signature of a
// non-unique measure.
SensitivityReport boundary_sensitivity(Grounder& g, const TruncationSpec& base,
                                       std::span<const BoundaryPolicy> policies,
                                       std::uint64_t sweeps,
                                       std::uint64_t burnin,
                                       std::uint64_t seed);

}  // namespace mli
