#pragma once

#include <cstdint>
#include <map>
#include <span>

#include "mli/herbrand.hpp"

namespace mli {

// A literal resolved against a volume: `index` points into Volume::atoms
// when `in_volume` is set, otherwise into Volume::boundary_atoms.
struct VolumeLit {
  std::uint32_t index = 0;
  bool positive = true;
  bool in_volume = true;
};

struct VolumeClause {
  double weight = 0.0;
  std::size_t source = 0;
  std::vector<VolumeLit> literals;
};

// A finite window into the Herbrand base: the chosen atoms, every ground
// clause touching them, and the boundary atoms those clauses reach.
struct Volume {
  std::vector<AtomId> atoms;           // sorted by text
  std::vector<AtomId> boundary_atoms;  // sorted by text
  std::vector<VolumeClause> clauses;
  std::vector<std::vector<std::uint32_t>> clauses_of_atom;  // per volume atom
};

Volume build_volume(Grounder& g, std::span<const AtomId> atoms);

// Values aligned with Volume::boundary_atoms.
struct BoundaryAssignment {
  std::vector<std::uint8_t> values;
};

BoundaryAssignment uniform_boundary(const Volume& v, bool value);

// Requires a value for every boundary atom; lists any missing ones.
BoundaryAssignment boundary_from(const Volume& v, const HerbrandStore& store,
                                 const std::map<AtomId, bool>& values);

// Total weighted satisfaction of the volume's clauses under the given
// configuration (bit i of `config` is atoms[i]) and boundary. The measure
// weights a configuration by exp of this value. Finite weights only.
double hamiltonian(const Volume& v, std::uint64_t config,
                   const BoundaryAssignment& boundary);

// Change in the hamiltonian from setting atoms[pos] to 1 instead of 0,
// with the rest of `state` fixed. Touches only the clauses on that atom.
double site_gain(const Volume& v, std::span<const std::uint8_t> state,
                 const BoundaryAssignment& boundary, std::uint32_t pos);

struct ConditionalDistribution {
  std::vector<AtomId> atoms;           // row bit i corresponds to atoms[i]
  std::vector<double> probabilities;   // size 1 << atoms.size()
  double log_partition = 0.0;
};

inline constexpr std::size_t kExactConditionalCap = 20;

// Exact conditional of the volume's atoms given the boundary, by direct
// enumeration of all configurations in log space.
ConditionalDistribution conditional(const Volume& v,
                                    const BoundaryAssignment& boundary,
                                    std::size_t max_atoms = kExactConditionalCap);

}  // namespace mli
