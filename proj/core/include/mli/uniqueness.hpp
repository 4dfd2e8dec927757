#pragma once

#include <span>
#include <string>

#include "mli/herbrand.hpp"

namespace mli {

// max - min. Throws std::invalid_argument on an empty span.
double oscillation(std::span<const double> values);

struct AtomInteraction {
  AtomId atom = 0;
  // Sum over the ground clauses containing the atom of
  // (distinct atoms in clause - 1) * |clause weight|. Unit clauses and
  // single-atom tautologies contribute nothing.
  double sum = 0.0;
  std::size_t clause_count = 0;
};

AtomInteraction interaction_sum(Grounder& g, AtomId atom);

enum class UniquenessVerdict { UniqueCertified, Inconclusive };

std::string to_string(UniquenessVerdict v);

struct UniquenessReport {
  UniquenessVerdict verdict = UniquenessVerdict::Inconclusive;
  // Running maximum of the interaction sum over all atoms up to each depth;
  // nondecreasing by construction.
  std::vector<double> per_depth_max;
  double supremum = 0.0;
  AtomId witness = 0;  // atom attaining the supremum
  bool stabilized = false;
  std::size_t atoms_scanned = 0;
  std::string note;
};

// Scans atoms depth by depth. The verdict is UniqueCertified when the
// running maximum settles (constant over the trailing `window` depths) at a
// value strictly below 2; everything else is Inconclusive. A sum at or
// above 2 never certifies non-uniqueness: the threshold is sufficient,
// not necessary.
UniquenessReport check_uniqueness(Grounder& g, int max_depth = 8,
                                  int window = 3);

}  // namespace mli
