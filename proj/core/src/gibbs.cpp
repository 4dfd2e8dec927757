#include "mli/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mli/errors.hpp"

namespace mli {

Volume build_volume(Grounder& g, std::span<const AtomId> atoms) {
  const HerbrandStore& store = g.store();
  Volume v;
  v.atoms.assign(atoms.begin(), atoms.end());
  std::sort(v.atoms.begin(), v.atoms.end(), [&](AtomId a, AtomId b) {
    return store.atom_text(a) < store.atom_text(b);
  });
  v.atoms.erase(std::unique(v.atoms.begin(), v.atoms.end()), v.atoms.end());

  std::set<std::pair<std::size_t, std::vector<GroundLiteral>>> seen;
  std::vector<GroundClause> clauses;
  for (AtomId a : v.atoms) {
    for (const GroundClause& gc : g.clauses_containing(a)) {
      if (seen.emplace(gc.source, gc.literals).second) clauses.push_back(gc);
    }
  }
  std::sort(clauses.begin(), clauses.end(),
            [&](const GroundClause& a, const GroundClause& b) {
              if (a.source != b.source) return a.source < b.source;
              const std::size_t n =
                  std::min(a.literals.size(), b.literals.size());
              for (std::size_t i = 0; i < n; ++i) {
                const auto& ta = store.atom_text(a.literals[i].atom);
                const auto& tb = store.atom_text(b.literals[i].atom);
                if (ta != tb) return ta < tb;
                if (a.literals[i].positive != b.literals[i].positive)
                  return a.literals[i].positive < b.literals[i].positive;
              }
              return a.literals.size() < b.literals.size();
            });

  std::map<AtomId, std::uint32_t> inside;
  for (std::size_t i = 0; i < v.atoms.size(); ++i)
    inside.emplace(v.atoms[i], static_cast<std::uint32_t>(i));

  std::set<AtomId> boundary;
  for (const GroundClause& gc : clauses)
    for (const GroundLiteral& lit : gc.literals)
      if (!inside.count(lit.atom)) boundary.insert(lit.atom);
  v.boundary_atoms.assign(boundary.begin(), boundary.end());
  std::sort(v.boundary_atoms.begin(), v.boundary_atoms.end(),
            [&](AtomId a, AtomId b) {
              return store.atom_text(a) < store.atom_text(b);
            });
  std::map<AtomId, std::uint32_t> outside;
  for (std::size_t i = 0; i < v.boundary_atoms.size(); ++i)
    outside.emplace(v.boundary_atoms[i], static_cast<std::uint32_t>(i));

  v.clauses_of_atom.resize(v.atoms.size());
  for (const GroundClause& gc : clauses) {
    VolumeClause vc;
    vc.weight = gc.weight;
    vc.source = gc.source;
    for (const GroundLiteral& lit : gc.literals) {
      auto it = inside.find(lit.atom);
      if (it != inside.end()) {
        vc.literals.push_back({it->second, lit.positive, true});
      } else {
        vc.literals.push_back({outside.at(lit.atom), lit.positive, false});
      }
    }
    const auto clause_index = static_cast<std::uint32_t>(v.clauses.size());
    std::uint32_t last = UINT32_MAX;
    for (const VolumeLit& lit : vc.literals) {
      if (!lit.in_volume) continue;
      if (lit.index != last) v.clauses_of_atom[lit.index].push_back(clause_index);
      last = lit.index;  // literals are sorted, so repeats are adjacent
    }
    v.clauses.push_back(std::move(vc));
  }
  return v;
}

BoundaryAssignment uniform_boundary(const Volume& v, bool value) {
  BoundaryAssignment b;
  b.values.assign(v.boundary_atoms.size(), value ? 1 : 0);
  return b;
}

BoundaryAssignment boundary_from(const Volume& v, const HerbrandStore& store,
                                 const std::map<AtomId, bool>& values) {
  BoundaryAssignment b;
  b.values.resize(v.boundary_atoms.size());
  std::string missing;
  for (std::size_t i = 0; i < v.boundary_atoms.size(); ++i) {
    auto it = values.find(v.boundary_atoms[i]);
    if (it == values.end()) {
      if (!missing.empty()) missing += ", ";
      missing += store.atom_text(v.boundary_atoms[i]);
      continue;
    }
    b.values[i] = it->second ? 1 : 0;
  }
  if (!missing.empty())
    throw RejectionError("boundary assignment is missing atom(s): " + missing);
  return b;
}

namespace {

void require_finite_weights(const Volume& v) {
  for (const VolumeClause& c : v.clauses) {
    if (!std::isfinite(c.weight))
      throw RejectionError(
          "volume contains a clause with non-finite weight; the conditional "
          "is only defined for finite weights");
  }
}

inline bool clause_satisfied(const VolumeClause& c, std::uint64_t config,
                             const BoundaryAssignment& boundary) {
  for (const VolumeLit& lit : c.literals) {
    const bool value = lit.in_volume ? ((config >> lit.index) & 1) != 0
                                     : boundary.values[lit.index] != 0;
    if (value == lit.positive) return true;
  }
  return false;
}

}  // namespace

double hamiltonian(const Volume& v, std::uint64_t config,
                   const BoundaryAssignment& boundary) {
  require_finite_weights(v);
  if (boundary.values.size() != v.boundary_atoms.size())
    throw std::invalid_argument("boundary assignment does not fit the volume");
  double total = 0.0;
  for (const VolumeClause& c : v.clauses)
    if (clause_satisfied(c, config, boundary)) total += c.weight;
  return total;
}

double site_gain(const Volume& v, std::span<const std::uint8_t> state,
                 const BoundaryAssignment& boundary, std::uint32_t pos) {
  double gain = 0.0;
  for (std::uint32_t ci : v.clauses_of_atom[pos]) {
    const VolumeClause& c = v.clauses[ci];
    bool sat_one = false;
    bool sat_zero = false;
    for (const VolumeLit& lit : c.literals) {
      if (lit.in_volume && lit.index == pos) {
        if (lit.positive)
          sat_one = true;
        else
          sat_zero = true;
        continue;
      }
      const bool value = lit.in_volume ? state[lit.index] != 0
                                       : boundary.values[lit.index] != 0;
      if (value == lit.positive) {
        sat_one = true;
        sat_zero = true;
        break;
      }
    }
    if (sat_one != sat_zero) gain += sat_one ? c.weight : -c.weight;
  }
  return gain;
}

ConditionalDistribution conditional(const Volume& v,
                                    const BoundaryAssignment& boundary,
                                    std::size_t max_atoms) {
  require_finite_weights(v);
  if (boundary.values.size() != v.boundary_atoms.size())
    throw std::invalid_argument("boundary assignment does not fit the volume");
  if (v.atoms.size() > max_atoms) {
    throw RejectionError("exact conditional over " +
                         std::to_string(v.atoms.size()) +
                         " atoms exceeds the cap of " +
                         std::to_string(max_atoms));
  }
  const std::uint64_t n = std::uint64_t{1} << v.atoms.size();
  ConditionalDistribution out;
  out.atoms = v.atoms;
  out.probabilities.resize(n);

  std::vector<double> energy(n);
  double max_energy = -std::numeric_limits<double>::infinity();
  for (std::uint64_t config = 0; config < n; ++config) {
    double total = 0.0;
    for (const VolumeClause& c : v.clauses)
      if (clause_satisfied(c, config, boundary)) total += c.weight;
    energy[config] = total;
    max_energy = std::max(max_energy, total);
  }
  double z = 0.0;
  for (std::uint64_t config = 0; config < n; ++config) {
    out.probabilities[config] = std::exp(energy[config] - max_energy);
    z += out.probabilities[config];
  }
  for (auto& p : out.probabilities) p /= z;
  out.log_partition = max_energy + std::log(z);
  return out;
}

}  // namespace mli
