#include "mli/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>
#include <set>

#include "mli/errors.hpp"

namespace mli {

std::string to_string(BoundaryPolicy p) {
  switch (p) {
    case BoundaryPolicy::Free: return "free";
    case BoundaryPolicy::AllZero: return "all-zero";
    case BoundaryPolicy::AllOne: return "all-one";
    case BoundaryPolicy::Explicit: return "explicit";
  }
  return "?";
}

std::optional<BoundaryPolicy> boundary_policy_from(std::string_view name) {
  if (name == "free") return BoundaryPolicy::Free;
  if (name == "all-zero") return BoundaryPolicy::AllZero;
  if (name == "all-one") return BoundaryPolicy::AllOne;
  if (name == "explicit") return BoundaryPolicy::Explicit;
  return std::nullopt;
}

namespace {

// Rebuilds the volume with every clause that touches a boundary atom
// removed. What remains conditions on nothing outside the ball.
Volume strip_boundary(const Volume& v) {
  Volume out;
  out.atoms = v.atoms;
  out.clauses_of_atom.resize(out.atoms.size());
  for (const VolumeClause& c : v.clauses) {
    bool interior = std::all_of(c.literals.begin(), c.literals.end(),
                                [](const VolumeLit& l) { return l.in_volume; });
    if (!interior) continue;
    const auto index = static_cast<std::uint32_t>(out.clauses.size());
    std::uint32_t last = UINT32_MAX;
    for (const VolumeLit& l : c.literals) {
      if (l.index != last) out.clauses_of_atom[l.index].push_back(index);
      last = l.index;
    }
    out.clauses.push_back(c);
  }
  return out;
}

}  // namespace

Truncation truncate(Grounder& g, const TruncationSpec& spec) {
  if (spec.query_atoms.empty())
    throw std::invalid_argument("truncation needs at least one query atom");
  if (spec.radius < 0) throw std::invalid_argument("radius must be >= 0");

  std::set<AtomId> ball(spec.query_atoms.begin(), spec.query_atoms.end());
  std::vector<AtomId> frontier(ball.begin(), ball.end());
  for (int step = 0; step < spec.radius; ++step) {
    std::vector<AtomId> next;
    for (AtomId a : frontier) {
      for (AtomId n : g.neighbors(a)) {
        if (ball.insert(n).second) next.push_back(n);
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }

  std::vector<AtomId> atoms(ball.begin(), ball.end());
  Truncation t;
  t.volume = build_volume(g, atoms);
  switch (spec.policy) {
    case BoundaryPolicy::Free:
      t.volume = strip_boundary(t.volume);
      t.boundary = BoundaryAssignment{};
      break;
    case BoundaryPolicy::AllZero:
      t.boundary = uniform_boundary(t.volume, false);
      break;
    case BoundaryPolicy::AllOne:
      t.boundary = uniform_boundary(t.volume, true);
      break;
    case BoundaryPolicy::Explicit:
      t.boundary = boundary_from(t.volume, g.store(), spec.explicit_boundary);
      break;
  }

  const HerbrandStore& store = g.store();
  for (AtomId q : spec.query_atoms) {
    auto it = std::lower_bound(
        t.volume.atoms.begin(), t.volume.atoms.end(), q,
        [&](AtomId a, AtomId b) { return store.atom_text(a) < store.atom_text(b); });
    if (it == t.volume.atoms.end() || *it != q)
      throw std::logic_error("query atom missing from its own truncation");
    t.query_positions.push_back(
        static_cast<std::uint32_t>(it - t.volume.atoms.begin()));
  }
  return t;
}

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void gibbs_sweep(const Volume& v, const BoundaryAssignment& boundary,
                 std::span<std::uint8_t> state, std::mt19937_64& rng) {
  for (std::uint32_t pos = 0; pos < v.atoms.size(); ++pos) {
    const double gain = site_gain(v, state, boundary, pos);
    const double p_one = 1.0 / (1.0 + std::exp(-gain));
    state[pos] = uniform01(rng) < p_one ? 1 : 0;
  }
}

MarginalEstimate run_chain(const Truncation& t,
                           std::span<const AtomId> query_atoms,
                           std::uint64_t sweeps, std::uint64_t burnin,
                           std::uint64_t seed, std::ostream* trace) {
  if (sweeps == 0) throw std::invalid_argument("need at least one sweep");
  for (const VolumeClause& c : t.volume.clauses) {
    if (!std::isfinite(c.weight))
      throw RejectionError(
          "sampling requires finite weights; the program has a hard clause");
  }

  const std::size_t n = t.volume.atoms.size();
  const std::size_t q = query_atoms.size();
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> state(n);
  // Start from the boundary's style: pinned boundaries start uniform at
  // the pinned value, otherwise a fair coin per atom.
  bool all_zero = !t.boundary.values.empty() &&
                  std::all_of(t.boundary.values.begin(), t.boundary.values.end(),
                              [](std::uint8_t v) { return v == 0; });
  bool all_one = !t.boundary.values.empty() &&
                 std::all_of(t.boundary.values.begin(), t.boundary.values.end(),
                             [](std::uint8_t v) { return v == 1; });
  if (all_one) {
    std::fill(state.begin(), state.end(), 1);
  } else if (all_zero) {
    std::fill(state.begin(), state.end(), 0);
  } else {
    for (auto& s : state) s = static_cast<std::uint8_t>(rng() & 1);
  }

  for (std::uint64_t i = 0; i < burnin; ++i)
    gibbs_sweep(t.volume, t.boundary, state, rng);

  // Batch means: the chain is split into equal batches and the spread of
  // the batch averages estimates the autocorrelation-adjusted error.
  const std::uint64_t batches =
      std::min<std::uint64_t>(50, std::max<std::uint64_t>(2, sweeps / 20));
  const std::uint64_t batch_size = std::max<std::uint64_t>(1, sweeps / batches);

  std::vector<std::uint64_t> totals(q, 0);
  std::vector<std::uint64_t> batch_totals(q, 0);
  std::vector<std::vector<double>> batch_means(q);

  for (std::uint64_t i = 0; i < sweeps; ++i) {
    gibbs_sweep(t.volume, t.boundary, state, rng);
    for (std::size_t k = 0; k < q; ++k) {
      const std::uint8_t bit = state[t.query_positions[k]];
      totals[k] += bit;
      batch_totals[k] += bit;
    }
    if ((i + 1) % batch_size == 0) {
      for (std::size_t k = 0; k < q; ++k) {
        batch_means[k].push_back(static_cast<double>(batch_totals[k]) /
                                 static_cast<double>(batch_size));
        batch_totals[k] = 0;
      }
    }
    if (trace) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k) *trace << ' ';
        *trace << static_cast<int>(state[k]);
      }
      *trace << '\n';
    }
  }

  MarginalEstimate est;
  est.atoms.assign(query_atoms.begin(), query_atoms.end());
  est.sweeps = sweeps;
  est.burnin = burnin;
  est.seed = seed;
  for (std::size_t k = 0; k < q; ++k) {
    est.estimate.push_back(static_cast<double>(totals[k]) /
                           static_cast<double>(sweeps));
    const auto& means = batch_means[k];
    if (means.size() >= 2) {
      double mean = 0.0;
      for (double m : means) mean += m;
      mean /= static_cast<double>(means.size());
      double ss = 0.0;
      for (double m : means) ss += (m - mean) * (m - mean);
      const double var = ss / static_cast<double>(means.size() - 1);
      est.std_error.push_back(
          std::sqrt(var / static_cast<double>(means.size())));
    } else {
      est.std_error.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return est;
}

MarginalEstimate estimate_marginals(Grounder& g, const TruncationSpec& spec,
                                    std::uint64_t sweeps, std::uint64_t burnin,
                                    std::uint64_t seed, std::ostream* trace) {
  Truncation t = truncate(g, spec);
  return run_chain(t, spec.query_atoms, sweeps, burnin, seed, trace);
}

SensitivityReport boundary_sensitivity(Grounder& g, const TruncationSpec& base,
                                       std::span<const BoundaryPolicy> policies,
                                       std::uint64_t sweeps,
                                       std::uint64_t burnin,
                                       std::uint64_t seed) {
  if (policies.empty())
    throw std::invalid_argument("need at least one boundary policy");

  // Truncations touch the grounder and are built up front; the chains
  // themselves are independent and run in parallel.
  std::vector<Truncation> truncations;
  truncations.reserve(policies.size());
  for (BoundaryPolicy p : policies) {
    TruncationSpec spec = base;
    spec.policy = p;
    truncations.push_back(truncate(g, spec));
  }

  std::vector<std::future<MarginalEstimate>> futures;
  futures.reserve(policies.size());
  for (std::size_t i = 0; i < policies.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      return run_chain(truncations[i], base.query_atoms, sweeps, burnin, seed);
    }));
  }

  SensitivityReport report;
  report.query_atoms = base.query_atoms;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    SensitivityRun run;
    run.policy = policies[i];
    run.marginals = futures[i].get();
    report.runs.push_back(std::move(run));
  }

  for (std::size_t k = 0; k < base.query_atoms.size(); ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& run : report.runs) {
      lo = std::min(lo, run.marginals.estimate[k]);
      hi = std::max(hi, run.marginals.estimate[k]);
    }
    report.spread.push_back(hi - lo);
    report.max_spread = std::max(report.max_spread, hi - lo);
  }
  return report;
}

}  // namespace mli
