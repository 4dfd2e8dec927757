#include "mli/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mli/errors.hpp"
#include "mli/format.hpp"

namespace mli {

double oscillation(std::span<const double> values) {
  if (values.empty())
    throw std::invalid_argument("oscillation of an empty sequence");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

AtomInteraction interaction_sum(Grounder& g, AtomId atom) {
  AtomInteraction out;
  out.atom = atom;
  for (const GroundClause& gc : g.clauses_containing(atom)) {
    if (!std::isfinite(gc.weight)) {
      throw RejectionError(
          "the uniqueness criterion is undefined for infinite weights "
          "(clause " +
          std::to_string(gc.source) + ")");
    }
    out.sum += static_cast<double>(gc.distinct_atoms - 1) * std::abs(gc.weight);
    ++out.clause_count;
  }
  return out;
}

std::string to_string(UniquenessVerdict v) {
  return v == UniquenessVerdict::UniqueCertified ? "unique-certified"
                                                 : "inconclusive";
}

UniquenessReport check_uniqueness(Grounder& g, int max_depth, int window) {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  if (window < 1) throw std::invalid_argument("window must be >= 1");

  UniquenessReport report;
  auto atoms = g.atoms_up_to_depth(max_depth);
  double running = 0.0;
  std::size_t next = 0;
  for (int d = 0; d <= max_depth; ++d) {
    for (; next < atoms.size() && g.store().atom(atoms[next]).depth == d;
         ++next) {
      AtomInteraction ai = interaction_sum(g, atoms[next]);
      ++report.atoms_scanned;
      if (ai.sum > running) {
        running = ai.sum;
        report.witness = ai.atom;
      }
    }
    report.per_depth_max.push_back(running);
  }
  report.supremum = running;

  report.stabilized = static_cast<int>(report.per_depth_max.size()) >= window;
  if (report.stabilized) {
    const double last = report.per_depth_max.back();
    for (int k = 1; k < window; ++k) {
      if (report.per_depth_max[report.per_depth_max.size() - 1 - k] != last) {
        report.stabilized = false;
        break;
      }
    }
  }

  if (report.stabilized && report.supremum < 2.0) {
    report.verdict = UniquenessVerdict::UniqueCertified;
    report.note =
        "interaction bound settled below 2; the measure is unique. This "
        "check is sufficient only: other routes to uniqueness are not "
        "examined.";
  } else if (!report.stabilized) {
    report.verdict = UniquenessVerdict::Inconclusive;
    report.note =
        "interaction bound still changing at the scan horizon; deepen the "
        "scan to certify.";
  } else {
    report.verdict = UniquenessVerdict::Inconclusive;
    report.note =
        "interaction bound is " + format_double(report.supremum) +
        " (not below 2); uniqueness can fail here but is not refuted. The "
        "bound is sufficient, not necessary.";
  }
  return report;
}

}  // namespace mli
