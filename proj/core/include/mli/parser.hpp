#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mli/program.hpp"

namespace mli {

// Parses a full program: type, function, and predicate declarations
// followed by weighted formulas, one item per line. '//' starts a comment.
// Free variables are implicitly universally quantified (outermost, in
// first-occurrence order) with types inferred from the positions they
// occupy. Throws ParseError.
Program parse_program(std::string_view text);

// Parses a single formula against an existing signature, applying the same
// implicit quantification. Used for query formulas given on a command line.
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

// Comma-separated ground atoms, e.g. "Q(0,s(0)),Q(s(0),0)".
std::vector<FormulaPtr> parse_ground_atoms(std::string_view text,
                                           const Signature& sig);

// Comma-separated ground atom assignments, e.g. "Q(0)=1,Q(s(0))=0".
std::vector<std::pair<FormulaPtr, bool>> parse_ground_assignments(
    std::string_view text, const Signature& sig);

}  // namespace mli
