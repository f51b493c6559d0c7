#pragma once

// Text formats: dense matrix files with optional weight blocks, group
// algebra coefficient files, and state files.

#include <iosfwd>
#include <string>

#include "lptriple/grouptriple.hpp"
#include "lptriple/pspace.hpp"
#include "lptriple/qmetric.hpp"

namespace lpt::io {

std::string format_complex(Complex z);
Complex parse_complex(const std::string& s);

/// Matrix file: first line "rows cols", then rows of whitespace-separated
/// entries "re+imj"; optional trailing blocks "domain-weights:" and
/// "codomain-weights:" (absent blocks mean counting measure).
void write_matrix(std::ostream& out, const OperatorMatrix& m);
OperatorMatrix read_matrix(std::istream& in);

OperatorMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const OperatorMatrix& m);

/// Coefficient file: lines "element coefficient" with elements encoded as
/// integers ("3"), vectors ("1,-2"), or words ("aBa", uppercase = inverse).
GroupAlgElem read_coeffs(std::istream& in, const GroupModel& g);
GroupAlgElem read_coeffs_file(const std::string& path, const GroupModel& g);

/// State file: "point INDEX" or "trace" or "custom" followed by one weight
/// per line.
State read_state(std::istream& in, const UHFTower& tower);
State read_state_file(const std::string& path, const UHFTower& tower);

}  // namespace lpt::io
