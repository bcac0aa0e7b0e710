#pragma once

#include <iosfwd>
#include <string>

#include "visa/coupling.hpp"

namespace visa {

// Text format:
//   N <n>
//   i j w      one line per nonzero upper-triangle edge, 0-based, i < j
//   H i v      optional field entries
// Blank lines and lines starting with '#' are ignored.

void write_matrix(std::ostream& out, const CouplingMatrix& J);
CouplingMatrix read_matrix(std::istream& in);

void save_matrix(const std::string& path, const CouplingMatrix& J);
CouplingMatrix load_matrix(const std::string& path);

}  // namespace visa
