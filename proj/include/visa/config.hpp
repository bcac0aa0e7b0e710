#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "visa/solvers.hpp"

namespace visa {

using KeyValues = std::map<std::string, std::string>;

/// Flat "key = value" text. Keys before any section header are global;
/// "[solver.<name>]" starts a section for one solver. '#' and ';' start
/// comments. Dashes in keys are read as underscores.
struct ConfigFile {
  KeyValues global;
  std::map<std::string, KeyValues> solvers;  // keyed by canonical solver name
};

ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::string& path);

/// Sets every SolverConfig field named in kv. Unknown keys and unparsable
/// values throw ValidationError.
void apply_solver_keys(SolverConfig& cfg, const KeyValues& kv);

/// Every field of cfg as text; unset optionals print as "auto".
KeyValues describe(const SolverConfig& cfg);

double parse_double(const std::string& key, const std::string& value);
long long parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);
std::vector<std::string> split_list(const std::string& s, char sep = ',');

}  // namespace visa
