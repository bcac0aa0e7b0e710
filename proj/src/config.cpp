#include "visa/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "visa/bench.hpp"
#include "visa/errors.hpp"

namespace visa {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string canonical_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

}  // namespace

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size())
    throw ValidationError("'" + key + "' expects a number, got '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw ValidationError("'" + key + "' expects an integer, got '" + value + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("'" + key + "' expects true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  KeyValues* section = &cfg.global;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("config line " + std::to_string(lineno) + ": unterminated section");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.rfind("solver.", 0) != 0)
        throw ValidationError("config line " + std::to_string(lineno) + ": sections must be [solver.<name>]");
      section = &cfg.solvers[to_string(parse_solver(name.substr(7)))];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    (*section)[canonical_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void apply_solver_keys(SolverConfig& c, const KeyValues& kv) {
  for (const auto& [raw_key, v] : kv) {
    const std::string k = canonical_key(raw_key);
    if (k == "n_steps" || k == "steps") c.n_steps = static_cast<int>(parse_int(k, v));
    else if (k == "dt") c.dt = parse_double(k, v);
    else if (k == "eps") c.eps = parse_double(k, v);
    else if (k == "gamma0") c.gamma0 = parse_double(k, v);
    else if (k == "p0") c.p0 = parse_double(k, v);
    else if (k == "alpha") c.alpha = parse_double(k, v);
    else if (k == "p_rate") c.p_rate = parse_double(k, v);
    else if (k == "delta") c.delta = parse_double(k, v);
    else if (k == "mass") c.mass = parse_double(k, v);
    else if (k == "damping") c.damping = parse_double(k, v);
    else if (k == "beta0") c.beta0 = parse_double(k, v);
    else if (k == "sigma") c.sigma = parse_double(k, v);
    else if (k == "horizon") c.horizon = parse_double(k, v);
    else if (k == "coupling_scale") c.coupling_scale = parse_double(k, v);
    else if (k == "normalize_coupling") c.normalize_coupling = parse_bool(k, v);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(parse_int(k, v));
    else if (k == "init_scale") c.init_scale = parse_double(k, v);
    else if (k == "init_minor_scale") c.init_minor_scale = parse_double(k, v);
    else if (k == "visa_init") {
      if (v == "isotropic") c.visa_init = VisaInit::isotropic;
      else if (v == "matched") c.visa_init = VisaInit::matched;
      else throw ValidationError("visa_init expects isotropic|matched, got '" + v + "'");
    } else if (k == "divergence_bound") c.divergence_bound = parse_double(k, v);
    else if (k == "amplitude_floor") c.amplitude_floor = parse_double(k, v);
    else if (k == "clip") c.clip = parse_bool(k, v);
    else if (k == "trajectory_stride") c.trajectory_stride = static_cast<int>(parse_int(k, v));
    else if (k == "bfgs_max_iter") c.bfgs_max_iter = static_cast<int>(parse_int(k, v));
    else if (k == "bfgs_restarts") c.bfgs_restarts = static_cast<int>(parse_int(k, v));
    else throw ValidationError("unknown solver key '" + raw_key + "'");
  }
}

KeyValues describe(const SolverConfig& c) {
  auto d = format_double;
  auto od = [&](const std::optional<double>& v) { return v ? d(*v) : std::string("auto"); };
  return {
      {"solver", to_string(c.solver)},
      {"n_steps", std::to_string(c.n_steps)},
      {"dt", d(c.dt)},
      {"eps", d(c.eps)},
      {"gamma0", d(c.gamma0)},
      {"p0", od(c.p0)},
      {"alpha", od(c.alpha)},
      {"p_rate", d(c.p_rate)},
      {"delta", d(c.delta)},
      {"mass", d(c.mass)},
      {"damping", d(c.damping)},
      {"beta0", d(c.beta0)},
      {"sigma", d(c.sigma)},
      {"horizon", od(c.horizon)},
      {"coupling_scale", d(c.coupling_scale)},
      {"normalize_coupling", c.normalize_coupling ? "true" : "false"},
      {"seed", std::to_string(c.seed)},
      {"init_scale", d(c.init_scale)},
      {"visa_init", c.visa_init == VisaInit::matched ? "matched" : "isotropic"},
      {"init_minor_scale", d(c.init_minor_scale)},
      {"divergence_bound", d(c.divergence_bound)},
      {"amplitude_floor", d(c.amplitude_floor)},
      {"clip", c.clip ? "true" : "false"},
      {"trajectory_stride", std::to_string(c.trajectory_stride)},
      {"bfgs_max_iter", std::to_string(c.bfgs_max_iter)},
      {"bfgs_restarts", std::to_string(c.bfgs_restarts)},
  };
}

}  // namespace visa
