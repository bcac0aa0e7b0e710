#include <cmath>

#include "visa/errors.hpp"
#include "visa/solvers.hpp"

namespace visa {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::visa: return "visa";
    case SolverKind::cim: return "cim";
    case SolverKind::mr_cim: return "mrcim";
    case SolverKind::me_ht: return "meht";
    case SolverKind::svl: return "svl";
    case SolverKind::bfgs: return "bfgs";
  }
  return "?";
}

SolverKind parse_solver(const std::string& name) {
  if (name == "visa") return SolverKind::visa;
  if (name == "cim") return SolverKind::cim;
  if (name == "mrcim" || name == "mr-cim" || name == "mr_cim") return SolverKind::mr_cim;
  if (name == "meht" || name == "me-ht" || name == "me_ht") return SolverKind::me_ht;
  if (name == "svl") return SolverKind::svl;
  if (name == "bfgs") return SolverKind::bfgs;
  throw ValidationError("unknown solver '" + name + "' (expected visa|cim|mrcim|meht|svl|bfgs)");
}

SolverConfig default_config(SolverKind kind) {
  SolverConfig c;
  c.solver = kind;
  switch (kind) {
    case SolverKind::visa:
      // T = 300 keeps P(T) = 1.5 inside the RK4 stability limit at n = 8
      c.n_steps = 3000;
      c.eps = 0.03;
      c.gamma0 = -0.5;
      c.p_rate = 0.005;
      break;
    case SolverKind::cim:
    case SolverKind::mr_cim:
      c.n_steps = 10000;
      c.eps = 0.003;
      break;
    case SolverKind::me_ht:
      c.n_steps = 2000;
      c.damping = 0.99;
      c.beta0 = 1.5;
      break;
    case SolverKind::svl:
      c.n_steps = 1000;
      c.damping = 0.99;
      c.sigma = 0.1;
      break;
    case SolverKind::bfgs:
      break;
  }
  return c;
}

void validate(const SolverConfig& c) {
  require(c.dt > 0.0 && std::isfinite(c.dt), "dt must be positive");
  require(c.n_steps > 0, "n_steps must be positive");
  require(c.sigma >= 0.0, "noise scale sigma must be non-negative");
  require(c.init_scale >= 0.0 && c.init_minor_scale >= 0.0, "initial scales must be non-negative");
  require(c.divergence_bound > 0.0, "divergence bound must be positive");
  require(c.trajectory_stride >= 0, "trajectory stride must be non-negative");
  require(!c.horizon || *c.horizon > 0.0, "anneal horizon T must be positive");
  if (c.solver == SolverKind::mr_cim) require(c.delta > 0.0 && c.delta < 1.0, "MR-CIM delta must lie in (0, 1)");
  if (c.solver == SolverKind::visa) {
    require(c.eps > 0.0, "VISA gain-feedback rate eps must be positive");
    require(!c.alpha || *c.alpha > 0.0, "VISA alpha must be positive");
  }
  if (c.solver == SolverKind::me_ht || c.solver == SolverKind::svl) require(c.mass > 0.0, "mass must be positive");
  if (c.solver == SolverKind::bfgs) require(c.bfgs_max_iter > 0 && c.bfgs_restarts >= 0, "bad BFGS limits");
}

double resolved_alpha(const SolverConfig& c, const CouplingMatrix& J) {
  if (c.alpha) return *c.alpha;
  auto scaled_by_spectrum = [&](double numerator) {
    const double lmax = resolved_coupling_scale(c, J) * J.lambda_max();
    return lmax > 1e-12 ? numerator / lmax : numerator;
  };
  switch (c.solver) {
    case SolverKind::visa: return 4.0;
    case SolverKind::me_ht: return scaled_by_spectrum(2.5);
    case SolverKind::svl: return scaled_by_spectrum(1.0);
    default: return 1.0;
  }
}

double resolved_coupling_scale(const SolverConfig& c, const CouplingMatrix& J) {
  if (!c.normalize_coupling) return c.coupling_scale;
  const double lmax = J.lambda_max();
  return lmax > 1e-12 ? c.coupling_scale / lmax : c.coupling_scale;
}

double resolved_horizon(const SolverConfig& c) { return c.horizon ? *c.horizon : c.n_steps * c.dt; }

double resolved_p0(const SolverConfig& c, const CouplingMatrix& J) {
  if (c.p0) return *c.p0;
  // Pump starts exactly at the linear threshold of the leading mode.
  return -resolved_alpha(c, J) * resolved_coupling_scale(c, J) * J.lambda_max();
}

RunResult run_solver(const CouplingMatrix& J, const SolverConfig& cfg) {
  switch (cfg.solver) {
    case SolverKind::visa: return visa_run(J, cfg);
    case SolverKind::cim: return cim_run(J, cfg);
    case SolverKind::mr_cim: return mr_cim_run(J, cfg);
    case SolverKind::me_ht: return me_ht_run(J, cfg);
    case SolverKind::svl: return svl_run(J, cfg);
    case SolverKind::bfgs: return bfgs_run(J, cfg);
  }
  throw ValidationError("unhandled solver kind");
}

}  // namespace visa
