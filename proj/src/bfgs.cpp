#include <chrono>

#include "visa/errors.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"
#include "visa/solvers.hpp"

namespace visa {

double relaxation_energy(const Vec& x, const Eigen::MatrixXd& J) {
  return 0.25 * (1.0 - x.array().square()).square().sum() - 0.5 * x.dot(J * x);
}

Vec relaxation_gradient(const Vec& x, const Eigen::MatrixXd& J) {
  Vec g = -(J * x);
  g.array() -= x.array() * (1.0 - x.array().square());
  return g;
}

namespace {

struct BfgsOutcome {
  Vec x;
  double energy;
  bool converged;
  bool line_search_failed;
};

// Inverse-Hessian BFGS with Armijo backtracking.
BfgsOutcome minimize(const Eigen::MatrixXd& J, Vec x, int max_iter) {
  constexpr double kGradTol = 1e-8;
  constexpr double kArmijo = 1e-4;
  const Eigen::Index n = x.size();
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  double f = relaxation_energy(x, J);
  Vec g = relaxation_gradient(x, J);

  for (int it = 0; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < kGradTol) return {x, f, true, false};
    Vec d = -Hinv * g;
    double slope = g.dot(d);
    if (slope >= 0.0) {
      // Lost positive definiteness; fall back to steepest descent.
      Hinv.setIdentity();
      d = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    Vec x_new;
    double f_new = 0.0;
    for (;;) {
      x_new = x + step * d;
      f_new = relaxation_energy(x_new, J);
      if (f_new <= f + kArmijo * step * slope) break;
      step *= 0.5;
      if (step < 1e-16) return {x, f, false, true};
    }
    const Vec g_new = relaxation_gradient(x_new, J);
    const Vec s = x_new - x;
    const Vec y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    x = x_new;
    f = f_new;
    g = g_new;
  }
  return {x, f, g.lpNorm<Eigen::Infinity>() < kGradTol, false};
}

}  // namespace

RunResult bfgs_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const Eigen::MatrixXd Jw = resolved_coupling_scale(cfg, J) * J.weights();
  const int n = J.n();

  BfgsOutcome out{};
  for (int attempt = 0; attempt <= cfg.bfgs_restarts; ++attempt) {
    Rng rng(attempt == 0 ? cfg.seed : derive_seed({cfg.seed, 0xbf65u, static_cast<std::uint64_t>(attempt)}));
    Vec x(n);
    for (int i = 0; i < n; ++i) x(i) = rng.uniform(-1.0, 1.0);
    out = minimize(Jw, std::move(x), cfg.bfgs_max_iter);
    if (!out.line_search_failed) break;
  }

  RunResult r;
  r.solver = SolverKind::bfgs;
  r.spins = nearest_hypercube_corner(out.x);
  r.energy = ising_energy(J, r.spins);
  r.final_state = out.x;
  r.final_model_energy = out.energy;
  if (cfg.trajectory_stride > 0) r.trajectory.push_back({0.0, out.x, out.energy, r.energy});
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace visa
