#include <chrono>
#include <cmath>
#include <numbers>

#include "visa/errors.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"
#include "visa/solvers.hpp"

namespace visa {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool wants_sample(const SolverConfig& cfg, int completed_steps) {
  return cfg.trajectory_stride > 0 &&
         (completed_steps % cfg.trajectory_stride == 0 || completed_steps == cfg.n_steps);
}

void guard(const Eigen::Ref<const Vec>& x, double bound, const char* who, double t) {
  if (x.cwiseAbs().maxCoeff() > bound)
    throw DivergenceError(std::string(who) + " amplitude exceeded " + std::to_string(bound) + " at t = " +
                          std::to_string(t));
}

RunResult finish(const CouplingMatrix& J, SolverKind kind, const Vec& spins_source, Vec final_state,
                 double model_energy, Clock::time_point t0) {
  RunResult r;
  r.solver = kind;
  r.spins = nearest_hypercube_corner(spins_source);
  r.energy = ising_energy(J, r.spins);
  r.final_state = std::move(final_state);
  r.final_model_energy = model_energy;
  r.wall_time = seconds_since(t0);
  return r;
}

// Shared CIM / MR-CIM loop; MR-CIM applies its map after every step.
RunResult cim_family_run(const CouplingMatrix& J, const SolverConfig& cfg, const Vec& x0, bool manifold_reduction) {
  validate(cfg);
  require(x0.size() == J.n(), "initial state size does not match coupling matrix");
  const auto t0 = Clock::now();
  const Eigen::MatrixXd Jw = resolved_coupling_scale(cfg, J) * J.weights();
  const double alpha = resolved_alpha(cfg, J);
  const double p0 = resolved_p0(cfg, J);
  const double eps = cfg.eps;

  VectorField f = [&](double t, const Vec& x, Vec& dx) {
    const double p = tanh_pump(t, p0, eps);
    dx.noalias() = alpha * (Jw * x);
    dx.array() += p * x.array() - x.array().cube();
  };

  const SolverKind kind = manifold_reduction ? SolverKind::mr_cim : SolverKind::cim;
  Vec x = x0;
  std::vector<TrajectorySample> traj;
  auto sample = [&](double t) {
    traj.push_back({t, x, cim_energy(x, tanh_pump(t, p0, eps), alpha, Jw), ising_energy(J, nearest_hypercube_corner(x))});
  };
  if (cfg.trajectory_stride > 0) sample(0.0);

  Rk4Workspace ws;
  for (int step = 0; step < cfg.n_steps; ++step) {
    const double t = step * cfg.dt;
    rk4_step(f, x, t, cfg.dt, ws);
    if (manifold_reduction) mr_cim_map(x, cfg.delta, cfg.amplitude_floor);
    guard(x, cfg.divergence_bound, manifold_reduction ? "MR-CIM" : "CIM", t + cfg.dt);
    if (wants_sample(cfg, step + 1)) sample((step + 1) * cfg.dt);
  }
  const double T = cfg.n_steps * cfg.dt;
  RunResult r = finish(J, kind, x, x, cim_energy(x, tanh_pump(T, p0, eps), alpha, Jw), t0);
  r.trajectory = std::move(traj);
  return r;
}

}  // namespace

Vec scalar_initial_state(int n, const SolverConfig& cfg) {
  Rng rng(cfg.seed);
  Vec x(n);
  for (int i = 0; i < n; ++i) x(i) = rng.uniform(-cfg.init_scale, cfg.init_scale);
  return x;
}

// ---- CIM -------------------------------------------------------------------

double cim_energy(const Vec& x, double p, double alpha, const Eigen::MatrixXd& J) {
  return 0.25 * (p - x.array().square()).square().sum() - 0.5 * alpha * x.dot(J * x);
}

Vec cim_rhs(const Vec& x, double p, double alpha, const Eigen::MatrixXd& J) {
  Vec dx = alpha * (J * x);
  dx.array() += p * x.array() - x.array().cube();
  return dx;
}

RunResult cim_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  return cim_family_run(J, cfg, scalar_initial_state(J.n(), cfg), false);
}

RunResult cim_run(const CouplingMatrix& J, const SolverConfig& cfg, const Vec& x0) {
  return cim_family_run(J, cfg, x0, false);
}

void mr_cim_map(Vec& x, double delta, double floor) {
  const double R = x.squaredNorm() / static_cast<double>(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    if (a < floor) continue;
    x(i) = (1.0 - delta) * x(i) + delta * R * x(i) / a;
  }
}

RunResult mr_cim_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  return cim_family_run(J, cfg, scalar_initial_state(J.n(), cfg), true);
}

// ---- ME-HT -----------------------------------------------------------------

Vec me_ht_rhs(const Vec& state, double beta, double alpha, double mass, double damping, const Eigen::MatrixXd& J) {
  const Eigen::Index n = state.size() / 2;
  const auto x = state.head(n);
  const auto v = state.tail(n);
  const Vec g = x.array().tanh();
  const Vec gprime = 1.0 - g.array().square();
  const Vec force = gprime.cwiseProduct(J * g);
  Vec ds(2 * n);
  ds.head(n) = v;
  ds.tail(n) = (-damping * v + beta * x + alpha * force) / mass;
  return ds;
}

double me_ht_energy(const Vec& state, double beta, double alpha, double mass, const Eigen::MatrixXd& J) {
  const Eigen::Index n = state.size() / 2;
  const auto x = state.head(n);
  const auto v = state.tail(n);
  const Vec g = x.array().tanh();
  return 0.5 * mass * v.squaredNorm() - 0.5 * beta * x.squaredNorm() - 0.5 * alpha * g.dot(J * g);
}

RunResult me_ht_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  const int n = J.n();
  const Eigen::MatrixXd Jw = resolved_coupling_scale(cfg, J) * J.weights();
  const double alpha = resolved_alpha(cfg, J);
  const double T = resolved_horizon(cfg);
  const double beta0 = cfg.beta0, mass = cfg.mass, damping = cfg.damping;

  VectorField f = [&](double t, const Vec& s, Vec& ds) {
    ds = me_ht_rhs(s, beta_decay(t, beta0, T), alpha, mass, damping, Jw);
  };

  Vec s = Vec::Zero(2 * n);
  s.head(n) = scalar_initial_state(n, cfg);
  std::vector<TrajectorySample> traj;
  auto sample = [&](double t) {
    traj.push_back({t, s.head(n), me_ht_energy(s, beta_decay(t, beta0, T), alpha, mass, Jw),
                    ising_energy(J, nearest_hypercube_corner(s.head(n)))});
  };
  if (cfg.trajectory_stride > 0) sample(0.0);

  Rk4Workspace ws;
  for (int step = 0; step < cfg.n_steps; ++step) {
    const double t = step * cfg.dt;
    rk4_step(f, s, t, cfg.dt, ws);
    if (cfg.clip) {
      // Inelastic wall: clipped amplitudes lose their velocity.
      for (int i = 0; i < n; ++i) {
        if (std::abs(s(i)) > 1.0) {
          s(i) = s(i) > 0.0 ? 1.0 : -1.0;
          s(n + i) = 0.0;
        }
      }
    }
    guard(s, cfg.divergence_bound, "ME-HT", t + cfg.dt);
    if (wants_sample(cfg, step + 1)) sample((step + 1) * cfg.dt);
  }
  const double tend = cfg.n_steps * cfg.dt;
  RunResult r = finish(J, SolverKind::me_ht, s.head(n), s, me_ht_energy(s, beta_decay(tend, beta0, T), alpha, mass, Jw), t0);
  r.trajectory = std::move(traj);
  return r;
}

// ---- SVL -------------------------------------------------------------------

double svl_energy(const Vec& theta, double A, double B, const Eigen::MatrixXd& J) {
  const Vec s = theta.array().sin();
  return -A * theta.array().cos().sum() - 0.5 * B * s.dot(J * s);
}

Vec svl_gradient(const Vec& theta, double A, double B, const Eigen::MatrixXd& J) {
  const Vec s = theta.array().sin();
  const Vec c = theta.array().cos();
  return -B * c.cwiseProduct(J * s) + A * s;
}

RunResult svl_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  validate(cfg);
  const auto t0 = Clock::now();
  const int n = J.n();
  const Eigen::MatrixXd Jw = resolved_coupling_scale(cfg, J) * J.weights();
  const double alpha = resolved_alpha(cfg, J);
  const double T = resolved_horizon(cfg);
  const double mass = cfg.mass, damping = cfg.damping;

  // state = [theta | p], p = m theta'
  VectorField f = [&](double t, const Vec& s, Vec& ds) {
    const Interp ab = linear_interp(t, T);
    const auto theta = s.head(n);
    const auto p = s.tail(n);
    ds.resize(2 * n);
    ds.head(n) = p / mass;
    ds.tail(n) = -(damping / mass) * p - alpha * svl_gradient(theta, ab.A, ab.B, Jw);
  };

  Rng rng(derive_seed({cfg.seed, 0x5f1u}));
  Vec s = Vec::Zero(2 * n);
  for (int i = 0; i < n; ++i) s(i) = rng.uniform(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);

  // Noise acts on the momenta only.
  Vec sigma = Vec::Zero(2 * n);
  sigma.tail(n).setConstant(cfg.sigma);

  std::vector<TrajectorySample> traj;
  auto sample = [&](double t) {
    const Interp ab = linear_interp(t, T);
    const Vec sn = s.head(n).array().sin();
    traj.push_back({t, s.head(n), svl_energy(s.head(n), ab.A, ab.B, Jw), ising_energy(J, nearest_hypercube_corner(sn))});
  };
  if (cfg.trajectory_stride > 0) sample(0.0);

  Rk4Workspace ws;
  Vec drift;
  for (int step = 0; step < cfg.n_steps; ++step) {
    const double t = step * cfg.dt;
    if (cfg.sigma > 0.0)
      em_step(f, sigma, s, t, cfg.dt, rng, drift);
    else
      rk4_step(f, s, t, cfg.dt, ws);
    guard(s.tail(n), cfg.divergence_bound, "SVL momentum", t + cfg.dt);
    if (wants_sample(cfg, step + 1)) sample((step + 1) * cfg.dt);
  }
  const Vec sn = s.head(n).array().sin();
  const Interp ab = linear_interp(cfg.n_steps * cfg.dt, T);
  RunResult r = finish(J, SolverKind::svl, sn, s, svl_energy(s.head(n), ab.A, ab.B, Jw), t0);
  r.trajectory = std::move(traj);
  return r;
}

}  // namespace visa
