#include <chrono>

#include "visa/errors.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"
#include "visa/solvers.hpp"

namespace visa {

namespace {

using ConstStateRef = Eigen::Ref<const VectorState>;
using StateMap = Eigen::Map<VectorState>;
using ConstStateMap = Eigen::Map<const VectorState>;

template <typename Out>
void rhs_kernel(const ConstStateRef& x, const Eigen::Ref<const Vec>& gamma, double P, double alpha,
                const Eigen::MatrixXd& J, Out&& out) {
  const Vec r2 = x.rowwise().squaredNorm();
  const double S = r2.sum();
  const Eigen::Matrix3d C = x.transpose() * x;
  out.noalias() = J * x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::RowVector3d xi = x.row(i);
    out.row(i) += alpha * (gamma(i) - r2(i)) * xi - 2.0 * P * (S * xi - xi * C);
  }
}

VisaTerms terms_kernel(const ConstStateRef& x, const Eigen::Ref<const Vec>& gamma, double P, double alpha,
                       const Eigen::MatrixXd& J) {
  const Vec r2 = x.rowwise().squaredNorm();
  const double S = r2.sum();
  const Eigen::Matrix3d C = x.transpose() * x;
  VisaTerms t{};
  t.h1 = 0.25 * alpha * (gamma - r2).squaredNorm();
  t.h2 = -0.5 * (x.transpose() * J * x).trace();
  // sum_ij |x_i x x_j|^2 = sum_ij |x_i|^2 |x_j|^2 - (x_i.x_j)^2 = S^2 - ||X^T X||_F^2
  t.h3 = 0.5 * P * (S * S - C.squaredNorm());
  return t;
}

}  // namespace

VisaTerms visa_energy_terms(const VectorState& x, const Vec& gamma, double P, double alpha, const Eigen::MatrixXd& J) {
  require(x.rows() == J.rows() && gamma.size() == J.rows(), "VISA state dimensions do not match coupling matrix");
  return terms_kernel(x, gamma, P, alpha, J);
}

double visa_energy(const VectorState& x, const Vec& gamma, double P, double alpha, const CouplingMatrix& J) {
  return visa_energy_terms(x, gamma, P, alpha, J.weights()).total();
}

void visa_rhs(const VectorState& x, const Vec& gamma, double P, double alpha, const Eigen::MatrixXd& J,
              VectorState& out) {
  require(x.rows() == J.rows() && gamma.size() == J.rows(), "VISA state dimensions do not match coupling matrix");
  out.resize(x.rows(), 3);
  rhs_kernel(x, gamma, P, alpha, J, out);
}

VectorState visa_rhs(const VectorState& x, const Vec& gamma, double P, double alpha, const CouplingMatrix& J) {
  VectorState out;
  visa_rhs(x, gamma, P, alpha, J.weights(), out);
  return out;
}

VectorState visa_initial_state(int n, const SolverConfig& cfg) {
  VectorState x(n, 3);
  Rng rng(cfg.seed);
  if (cfg.visa_init == VisaInit::matched) {
    // First n draws match scalar_initial_state for the same seed.
    for (int i = 0; i < n; ++i) x(i, 0) = rng.uniform(-cfg.init_scale, cfg.init_scale);
    for (int i = 0; i < n; ++i)
      for (int c = 1; c < 3; ++c) x(i, c) = rng.uniform(-cfg.init_minor_scale, cfg.init_minor_scale);
  } else {
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < 3; ++c) x(i, c) = rng.uniform(-cfg.init_scale, cfg.init_scale);
  }
  return x;
}

RunResult visa_run(const CouplingMatrix& J, const SolverConfig& cfg) {
  return visa_run(J, cfg, visa_initial_state(J.n(), cfg));
}

RunResult visa_run(const CouplingMatrix& J, const SolverConfig& cfg, const VectorState& x0) {
  validate(cfg);
  const int n = J.n();
  require(x0.rows() == n, "initial state size does not match coupling matrix");
  const auto started = std::chrono::steady_clock::now();

  const Eigen::MatrixXd Jw = resolved_coupling_scale(cfg, J) * J.weights();
  const double alpha = resolved_alpha(cfg, J);
  const double eps = cfg.eps;
  const double rate = cfg.p_rate;

  // y = [x row-major (3n) | gamma (n)]
  Vec y(4 * n);
  StateMap(y.data(), n, 3) = x0;
  y.tail(n).setConstant(cfg.gamma0);

  VectorField f = [&](double t, const Vec& s, Vec& ds) {
    ConstStateMap x(s.data(), n, 3);
    const auto gamma = s.tail(n);
    rhs_kernel(x, gamma, linear_ramp(t, rate), alpha, Jw, StateMap(ds.data(), n, 3));
    for (int i = 0; i < n; ++i) ds(3 * n + i) = gain_feedback_rate(x.row(i).squaredNorm(), eps);
  };

  RunResult result;
  result.solver = SolverKind::visa;
  auto sample = [&](double t) {
    ConstStateMap x(y.data(), n, 3);
    TrajectorySample s{t, y.head(3 * n), terms_kernel(x, y.tail(n), linear_ramp(t, rate), alpha, Jw).total(), 0.0};
    s.ising_energy = x.cwiseAbs().maxCoeff() > 0.0 ? ising_energy(J, vector_readout(x).spins) : 0.0;
    result.trajectory.push_back(std::move(s));
  };

  Rk4Workspace ws;
  const double bound2 = cfg.divergence_bound * cfg.divergence_bound;
  if (cfg.trajectory_stride > 0) sample(0.0);
  for (int step = 0; step < cfg.n_steps; ++step) {
    const double t = step * cfg.dt;
    rk4_step(f, y, t, cfg.dt, ws);
    ConstStateMap x(y.data(), n, 3);
    if (x.rowwise().squaredNorm().maxCoeff() > bound2)
      throw DivergenceError("VISA amplitude exceeded " + std::to_string(cfg.divergence_bound) + " at t = " +
                            std::to_string(t + cfg.dt));
    if (cfg.trajectory_stride > 0 && ((step + 1) % cfg.trajectory_stride == 0 || step + 1 == cfg.n_steps))
      sample((step + 1) * cfg.dt);
  }

  const double T = cfg.n_steps * cfg.dt;
  ConstStateMap x(y.data(), n, 3);
  Readout r = vector_readout(x);
  result.energy = ising_energy(J, r.spins);
  result.spins = std::move(r.spins);
  result.axis = r.axis;
  result.final_state = y;
  result.final_model_energy = terms_kernel(x, y.tail(n), linear_ramp(T, rate), alpha, Jw).total();
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace visa
