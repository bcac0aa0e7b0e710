#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "visa/coupling.hpp"
#include "visa/dynamics.hpp"

namespace visa {

enum class SolverKind { visa, cim, mr_cim, me_ht, svl, bfgs };

std::string to_string(SolverKind kind);
SolverKind parse_solver(const std::string& name);

/// How VISA draws x(0). isotropic: every component uniform in
/// [-init_scale, init_scale]. matched: x_i = (a_i, b_i, b'_i) with a_i drawn
/// exactly as the scalar solvers draw x_i(0) for the same seed, and b from
/// [-init_minor_scale, init_minor_scale].
enum class VisaInit { isotropic, matched };

/// Every schedule and hyperparameter of every solver. Fields a solver does not
/// use are ignored. Optional fields get a solver-specific default at run time.
struct SolverConfig {
  SolverKind solver = SolverKind::visa;
  int n_steps = 4000;
  double dt = 0.1;
  double eps = 0.03;                 // VISA gain-feedback rate / CIM pump rate
  double gamma0 = -0.5;              // VISA initial gain
  std::optional<double> p0;          // CIM initial pump; default -alpha * lambda_max
  std::optional<double> alpha;       // VISA H1 stiffness or scalar coupling strength
  double p_rate = 0.005;             // VISA penalty ramp P(t) = p_rate * t
  double delta = 0.1;                // MR-CIM pull strength, in (0, 1)
  double mass = 1.0;                 // ME-HT / SVL
  double damping = 0.99;             // ME-HT / SVL
  double beta0 = 1.5;                // ME-HT anti-damping amplitude
  double sigma = 0.1;                // SVL noise scale
  std::optional<double> horizon;     // anneal length T; default n_steps * dt
  double coupling_scale = 1.0;       // dynamics see coupling_scale * J
  bool normalize_coupling = false;   // additionally divide J by lambda_max(J)
  std::uint64_t seed = 0;
  double init_scale = 0.01;
  VisaInit visa_init = VisaInit::isotropic;
  double init_minor_scale = 1e-4;
  double divergence_bound = 1e3;
  double amplitude_floor = 1e-12;    // MR-CIM skips components below this
  bool clip = true;                  // ME-HT clipping to [-1, 1]
  int trajectory_stride = 0;         // 0 disables trajectory capture
  int bfgs_max_iter = 2000;
  int bfgs_restarts = 5;
};

/// Defaults from the reference experiments for the given solver.
SolverConfig default_config(SolverKind kind);

/// Throws ValidationError naming the violated constraint.
void validate(const SolverConfig& cfg);

/// Resolved defaults that depend on the instance.
double resolved_alpha(const SolverConfig& cfg, const CouplingMatrix& J);
double resolved_horizon(const SolverConfig& cfg);
double resolved_coupling_scale(const SolverConfig& cfg, const CouplingMatrix& J);
double resolved_p0(const SolverConfig& cfg, const CouplingMatrix& J);

struct TrajectorySample {
  double t;
  Vec state;            // flat soft-spin state (x row-major for VISA, x for CIM/ME-HT, theta for SVL)
  double model_energy;  // H_VISA, E_CIM, ME-HT Lyapunov, H_SVL, or the BFGS relaxation
  double ising_energy;  // Ising energy of the spins read out at t
};

struct RunResult {
  SolverKind solver = SolverKind::visa;
  SpinConfig spins;
  double energy = 0.0;  // ising_energy(J, spins)
  std::optional<Eigen::Vector3d> axis;
  std::vector<TrajectorySample> trajectory;
  std::optional<bool> success;
  double wall_time = 0.0;  // seconds
  Vec final_state;
  double final_model_energy = 0.0;
};

// ---- VISA ----------------------------------------------------------------

struct VisaTerms {
  double h1, h2, h3;
  double total() const { return h1 + h2 + h3; }
};

/// H1 = alpha/4 sum (gamma_i - |x_i|^2)^2, H2 = -1/2 sum_ij J_ij x_i.x_j,
/// H3 = P/2 sum_ij |x_i x x_j|^2.
VisaTerms visa_energy_terms(const VectorState& x, const Vec& gamma, double P, double alpha, const Eigen::MatrixXd& J);
double visa_energy(const VectorState& x, const Vec& gamma, double P, double alpha, const CouplingMatrix& J);

/// -grad H_VISA:
///   alpha x_i (gamma_i - |x_i|^2) + sum_j J_ij x_j - 2P (x_i sum_j |x_j|^2 - sum_j x_j (x_i.x_j)).
/// O(n^2) for the coupling term, O(n) for the penalty via sum_j x_j x_j^T.
VectorState visa_rhs(const VectorState& x, const Vec& gamma, double P, double alpha, const CouplingMatrix& J);
void visa_rhs(const VectorState& x, const Vec& gamma, double P, double alpha, const Eigen::MatrixXd& J,
              VectorState& out);

/// Initial VISA state for cfg (isotropic or matched).
VectorState visa_initial_state(int n, const SolverConfig& cfg);

RunResult visa_run(const CouplingMatrix& J, const SolverConfig& cfg);
RunResult visa_run(const CouplingMatrix& J, const SolverConfig& cfg, const VectorState& x0);

// ---- Scalar gain-based solvers -------------------------------------------

/// Scalar amplitudes x_i(0) uniform in [-init_scale, init_scale]; the same
/// draws VISA's matched mode uses for its first component.
Vec scalar_initial_state(int n, const SolverConfig& cfg);

/// E_CIM = 1/4 sum (p - x_i^2)^2 - alpha/2 sum_ij J_ij x_i x_j.
double cim_energy(const Vec& x, double p, double alpha, const Eigen::MatrixXd& J);
/// p x_i - x_i^3 + alpha sum_j J_ij x_j.
Vec cim_rhs(const Vec& x, double p, double alpha, const Eigen::MatrixXd& J);

RunResult cim_run(const CouplingMatrix& J, const SolverConfig& cfg);
RunResult cim_run(const CouplingMatrix& J, const SolverConfig& cfg, const Vec& x0);

/// x_i <- (1 - delta) x_i + delta R(x) x_i / |x_i| with R = sum x_i^2 / n.
/// Components with |x_i| < floor are left untouched.
void mr_cim_map(Vec& x, double delta, double floor = 1e-12);

RunResult mr_cim_run(const CouplingMatrix& J, const SolverConfig& cfg);

/// Momentum-enhanced Hopfield-Tank, state (x, v):
///   x' = v,  m v' = -damping v + beta(t) x + alpha g'(x_i) sum_j J_ij g(x_j),  g = tanh.
/// The coupling force is -alpha d/dx_i of H_I(g(x)) = -1/2 g^T J g, so for
/// frozen beta the Lyapunov function below decreases at rate damping |v|^2.
Vec me_ht_rhs(const Vec& state, double beta, double alpha, double mass, double damping, const Eigen::MatrixXd& J);
/// m/2 |v|^2 - beta/2 |x|^2 - alpha/2 g(x)^T J g(x).
double me_ht_energy(const Vec& state, double beta, double alpha, double mass, const Eigen::MatrixXd& J);

RunResult me_ht_run(const CouplingMatrix& J, const SolverConfig& cfg);

/// H(theta) = -A sum cos(theta_i) - B/2 sum_ij J_ij sin(theta_i) sin(theta_j).
double svl_energy(const Vec& theta, double A, double B, const Eigen::MatrixXd& J);
/// dH/dtheta_i = -B sum_j J_ij cos(theta_i) sin(theta_j) + A sin(theta_i).
Vec svl_gradient(const Vec& theta, double A, double B, const Eigen::MatrixXd& J);

RunResult svl_run(const CouplingMatrix& J, const SolverConfig& cfg);

// ---- BFGS baseline --------------------------------------------------------

/// E(x) = 1/4 sum (1 - x_i^2)^2 - 1/2 sum_ij J_ij x_i x_j.
double relaxation_energy(const Vec& x, const Eigen::MatrixXd& J);
Vec relaxation_gradient(const Vec& x, const Eigen::MatrixXd& J);

RunResult bfgs_run(const CouplingMatrix& J, const SolverConfig& cfg);

/// Dispatches on cfg.solver.
RunResult run_solver(const CouplingMatrix& J, const SolverConfig& cfg);

}  // namespace visa
