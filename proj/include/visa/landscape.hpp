#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "visa/coupling.hpp"
#include "visa/dynamics.hpp"

namespace visa {

/// Analytic 3n x 3n Hessian of H_VISA with per-spin gains gamma.
/// Coordinates are ordered row-major: index 3i + p is component p of x_i.
Eigen::MatrixXd visa_hessian(const VectorState& x, const Vec& gamma, double P, double alpha,
                             const Eigen::MatrixXd& J);

/// Which energy function a landscape query is about. The CIM landscape is
/// E_CIM with pump p = gamma (P is ignored), one coordinate per spin.
enum class LandscapeModel { visa, cim };

enum class PointLabel { S0_min, S1_min, other_min, saddle, maximum };
std::string to_string(PointLabel label);
inline bool is_minimum(PointLabel l) {
  return l == PointLabel::S0_min || l == PointLabel::S1_min || l == PointLabel::other_min;
}

struct LandscapeParams {
  LandscapeModel model = LandscapeModel::visa;
  double gamma = 0.0;
  double P = 0.0;
  double alpha = 1.0;
  double distance_divisor = 0.0;  // 0 means n (the number of soft spins)
  double grad_tol = 1e-10;
  double dedup_tol = 1e-6;
  double zero_mode_tol = 1e-8;
  int max_newton_iter = 200;
};

struct CriticalPoint {
  Vec coords;  // length 3n (VISA, row-major) or n (CIM)
  double energy = 0.0;
  double grad_norm = 0.0;
  int hessian_index = 0;  // negative eigenvalues
  int zero_modes = 0;
  double distance = 0.0;  // ||x|| / divisor
  PointLabel label = PointLabel::other_min;
};

struct CriticalSearch {
  std::vector<CriticalPoint> points;
  int starts = 0;
  int non_converged = 0;
  int duplicates = 0;
  int rotation_orbits = 0;  // distinct points modulo global O(3) (VISA) or sign flip (CIM)
};

/// Energy and gradient of the selected landscape at flat coordinates.
double landscape_energy(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& coords);
Vec landscape_gradient(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& coords);
Eigen::MatrixXd landscape_hessian(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& coords);

/// Classifies a critical point by its Hessian spectrum and, for minima, by the
/// readout spins: S0 / S1 when they lie in the dihedral orbit (with global
/// flip) of the corresponding reference state. Requires n/2 even for the
/// S-labels; other n label every minimum other_min.
CriticalPoint classify_point(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& coords);

/// Newton iteration on grad = 0 (pseudo-inverse of the Hessian, so the
/// rotational zero modes are harmless) from n_starts uniform starts in
/// [-1, 1]^dim plus any extra starts given. Starts are independent and run in
/// parallel; start s uses seed derive_seed({seed, s}).
CriticalSearch find_critical_points(const CouplingMatrix& J, const LandscapeParams& lp, int n_starts,
                                    std::uint64_t seed, const std::vector<Vec>& extra_starts = {});

/// Distance between two points of the same landscape modulo the energy's
/// global symmetry: min over Q in O(3) of ||A - B Q|| for VISA (orthogonal
/// Procrustes), min over s = +-1 of ||a - s b|| for CIM.
double aligned_distance(LandscapeModel model, const Vec& a, const Vec& b);

/// min over index-1 saddles SP and over the S1 / S0 minima of
/// d(S1, SP) + d(SP, S0), divided by the distance divisor. Distances are
/// aligned_distance. Returns nullopt when no S1 minimum, S0 minimum or index-1
/// saddle was found.
std::optional<double> saddle_path_distance(const std::vector<CriticalPoint>& points, LandscapeModel model,
                                           double divisor);

/// Closed-form CIM and VISA starts located near the collinear S0 / S1 states,
/// so searches that must contain those minima do not depend on luck.
std::vector<Vec> reference_starts(const CouplingMatrix& J, LandscapeModel model, double amplitude);

struct BasinSample {
  Vec start;
  PointLabel label = PointLabel::other_min;
  double energy = 0.0;
  double magnetization = 0.0;  // |m| at the start point
  double correlation = 0.0;    // |X_corr| at the start point; NaN when undefined
};

struct BasinReport {
  std::vector<BasinSample> samples;
  int failures = 0;
  double fraction(PointLabel label) const;
};

/// |m| and |X_corr| of a VISA state (lag-1 cyclic correlation per axis).
/// An axis with zero variance makes X_corr undefined: returns NaN.
double magnetization_magnitude(const VectorState& x);
double correlation_magnitude(const VectorState& x);

/// Descends from one start; nullopt when the descent fails.
std::optional<BasinSample> basin_of(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& start);

/// Descends from each start (Newton where it is a descent direction, gradient
/// steps otherwise, Armijo backtracking) to a local minimum of H_VISA and
/// labels it. Parallel over starts; start s uses seed derive_seed({seed, s}).
BasinReport basins(const CouplingMatrix& J, const LandscapeParams& lp, int n_starts, std::uint64_t seed);

struct PhaseCell {
  double gamma = 0.0;
  double P = 0.0;
  std::string label;  // "S0", "S1" or "other"
  std::optional<double> e_s0, e_s1, e_min;
};

struct PhaseBoundaryPoint {
  double gamma;
  double P;
};

struct PhaseMap {
  std::vector<double> gammas;
  std::vector<double> Ps;
  std::vector<PhaseCell> cells;  // row-major: P outer, gamma inner
  std::vector<PhaseBoundaryPoint> boundary;
};

/// Global-minimum label on a (gamma, P) grid. The boundary is where the lowest
/// S0 and S1 minimum energies cross, interpolated linearly along gamma within
/// each row of constant P.
PhaseMap phase_map(const CouplingMatrix& J, const std::vector<double>& gammas, const std::vector<double>& Ps,
                   double alpha, int n_starts, std::uint64_t seed);

}  // namespace visa
