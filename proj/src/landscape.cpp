#include "visa/landscape.hpp"

#include <algorithm>
#include <cmath>

#include "visa/errors.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"
#include "visa/solvers.hpp"

namespace visa {

namespace {

using ConstStateMap = Eigen::Map<const VectorState>;

int dim_per_spin(LandscapeModel m) { return m == LandscapeModel::visa ? 3 : 1; }

double divisor_for(const LandscapeParams& lp, int n) { return lp.distance_divisor > 0.0 ? lp.distance_divisor : n; }

struct Spectrum {
  int negative = 0, zero = 0, positive = 0;
};

Spectrum count_signs(const Vec& eig, double tol) {
  Spectrum s;
  for (double e : eig) {
    if (e < -tol) ++s.negative;
    else if (e > tol) ++s.positive;
    else ++s.zero;
  }
  return s;
}

SpinConfig readout_spins(LandscapeModel model, const Vec& coords, int n) {
  if (model == LandscapeModel::cim) return nearest_hypercube_corner(coords);
  return vector_readout(ConstStateMap(coords.data(), n, 3)).spins;
}

// Pseudo-inverse Newton step; directions with |lambda| below the cutoff are dropped.
Vec newton_step(const Eigen::MatrixXd& H, const Vec& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  const Vec& w = es.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, w.cwiseAbs().maxCoeff());
  Vec proj = es.eigenvectors().transpose() * g;
  for (Eigen::Index k = 0; k < w.size(); ++k) proj(k) = std::abs(w(k)) > cutoff ? proj(k) / w(k) : 0.0;
  return -(es.eigenvectors() * proj);
}

Vec random_start(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Vec x(dim);
  for (int k = 0; k < dim; ++k) x(k) = rng.uniform(-1.0, 1.0);
  return x;
}

std::optional<Vec> newton_solve(const CouplingMatrix& J, const LandscapeParams& lp, Vec x) {
  const double max_step = 1.0;
  for (int it = 0; it < lp.max_newton_iter; ++it) {
    const Vec g = landscape_gradient(J, lp, x);
    if (!g.allFinite()) return std::nullopt;
    if (g.norm() < lp.grad_tol) return x;
    Vec step = newton_step(landscape_hessian(J, lp, x), g);
    const double len = step.norm();
    if (len > max_step) step *= max_step / len;
    x += step;
    if (x.cwiseAbs().maxCoeff() > 1e3) return std::nullopt;
  }
  if (landscape_gradient(J, lp, x).norm() < lp.grad_tol) return x;
  return std::nullopt;
}

// Gram matrix: invariant under the energy's global symmetry group.
Eigen::MatrixXd gram(LandscapeModel model, const Vec& c, int n) {
  if (model == LandscapeModel::cim) return c * c.transpose();
  ConstStateMap x(c.data(), n, 3);
  return x * x.transpose();
}

}  // namespace

std::string to_string(PointLabel label) {
  switch (label) {
    case PointLabel::S0_min: return "S0_min";
    case PointLabel::S1_min: return "S1_min";
    case PointLabel::other_min: return "other_min";
    case PointLabel::saddle: return "saddle";
    case PointLabel::maximum: return "maximum";
  }
  return "?";
}

Eigen::MatrixXd visa_hessian(const VectorState& x, const Vec& gamma, double P, double alpha,
                             const Eigen::MatrixXd& J) {
  const Eigen::Index n = x.rows();
  require(J.rows() == n && gamma.size() == n, "VISA state dimensions do not match coupling matrix");
  const Vec r2 = x.rowwise().squaredNorm();
  const double S = r2.sum();
  const Eigen::Matrix3d C = x.transpose() * x;
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();

  Eigen::MatrixXd H(3 * n, 3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d xi = x.row(i).transpose();
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Vector3d xk = x.row(k).transpose();
      // penalty block: 2P [2 x_i x_k^T - x_k x_i^T - (x_i.x_k) I + delta_ik (S I - C)]
      Eigen::Matrix3d B = 2.0 * P * (2.0 * xi * xk.transpose() - xk * xi.transpose() - xi.dot(xk) * I);
      B -= J(i, k) * I;
      if (i == k) {
        B += 2.0 * P * (S * I - C);
        B += -alpha * (gamma(i) - r2(i)) * I + 2.0 * alpha * xi * xi.transpose();
      }
      H.block<3, 3>(3 * i, 3 * k) = B;
    }
  }
  // exact symmetry; the blocks agree only to round-off
  return 0.5 * (H + H.transpose()).eval();
}

double landscape_energy(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& c) {
  const int n = J.n();
  if (lp.model == LandscapeModel::cim) return cim_energy(c, lp.gamma, lp.alpha, J.weights());
  const VectorState x = ConstStateMap(c.data(), n, 3);
  return visa_energy_terms(x, Vec::Constant(n, lp.gamma), lp.P, lp.alpha, J.weights()).total();
}

Vec landscape_gradient(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& c) {
  const int n = J.n();
  if (lp.model == LandscapeModel::cim) return -cim_rhs(c, lp.gamma, lp.alpha, J.weights());
  const VectorState x = ConstStateMap(c.data(), n, 3);
  VectorState out;
  visa_rhs(x, Vec::Constant(n, lp.gamma), lp.P, lp.alpha, J.weights(), out);
  return -Eigen::Map<const Vec>(out.data(), 3 * n);
}

Eigen::MatrixXd landscape_hessian(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& c) {
  const int n = J.n();
  if (lp.model == LandscapeModel::cim) {
    Eigen::MatrixXd H = -lp.alpha * J.weights();
    for (int i = 0; i < n; ++i) H(i, i) += 3.0 * c(i) * c(i) - lp.gamma;
    return H;
  }
  const VectorState x = ConstStateMap(c.data(), n, 3);
  return visa_hessian(x, Vec::Constant(n, lp.gamma), lp.P, lp.alpha, J.weights());
}

CriticalPoint classify_point(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& coords) {
  const int n = J.n();
  CriticalPoint p;
  p.coords = coords;
  p.energy = landscape_energy(J, lp, coords);
  p.grad_norm = landscape_gradient(J, lp, coords).norm();
  p.distance = coords.norm() / divisor_for(lp, n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(landscape_hessian(J, lp, coords), Eigen::EigenvaluesOnly);
  const Spectrum sp = count_signs(es.eigenvalues(), lp.zero_mode_tol);
  p.hessian_index = sp.negative;
  p.zero_modes = sp.zero;
  if (sp.negative > 0) {
    p.label = sp.positive == 0 ? PointLabel::maximum : PointLabel::saddle;
    return p;
  }
  p.label = PointLabel::other_min;
  if (n % 4 != 0 || coords.norm() < 1e-8) return p;
  const SpinConfig s = readout_spins(lp.model, coords, n);
  if (same_dihedral_orbit(reference_state(n, ReferenceFamily::S0), s)) p.label = PointLabel::S0_min;
  else if (same_dihedral_orbit(reference_state(n, ReferenceFamily::S1), s)) p.label = PointLabel::S1_min;
  return p;
}

CriticalSearch find_critical_points(const CouplingMatrix& J, const LandscapeParams& lp, int n_starts,
                                    std::uint64_t seed, const std::vector<Vec>& extra_starts) {
  require(n_starts >= 0 && n_starts + static_cast<int>(extra_starts.size()) >= 1, "need at least one start");
  const int n = J.n();
  const int dim = n * dim_per_spin(lp.model);
  for (const Vec& e : extra_starts) require(e.size() == dim, "extra start has the wrong dimension");

  const int total = n_starts + static_cast<int>(extra_starts.size());
  std::vector<std::optional<Vec>> found(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 8)
  for (int s = 0; s < total; ++s) {
    Vec x0 = s < n_starts ? random_start(dim, derive_seed({seed, static_cast<std::uint64_t>(s)}))
                          : extra_starts[static_cast<std::size_t>(s - n_starts)];
    found[static_cast<std::size_t>(s)] = newton_solve(J, lp, std::move(x0));
  }

  CriticalSearch out;
  out.starts = total;
  std::vector<Eigen::MatrixXd> orbit_reps;
  for (auto& f : found) {
    if (!f) {
      ++out.non_converged;
      continue;
    }
    const bool dup = std::any_of(out.points.begin(), out.points.end(),
                                 [&](const CriticalPoint& q) { return (q.coords - *f).norm() < lp.dedup_tol; });
    if (dup) {
      ++out.duplicates;
      continue;
    }
    out.points.push_back(classify_point(J, lp, *f));
    const Eigen::MatrixXd G = gram(lp.model, *f, n);
    const bool seen = std::any_of(orbit_reps.begin(), orbit_reps.end(), [&](const Eigen::MatrixXd& R) {
      return (R - G).norm() < lp.dedup_tol * std::max(1.0, G.norm());
    });
    if (!seen) orbit_reps.push_back(G);
  }
  out.rotation_orbits = static_cast<int>(orbit_reps.size());
  return out;
}

double aligned_distance(LandscapeModel model, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "aligned_distance: size mismatch");
  if (model == LandscapeModel::cim) return std::min((a - b).norm(), (a + b).norm());
  const Eigen::Index n = a.size() / 3;
  ConstStateMap A(a.data(), n, 3), B(b.data(), n, 3);
  // orthogonal Procrustes: Q = U V^T from B^T A = U S V^T; evaluated directly to avoid cancellation
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(B.transpose() * A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix3d Q = svd.matrixU() * svd.matrixV().transpose();
  return (A - B * Q).norm();
}

std::optional<double> saddle_path_distance(const std::vector<CriticalPoint>& points, LandscapeModel model,
                                           double divisor) {
  require(divisor > 0.0, "distance divisor must be positive");
  std::vector<const CriticalPoint*> s1, s0, sp;
  for (const auto& p : points) {
    if (p.label == PointLabel::S1_min) s1.push_back(&p);
    else if (p.label == PointLabel::S0_min) s0.push_back(&p);
    else if (p.label == PointLabel::saddle && p.hessian_index == 1) sp.push_back(&p);
  }
  if (s1.empty() || s0.empty() || sp.empty()) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (const auto* saddle : sp) {
    double to_s1 = std::numeric_limits<double>::infinity(), to_s0 = to_s1;
    for (const auto* m : s1) to_s1 = std::min(to_s1, aligned_distance(model, m->coords, saddle->coords));
    for (const auto* m : s0) to_s0 = std::min(to_s0, aligned_distance(model, saddle->coords, m->coords));
    best = std::min(best, to_s1 + to_s0);
  }
  return best / divisor;
}

std::vector<Vec> reference_starts(const CouplingMatrix& J, LandscapeModel model, double amplitude) {
  const int n = J.n();
  std::vector<Vec> starts;
  if (n % 4 != 0) return starts;
  for (auto fam : {ReferenceFamily::S0, ReferenceFamily::S1}) {
    const Vec s = reference_state(n, fam).as_vector();
    if (model == LandscapeModel::cim) {
      starts.push_back(amplitude * s);
      continue;
    }
    // collinear along a tilted axis so no component is identically zero
    const Eigen::Vector3d axis = Eigen::Vector3d(0.36, 0.48, 0.8).normalized();
    Vec c(3 * n);
    for (int i = 0; i < n; ++i) c.segment<3>(3 * i) = amplitude * s(i) * axis;
    starts.push_back(c);
  }
  return starts;
}

double BasinReport::fraction(PointLabel label) const {
  if (samples.empty()) return 0.0;
  const auto hits = std::count_if(samples.begin(), samples.end(), [&](const BasinSample& b) { return b.label == label; });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double magnetization_magnitude(const VectorState& x) {
  return (x.colwise().sum() / static_cast<double>(x.rows())).norm();
}

double correlation_magnitude(const VectorState& x) {
  const Eigen::Index n = x.rows();
  double sum = 0.0;
  for (int p = 0; p < 3; ++p) {
    const double m = x.col(p).mean();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = x(i, p) - m;
      num += d * (x((i + 1) % n, p) - m);
      den += d * d;
    }
    if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    sum += (num / den) * (num / den);
  }
  return std::sqrt(sum);
}

std::optional<BasinSample> basin_of(const CouplingMatrix& J, const LandscapeParams& lp, const Vec& start) {
  require(lp.model == LandscapeModel::visa, "basins are defined for the VISA landscape");
  const int n = J.n();
  require(start.size() == 3 * n, "start has the wrong dimension");
  BasinSample out;
  out.start = start;
  const VectorState x0 = ConstStateMap(start.data(), n, 3);
  out.magnetization = magnetization_magnitude(x0);
  out.correlation = correlation_magnitude(x0);

  Vec x = start;
  double E = landscape_energy(J, lp, x);
  const int max_iter = 20 * lp.max_newton_iter;
  for (int it = 0; it < max_iter; ++it) {
    const Vec g = landscape_gradient(J, lp, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(landscape_hessian(J, lp, x));
    const double lmin = es.eigenvalues()(0);
    Vec d;
    if (g.norm() < lp.grad_tol * 10.0) {
      if (lmin >= -lp.zero_mode_tol) {
        const CriticalPoint cp = classify_point(J, lp, x);
        out.label = cp.label;
        out.energy = cp.energy;
        return out;
      }
      // stuck on a saddle: leave along the most negative curvature direction
      d = es.eigenvectors().col(0);
    } else {
      // rotational zero modes are dropped from the Newton step rather than forcing gradient descent
      const double cutoff = std::max(lp.zero_mode_tol, 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
      Vec proj = es.eigenvectors().transpose() * g;
      for (Eigen::Index k = 0; k < proj.size(); ++k)
        proj(k) = std::abs(es.eigenvalues()(k)) > cutoff ? proj(k) / es.eigenvalues()(k) : 0.0;
      d = -(es.eigenvectors() * proj);
      if (lmin < -cutoff || g.dot(d) >= 0.0) d = -g;
    }
    auto line_search = [&](Vec dir) {
      const double len = dir.norm();
      if (len > 1.0) dir /= len;
      const double slope = std::min(g.dot(dir), 0.0);
      for (double t = 1.0; t > 1e-16; t *= 0.5) {
        Vec trial = x + t * dir;
        const double Et = landscape_energy(J, lp, trial);
        if (std::isfinite(Et) && Et <= E + 1e-4 * t * slope && (Et < E || slope == 0.0)) {
          x = std::move(trial);
          E = Et;
          return true;
        }
      }
      return false;
    };
    // quartic zero-mode directions can defeat a Newton step; steepest descent is the fallback
    if (!line_search(d) && !line_search(-g)) {
      // no step improves E: accept as a minimum once only round-off is left
      if (g.norm() < 1e-6 && lmin >= -1e-6) {
        const CriticalPoint cp = classify_point(J, lp, x);
        out.label = cp.label;
        out.energy = cp.energy;
        return out;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

BasinReport basins(const CouplingMatrix& J, const LandscapeParams& lp, int n_starts, std::uint64_t seed) {
  require(n_starts >= 1, "need at least one start");
  const int dim = 3 * J.n();
  std::vector<std::optional<BasinSample>> res(static_cast<std::size_t>(n_starts));
#pragma omp parallel for schedule(dynamic, 8)
  for (int s = 0; s < n_starts; ++s)
    res[static_cast<std::size_t>(s)] =
        basin_of(J, lp, random_start(dim, derive_seed({seed, static_cast<std::uint64_t>(s)})));
  BasinReport out;
  for (auto& r : res) {
    if (r) out.samples.push_back(std::move(*r));
    else ++out.failures;
  }
  return out;
}

PhaseMap phase_map(const CouplingMatrix& J, const std::vector<double>& gammas, const std::vector<double>& Ps,
                   double alpha, int n_starts, std::uint64_t seed) {
  require(!gammas.empty() && !Ps.empty(), "phase map grid is empty");
  PhaseMap pm;
  pm.gammas = gammas;
  pm.Ps = Ps;
  std::uint64_t cell_id = 0;
  for (double P : Ps) {
    for (double g : gammas) {
      LandscapeParams lp;
      lp.gamma = g;
      lp.P = P;
      lp.alpha = alpha;
      const double amp = std::sqrt(std::max(g + J.lambda_max() / alpha, 0.25));
      const auto search = find_critical_points(J, lp, n_starts, derive_seed({seed, cell_id++}),
                                               reference_starts(J, LandscapeModel::visa, amp));
      PhaseCell cell;
      cell.gamma = g;
      cell.P = P;
      cell.label = "other";
      for (const auto& p : search.points) {
        if (!is_minimum(p.label)) continue;
        auto lower = [&](std::optional<double>& slot) {
          if (!slot || p.energy < *slot) slot = p.energy;
        };
        if (p.label == PointLabel::S0_min) lower(cell.e_s0);
        if (p.label == PointLabel::S1_min) lower(cell.e_s1);
        if (!cell.e_min || p.energy < *cell.e_min - 1e-12) {
          cell.e_min = p.energy;
          cell.label = p.label == PointLabel::S0_min ? "S0" : p.label == PointLabel::S1_min ? "S1" : "other";
        }
      }
      pm.cells.push_back(std::move(cell));
    }
  }
  const std::size_t ng = gammas.size();
  for (std::size_t r = 0; r < Ps.size(); ++r) {
    for (std::size_t c = 0; c + 1 < ng; ++c) {
      const PhaseCell& a = pm.cells[r * ng + c];
      const PhaseCell& b = pm.cells[r * ng + c + 1];
      if (!a.e_s0 || !a.e_s1 || !b.e_s0 || !b.e_s1) continue;
      const double da = *a.e_s0 - *a.e_s1, db = *b.e_s0 - *b.e_s1;
      if (da == 0.0) pm.boundary.push_back({a.gamma, a.P});
      else if (da * db < 0.0) pm.boundary.push_back({a.gamma + (b.gamma - a.gamma) * da / (da - db), a.P});
    }
  }
  return pm;
}

}  // namespace visa
