#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>

#include "visa/errors.hpp"
#include "visa/rng.hpp"

namespace visa {

using Vec = Eigen::VectorXd;

/// Right-hand side dy/dt = f(t, y), written into dy (already sized).
using VectorField = std::function<void(double t, const Vec& y, Vec& dy)>;

// Annealing schedules. All are pure functions of t and their parameters.

/// p(t) = (1 - p0) tanh(eps t) + p0. CIM / MR-CIM pump.
inline double tanh_pump(double t, double p0, double eps) { return (1.0 - p0) * std::tanh(eps * t) + p0; }

/// P(t) = rate * t. VISA collinearity penalty.
inline double linear_ramp(double t, double rate) { return rate * t; }

/// beta(t) = beta0 (1 - t/T). ME-HT anti-damping.
inline double beta_decay(double t, double beta0, double T) { return beta0 * (1.0 - t / T); }

struct Interp {
  double A;
  double B;
};

/// A(t) = 1 - t/T, B(t) = t/T. t outside [0, T] is clamped (and reported
/// through the optional flag).
Interp linear_interp(double t, double T, bool* clamped = nullptr);

/// One explicit Euler step of the gain feedback d(gamma_i)/dt = eps (1 - |x_i|^2).
/// sq_norms holds |x_i|^2.
Vec gain_feedback_step(const Vec& gamma, const Vec& sq_norms, double eps, double dt);

/// Derivative form of the gain feedback, for joint integration with the state.
inline double gain_feedback_rate(double sq_norm, double eps) { return eps * (1.0 - sq_norm); }

/// Scratch buffers for rk4_step so the inner loop does not allocate.
struct Rk4Workspace {
  Vec k1, k2, k3, k4, tmp;
  void resize(Eigen::Index n);
};

/// Classical fourth-order Runge-Kutta. Throws DivergenceError on non-finite output.
void rk4_step(const VectorField& f, Vec& y, double t, double dt, Rk4Workspace& ws);
Vec rk4_step(const VectorField& f, const Vec& y, double t, double dt);

/// Euler-Maruyama: y += f dt + sigma sqrt(dt) xi, xi ~ N(0, 1) per component.
/// sigma is per component (size of y) or a single entry broadcast to all.
/// sigma = 0 reduces to explicit Euler.
void em_step(const VectorField& f, const Vec& sigma, Vec& y, double t, double dt, Rng& rng, Vec& drift);
Vec em_step(const VectorField& f, const Vec& sigma, const Vec& y, double t, double dt, Rng& rng);

/// Plain explicit Euler; reference for the sigma = 0 case of em_step.
Vec euler_step(const VectorField& f, const Vec& y, double t, double dt);

inline void check_finite(const Vec& y, double t) {
  if (!y.allFinite()) throw DivergenceError("non-finite state at t = " + std::to_string(t));
}

}  // namespace visa
