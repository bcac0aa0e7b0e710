#include "visa/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace visa {

Interp linear_interp(double t, double T, bool* clamped) {
  require(T > 0.0, "anneal horizon T must be positive");
  const double tc = std::clamp(t, 0.0, T);
  if (clamped) *clamped = (tc != t);
  const double B = tc / T;
  return {1.0 - B, B};
}

Vec gain_feedback_step(const Vec& gamma, const Vec& sq_norms, double eps, double dt) {
  require(gamma.size() == sq_norms.size(), "gain and state sizes differ");
  return gamma + dt * eps * (Vec::Ones(gamma.size()) - sq_norms);
}

void Rk4Workspace::resize(Eigen::Index n) {
  if (k1.size() == n) return;
  k1.resize(n);
  k2.resize(n);
  k3.resize(n);
  k4.resize(n);
  tmp.resize(n);
}

void rk4_step(const VectorField& f, Vec& y, double t, double dt, Rk4Workspace& ws) {
  ws.resize(y.size());
  const double half = 0.5 * dt;
  f(t, y, ws.k1);
  ws.tmp.noalias() = y + half * ws.k1;
  f(t + half, ws.tmp, ws.k2);
  ws.tmp.noalias() = y + half * ws.k2;
  f(t + half, ws.tmp, ws.k3);
  ws.tmp.noalias() = y + dt * ws.k3;
  f(t + dt, ws.tmp, ws.k4);
  y += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
  check_finite(y, t + dt);
}

Vec rk4_step(const VectorField& f, const Vec& y, double t, double dt) {
  Rk4Workspace ws;
  Vec out = y;
  rk4_step(f, out, t, dt, ws);
  return out;
}

void em_step(const VectorField& f, const Vec& sigma, Vec& y, double t, double dt, Rng& rng, Vec& drift) {
  require(sigma.size() == 1 || sigma.size() == y.size(), "noise scale must be scalar or per component");
  drift.resize(y.size());
  f(t, y, drift);
  const double sq = std::sqrt(dt);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double s = sigma.size() == 1 ? sigma(0) : sigma(i);
    y(i) += drift(i) * dt;
    if (s != 0.0) y(i) += s * sq * rng.normal();
  }
  check_finite(y, t + dt);
}

Vec em_step(const VectorField& f, const Vec& sigma, const Vec& y, double t, double dt, Rng& rng) {
  Vec out = y;
  Vec drift;
  em_step(f, sigma, out, t, dt, rng, drift);
  return out;
}

Vec euler_step(const VectorField& f, const Vec& y, double t, double dt) {
  Vec dy(y.size());
  f(t, y, dy);
  return y + dt * dy;
}

}  // namespace visa
