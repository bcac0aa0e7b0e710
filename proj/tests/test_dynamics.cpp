#include <doctest.h>

#include <cmath>

#include "visa/dynamics.hpp"

using namespace visa;

namespace {

const VectorField decay = [](double, const Vec& y, Vec& dy) { dy = -y; };
const VectorField zero = [](double, const Vec& y, Vec& dy) { dy = Vec::Zero(y.size()); };

double rk4_exp_error(double dt) {
  Vec y = Vec::Ones(1);
  Rk4Workspace ws;
  const int steps = static_cast<int>(std::lround(1.0 / dt));
  for (int k = 0; k < steps; ++k) rk4_step(decay, y, k * dt, dt, ws);
  return std::abs(y(0) - std::exp(-1.0));
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("gain feedback") {
  Vec g = Vec::Constant(4, 0.2);
  CHECK(gain_feedback_step(g, Vec::Ones(4), 0.03, 0.1) == g);
  Vec x0 = gain_feedback_step(Vec::Constant(3, -0.5), Vec::Zero(3), 0.03, 0.1);
  for (int i = 0; i < 3; ++i) CHECK(x0(i) == doctest::Approx(-0.5 + 0.003).epsilon(1e-15));
  Vec big = gain_feedback_step(g, Vec::Constant(4, 1.5), 0.03, 0.1);
  CHECK((big.array() < g.array()).all());
  CHECK(gain_feedback_rate(0.0, 0.03) == 0.03);
}

TEST_CASE("schedules") {
  CHECK(tanh_pump(0.0, -1.6, 0.003) == -1.6);
  CHECK(tanh_pump(0.0, 0.4 - 2.0, 0.003) == doctest::Approx(-1.6));
  double prev = -2;
  for (double t = 0; t < 5000; t += 100) {
    const double p = tanh_pump(t, -1.6, 0.003);
    CHECK(p > prev);
    CHECK(p < 1.0);
    prev = p;
  }
  CHECK(tanh_pump(1e5, -1.6, 0.003) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(linear_ramp(200.0, 1.0 / 200) == doctest::Approx(1.0));
  CHECK(beta_decay(0.0, 1.5, 100) == 1.5);
  CHECK(beta_decay(100.0, 1.5, 100) == 0.0);

  auto a = linear_interp(0.0, 10.0);
  CHECK(a.A == 1.0);
  CHECK(a.B == 0.0);
  a = linear_interp(10.0, 10.0);
  CHECK(a.A == 0.0);
  CHECK(a.B == 1.0);
  a = linear_interp(5.0, 10.0);
  CHECK(a.A == 0.5);
  CHECK(a.B == 0.5);
  bool clamped = false;
  a = linear_interp(12.0, 10.0, &clamped);
  CHECK(clamped);
  CHECK(a.B == 1.0);
  CHECK(a.A + a.B == 1.0);
}

TEST_CASE("rk4 accuracy and order") {
  Vec y = Vec::Constant(3, 2.5);
  CHECK(rk4_step(zero, y, 0.0, 0.1) == y);

  Vec e = Vec::Ones(1);
  Rk4Workspace ws;
  for (int k = 0; k < 100; ++k) rk4_step(decay, e, k * 0.1, 0.1, ws);
  // classical RK4 carries ~8.5e-8 relative error per step at dt = 0.1, so 1e-6 holds in absolute terms
  CHECK(std::abs(e(0) - std::exp(-10.0)) < 1e-6);
  CHECK(std::abs(e(0) / std::exp(-10.0) - 1.0) < 1e-5);

  const double e1 = rk4_exp_error(0.1), e2 = rk4_exp_error(0.05), e3 = rk4_exp_error(0.025);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.05));
  CHECK(std::log2(e2 / e3) >= 3.8);

  const VectorField blow = [](double, const Vec& v, Vec& dv) { dv = v.array().square() * 1e308; };
  Vec z = Vec::Constant(1, 1e10);
  CHECK_THROWS_AS(rk4_step(blow, z, 0.0, 0.1, ws), DivergenceError);
}

TEST_CASE("euler-maruyama") {
  Rng rng(3);
  Vec y = Vec::Constant(2, 1.0);
  CHECK(em_step(zero, Vec::Zero(1), y, 0.0, 0.1, rng) == y);

  // sigma = 0 is explicit Euler, bit for bit
  Vec y0 = Vec::LinSpaced(5, -1, 1);
  CHECK(em_step(decay, Vec::Zero(5), y0, 0.0, 0.1, rng) == euler_step(decay, y0, 0.0, 0.1));

  // variance after k steps is sigma^2 k dt
  const int trajectories = 20000, k = 10;
  const double sigma = 0.1, dt = 0.1;
  Rng r(11);
  double sum = 0, sum2 = 0;
  for (int t = 0; t < trajectories; ++t) {
    Vec v = Vec::Zero(1);
    for (int s = 0; s < k; ++s) v = em_step(zero, Vec::Constant(1, sigma), v, s * dt, dt, r);
    sum += v(0);
    sum2 += v(0) * v(0);
  }
  const double mean = sum / trajectories, var = sum2 / trajectories - mean * mean;
  const double expected = sigma * sigma * k * dt;
  CHECK(std::abs(var - expected) < 3 * expected * std::sqrt(2.0 / trajectories));

  // fixed seed gives an identical path
  auto path = [&](std::uint64_t seed) {
    Rng g(seed);
    Vec v = Vec::Zero(4);
    for (int s = 0; s < 50; ++s) v = em_step(decay, Vec::Constant(1, 0.1), v, s * 0.1, 0.1, g);
    return v;
  };
  CHECK(path(42) == path(42));
  CHECK_FALSE(path(42) == path(43));
}

}
