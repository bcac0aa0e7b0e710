#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "visa/errors.hpp"
#include "visa/graph_gen.hpp"
#include "visa/ising.hpp"
#include "visa/rng.hpp"

using namespace visa;

namespace {

SpinConfig random_spins(int n, Rng& rng) {
  std::vector<int> s(n);
  for (auto& v : s) v = rng.uniform() < 0.5 ? -1 : 1;
  return SpinConfig(s);
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Matrix3d A;
  for (int i = 0; i < 9; ++i) A(i) = rng.normal();
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(A);
  Eigen::Matrix3d Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

}  // namespace

TEST_SUITE("ising_core") {

TEST_CASE("energy convention") {
  const auto J = mobius_ladder(8, 0.4);
  CHECK(ising_energy(J, reference_state(8, ReferenceFamily::S0)) == doctest::Approx(-6.4).epsilon(1e-14));
  CouplingMatrix two = CouplingMatrix::zeros(2);
  two.set_edge(0, 1, -1.0);
  CHECK(ising_energy(two, SpinConfig({1, -1})) == -1.0);
  CHECK(ising_energy(two, SpinConfig({1, 1})) == 1.0);
  Rng rng(1);
  const auto S = sk_instance(12, 3);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_spins(12, rng);
    CHECK(ising_energy(S, s) == doctest::Approx(ising_energy(S, s.flipped())).epsilon(1e-14));
  }
  CouplingMatrix f = CouplingMatrix::zeros(2);
  f.set_field(0, 0.5);
  CHECK(ising_energy(f, SpinConfig({1, 1})) == -0.5);
  CHECK_THROWS_AS(ising_energy(J, SpinConfig({1, -1})), ValidationError);
  CHECK_THROWS_AS(SpinConfig({1, 0, -1}), ValidationError);
}

TEST_CASE("brute force on mobius ladders") {
  for (double Jv : {0.1, 0.3, 0.4, 0.45}) {
    const auto g = brute_force_ground(mobius_ladder(8, Jv));
    CHECK(g.energy == doctest::Approx((Jv - 2) * 4).epsilon(1e-12));
    CHECK(same_dihedral_orbit(g.spins, reference_state(8, ReferenceFamily::S0)));
  }
  for (double Jv : {0.6, 0.8, 1.0}) {
    const auto g = brute_force_ground(mobius_ladder(8, Jv));
    CHECK(g.energy == doctest::Approx(-4 - 4 * Jv).epsilon(1e-12));
    CHECK(same_dihedral_orbit(g.spins, reference_state(8, ReferenceFamily::S1)));
  }
  // the canonical S1 representative is the oracle's answer at J = 1
  CHECK(brute_force_ground(mobius_ladder(8, 1.0)).spins == reference_state(8, ReferenceFamily::S1));
  CHECK(brute_force_ground(mobius_ladder(8, 0.4)).spins[0] == 1);

  CouplingMatrix ferro = CouplingMatrix::zeros(2);
  ferro.set_edge(0, 1, 1.0);
  const auto g2 = brute_force_ground(ferro);
  CHECK(g2.energy == -1.0);
  CHECK(g2.spins[0] == g2.spins[1]);
  CHECK_THROWS_AS(brute_force_ground(CouplingMatrix::zeros(kMaxBruteForceSpins + 1)), ValidationError);
}

TEST_CASE("parallel oracle equals serial oracle") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto J = seed % 2 ? sk_instance(14, seed) : three_regular_instance(14, seed);
    const auto a = brute_force_ground(J), b = brute_force_ground_serial(J);
    CHECK(a.energy == b.energy);
    CHECK(a.spins == b.spins);
  }
  // field breaks the flip symmetry; both still agree
  auto J = sk_instance(10, 2);
  J.set_field(3, 0.7);
  CHECK(brute_force_ground(J).spins == brute_force_ground_serial(J).spins);
}

TEST_CASE("oracle beats random configurations") {
  Rng rng(12);
  const auto J = sk_instance(16, 4);
  const double e = brute_force_ground(J).energy;
  for (int i = 0; i < 1000; ++i) CHECK(e <= ising_energy(J, random_spins(16, rng)) + 1e-12);
}

TEST_CASE("vector readout") {
  VectorState x(4, 3);
  x << 0, 0, 1, 0, 0, -1, 0, 0, -2, 0, 0, 0.5;
  const auto r = vector_readout(x);
  CHECK(std::abs(std::abs(r.axis(2)) - 1.0) < 1e-12);
  const int sgn = r.axis(2) > 0 ? 1 : -1;
  CHECK(r.spins == SpinConfig({sgn, -sgn, -sgn, sgn}));

  VectorState fig1(2, 3);
  fig1 << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0, -1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0;
  const auto s = vector_readout(fig1).spins;
  CHECK(s[0] == -s[1]);

  CHECK_THROWS_AS(vector_readout(VectorState::Zero(3, 3)), ValidationError);

  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    VectorState y(8, 3);
    for (int i = 0; i < 8; ++i) {
      const double sign = rng.uniform() < 0.5 ? -1 : 1;
      y.row(i) = Eigen::RowVector3d(sign * (1 + rng.uniform()), 0.2 * rng.normal(), 0.2 * rng.normal());
    }
    const auto base = vector_readout(y).spins;
    const Eigen::Matrix3d Q = random_rotation(rng);
    const VectorState z = y * Q.transpose();
    const auto rot = vector_readout(z).spins;
    CHECK((rot == base || rot == base.flipped()));
  }
}

TEST_CASE("nearest hypercube corner") {
  Eigen::VectorXd v(3);
  v << 0.3, -0.7, 0.1;
  CHECK(nearest_hypercube_corner(v) == SpinConfig({1, -1, 1}));
  CHECK(nearest_hypercube_corner(2 * v) == nearest_hypercube_corner(v));
  v << 0.0, -0.0, -1e-300;
  CHECK(nearest_hypercube_corner(v) == SpinConfig({1, 1, -1}));
  const auto s = reference_state(8, ReferenceFamily::S3);
  CHECK(nearest_hypercube_corner(s.as_vector()) == s);

  // Leading eigenvector in the hard band projects into the S1 orbit.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mobius_ladder(8, 0.4).weights());
  const auto lead = nearest_hypercube_corner(es.eigenvectors().col(7));
  CHECK(same_dihedral_orbit(lead, reference_state(8, ReferenceFamily::S1)));
}

TEST_CASE("reference states") {
  CHECK(reference_state(8, ReferenceFamily::S0) == SpinConfig({1, -1, 1, -1, 1, -1, 1, -1}));
  CHECK(reference_state(8, ReferenceFamily::S2) == SpinConfig({1, 1, -1, -1, 1, 1, -1, -1}));
  CHECK(reference_state(8, ReferenceFamily::S3) == SpinConfig({1, 1, -1, 1, 1, -1, 1, -1}));
  // larger S1 has exactly two frustrated ring bonds
  const auto s1 = reference_state(16, ReferenceFamily::S1);
  int walls = 0;
  for (int i = 0; i < 16; ++i) walls += s1[i] == s1[(i + 1) % 16];
  CHECK(walls == 2);
  CHECK(ising_energy(mobius_ladder(16, 0.9), s1) < ising_energy(mobius_ladder(16, 0.9), reference_state(16, ReferenceFamily::S0)));
  CHECK_THROWS_AS(reference_state(10, ReferenceFamily::S1), ValidationError);
  CHECK_THROWS_AS(reference_state(12, ReferenceFamily::S2), ValidationError);
  CHECK(parse_reference_family("S3") == ReferenceFamily::S3);
}

TEST_CASE("dihedral orbit") {
  const auto s0 = reference_state(8, ReferenceFamily::S0);
  CHECK(same_dihedral_orbit(s0, s0.flipped()));
  CHECK(same_dihedral_orbit(s0, s0.flipped(), false));  // a one-site shift flips S0
  const auto s3 = reference_state(8, ReferenceFamily::S3);
  std::vector<int> rev(s3.values().rbegin(), s3.values().rend());
  CHECK(same_dihedral_orbit(s3, SpinConfig(rev), false));
  CHECK_FALSE(same_dihedral_orbit(s0, reference_state(8, ReferenceFamily::S1)));
}

}
