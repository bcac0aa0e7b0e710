#pragma once

#include <Eigen/Dense>
#include <string>

#include "visa/coupling.hpp"

namespace visa {

/// H = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i. Each unordered pair counts once.
double ising_energy(const CouplingMatrix& J, const SpinConfig& s);
double ising_energy(const CouplingMatrix& J, const Eigen::VectorXd& s);

struct GroundState {
  SpinConfig spins;
  double energy;
};

/// Largest n accepted by the exhaustive oracle.
inline constexpr int kMaxBruteForceSpins = 24;

/// Exhaustive minimizer. Configurations are ordered by the integer whose bit
/// (n-1-i) is set when s_i = -1; among configurations within 1e-9 of the minimum
/// the smallest such integer wins. With h = 0, s_0 is pinned to +1.
///
/// Gray-code enumeration split into blocks across OpenMP threads. The result
/// does not depend on the thread count.
GroundState brute_force_ground(const CouplingMatrix& J);

/// Single-threaded reference: evaluates every configuration from scratch.
/// Same ordering and tie rule as brute_force_ground; used to cross-check it.
GroundState brute_force_ground_serial(const CouplingMatrix& J);

struct Readout {
  SpinConfig spins;
  Eigen::Vector3d axis;
};

/// Projects each x_i onto the dominant eigenvector k of M = sum_i x_i x_i^T;
/// s_i = sign(x_i . k) with sign(0) = +1. Throws on an all-zero state.
Readout vector_readout(const VectorState& x);

/// Componentwise sign with sign(0) = +1.
SpinConfig nearest_hypercube_corner(const Eigen::VectorXd& v);

enum class ReferenceFamily { S0, S1, S2, S3 };

/// S0: alternating. S1: alternating with two frustrated ring bonds at opposite
/// points (n/2 even). S2, S3: the two n = 8 J-G ground states.
SpinConfig reference_state(int n, ReferenceFamily family);

ReferenceFamily parse_reference_family(const std::string& name);

/// True if b equals a under some rotation or reflection of the ring,
/// optionally composed with a global spin flip.
bool same_dihedral_orbit(const SpinConfig& a, const SpinConfig& b, bool allow_flip = true);

}  // namespace visa
