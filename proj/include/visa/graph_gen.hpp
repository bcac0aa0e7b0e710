#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "visa/coupling.hpp"

namespace visa {

/// Ring of n spins with couplings -1 between neighbours and -J across the
/// diameter (i, i + n/2). Requires even n >= 4.
CouplingMatrix mobius_ladder(int n, double J);

/// Mobius ladder plus -G couplings on (i, i +- k). Requires n >= 8, 1 < k < n/2.
CouplingMatrix jg_cyclic(int n, double J, double G, int k);

/// Sherrington-Kirkpatrick instance: J_ij ~ N(0, 1) i.i.d. for i < j.
CouplingMatrix sk_instance(int n, std::uint64_t seed);

/// Random simple 3-regular graph (pairing model, whole-sample rejection)
/// with N(0, 1) edge weights. Requires even n >= 4.
CouplingMatrix three_regular_instance(int n, std::uint64_t seed, int max_retries = 10000);

/// Eigenvalues of a circulant matrix from its first row:
/// lambda_m = sum_j row_j cos(2 pi m j / n), m = 1..n. Entry m-1 holds lambda_m.
std::vector<double> circulant_eigenvalues(const std::vector<double>& first_row);

/// Closed form -2cos(2 pi m/n) - J(-1)^m - 2G cos(2 pi k m/n) for the J-G family,
/// m = 1..n. G = 0 gives the Mobius ladder.
std::vector<double> jg_eigenvalues(int n, double J, double G, int k);

struct MobiusThresholds {
  double J_e;     ///< leading eigenvalue switches: 1 - cos(2 pi / n)
  double J_crit;  ///< ground state switches: 4 / n
};

/// Requires n/2 even.
MobiusThresholds mobius_thresholds(int n);

/// 2cos(2 pi/n) + 2J - 2; positive exactly when J > J_e. Requires n/2 even.
double eigenvalue_gap(int n, double J);

struct ReferenceEnergies {
  double E0, E1, E2, E3;
};

/// Closed-form energies of the S0..S3 reference states of the J-G family.
/// Requires n/2 even and 1 < k < n/2.
ReferenceEnergies jg_reference_energies(int n, double J, double G, int k);

/// A line a*J + b*G = c in the (J, G) plane.
struct BoundaryLine {
  enum class Kind { energy, eigenvalue };
  Kind kind;
  double a, b, c;
  std::string label;

  /// Signed residual a*J + b*G - c.
  double residual(double J, double G) const { return a * J + b * G - c; }
};

/// Energy and leading-eigenvalue boundaries for the n = 8 J-G graphs, k in {2, 3}.
std::vector<BoundaryLine> jg_boundaries(int k);

}  // namespace visa
