#include "visa/graph_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "visa/errors.hpp"
#include "visa/rng.hpp"

namespace visa {

namespace {

constexpr double kPi = std::numbers::pi;

void require_half_even(int n) {
  require(n >= 4 && n % 2 == 0 && (n / 2) % 2 == 0,
          "n/2 must be even (got n = " + std::to_string(n) + "); thresholds are only derived for that case");
}

}  // namespace

CouplingMatrix mobius_ladder(int n, double J) {
  require(n >= 4, "mobius ladder needs n >= 4 (got " + std::to_string(n) + ")");
  require(n % 2 == 0, "mobius ladder needs even n (got " + std::to_string(n) + ")");
  require(std::isfinite(J), "J must be finite");
  CouplingMatrix m = CouplingMatrix::zeros(n);
  for (int i = 0; i < n; ++i) m.set_edge(i, (i + 1) % n, -1.0);
  if (J != 0.0)
    for (int i = 0; i < n / 2; ++i) m.set_edge(i, i + n / 2, -J);
  return m;
}

CouplingMatrix jg_cyclic(int n, double J, double G, int k) {
  require(n >= 8 && n % 2 == 0, "J-G cyclic graph needs even n >= 8 (got " + std::to_string(n) + ")");
  require(k > 1 && 2 * k < n, "J-G cyclic graph needs 1 < k < n/2 (got k = " + std::to_string(k) + ")");
  CouplingMatrix m = mobius_ladder(n, J);
  if (G != 0.0)
    for (int i = 0; i < n; ++i) m.set_edge(i, (i + k) % n, -G);
  return m;
}

CouplingMatrix sk_instance(int n, std::uint64_t seed) {
  require(n >= 2, "SK instance needs n >= 2");
  Rng rng(seed);
  CouplingMatrix m = CouplingMatrix::zeros(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.set_edge(i, j, rng.normal());
  return m;
}

CouplingMatrix three_regular_instance(int n, std::uint64_t seed, int max_retries) {
  require(n >= 4 && n % 2 == 0, "3-regular instance needs even n >= 4 (got " + std::to_string(n) + ")");
  require(max_retries >= 1, "retry cap must be positive");
  Rng rng(seed);
  std::vector<int> stubs(static_cast<std::size_t>(3 * n));
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    for (int i = 0; i < 3 * n; ++i) stubs[static_cast<std::size_t>(i)] = i / 3;
    // Fisher-Yates with the portable generator; std::shuffle is not bit-stable across libraries.
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[rng.below(i + 1)]);

    std::set<std::pair<int, int>> edges;
    bool simple = true;
    for (std::size_t e = 0; e < stubs.size(); e += 2) {
      int a = stubs[e], b = stubs[e + 1];
      if (a == b) { simple = false; break; }
      if (a > b) std::swap(a, b);
      if (!edges.emplace(a, b).second) { simple = false; break; }
    }
    if (!simple) continue;

    CouplingMatrix m = CouplingMatrix::zeros(n);
    for (const auto& [a, b] : edges) m.set_edge(a, b, rng.normal());
    return m;
  }
  throw ValidationError("3-regular sampler exceeded " + std::to_string(max_retries) + " retries");
}

std::vector<double> circulant_eigenvalues(const std::vector<double>& first_row) {
  const auto n = first_row.size();
  std::vector<double> lambda(n, 0.0);
  for (std::size_t m = 1; m <= n; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // Reduce m*j mod n first so the cosine argument stays in [0, 2pi).
      const auto phase = (m * j) % n;
      acc += first_row[j] * std::cos(2.0 * kPi * static_cast<double>(phase) / static_cast<double>(n));
    }
    lambda[m - 1] = acc;
  }
  return lambda;
}

std::vector<double> jg_eigenvalues(int n, double J, double G, int k) {
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    lambda[static_cast<std::size_t>(m - 1)] = -2.0 * std::cos(2.0 * kPi * m / n) - J * sign -
                                              2.0 * G * std::cos(2.0 * kPi * ((static_cast<long>(k) * m) % n) / n);
  }
  return lambda;
}

MobiusThresholds mobius_thresholds(int n) {
  require_half_even(n);
  return {1.0 - std::cos(2.0 * kPi / n), 4.0 / n};
}

double eigenvalue_gap(int n, double J) {
  require_half_even(n);
  return 2.0 * std::cos(2.0 * kPi / n) + 2.0 * J - 2.0;
}

ReferenceEnergies jg_reference_energies(int n, double J, double G, int k) {
  require_half_even(n);
  require(k > 1 && 2 * k < n, "reference energies need 1 < k < n/2");
  const double N = n;
  const double sk = (k % 2 == 0) ? 1.0 : -1.0;        // (-1)^k
  const double sk1 = -sk;                             // (-1)^(k+1)
  const double sn4 = ((n / 4) % 2 == 0) ? 1.0 : -1.0;  // (-1)^(N/4)
  const int d = (k % 2 == 0) ? k / 2 : 0;
  const double sd = (d % 2 == 0) ? 1.0 : -1.0;
  ReferenceEnergies e{};
  e.E0 = (J - 2.0 - 2.0 * G * sk1) * N / 2.0;
  e.E1 = 4.0 - (J + 2.0) * N / 2.0 + sk * (N - 4.0 * k) * G;
  e.E2 = (sn4 * J + (1.0 + sk) * sd * G) * N / 2.0;
  e.E3 = 4.0 - N + (2.0 - N / 2.0) * J + sk * (N - 4.0 * k) * G;
  return e;
}

std::vector<BoundaryLine> jg_boundaries(int k) {
  using K = BoundaryLine::Kind;
  const double r2 = std::numbers::sqrt2;
  if (k == 2) {
    return {
        {K::energy, 1.0, 1.0, 0.5, "E0=E1: J = 1/2 - G"},
        {K::energy, 1.0, -1.0, -0.5, "E1=E2: J = G - 1/2"},
        {K::energy, 0.0, 1.0, 0.5, "E0=E2: G = 1/2"},
        {K::eigenvalue, 1.0, 1.0, 1.0 - r2 / 2.0, "l4=l5: J = 1 - sqrt2/2 - G"},
        {K::eigenvalue, 1.0, -1.0, -1.0 / r2, "l5=l6: J = G - 1/sqrt2"},
        {K::eigenvalue, 0.0, 1.0, 0.5, "l4=l6: G = 1/2"},
    };
  }
  if (k == 3) {
    return {
        {K::energy, 1.0, -1.5, 0.5, "E0=E1: J = 1/2 + 3G/2"},
        {K::energy, 1.0, -2.0, 2.0 / 3.0, "E0=E3: J = 2/3 + 2G"},
        {K::energy, 1.0, 0.0, 0.0, "E1=E3: J = 0"},
        {K::eigenvalue, 1.0, -(1.0 + 1.0 / r2), 1.0 - r2 / 2.0, "l4=l5: J = 1 - sqrt2/2 + (1 + 1/sqrt2)G"},
    };
  }
  throw ValidationError("J-G boundaries are only available for k = 2 or k = 3 (got " + std::to_string(k) + ")");
}

}  // namespace visa
