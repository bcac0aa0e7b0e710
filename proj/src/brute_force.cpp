#include <omp.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "visa/errors.hpp"
#include "visa/ising.hpp"

namespace visa {

namespace {

constexpr double kTieTol = 1e-9;

struct Candidate {
  double energy = std::numeric_limits<double>::infinity();
  std::uint64_t code = std::numeric_limits<std::uint64_t>::max();
};

// Lower energy wins; near-ties go to the smaller code.
inline void offer(Candidate& best, double energy, std::uint64_t code) {
  if (energy < best.energy - kTieTol) {
    best = {energy, code};
  } else if (energy <= best.energy + kTieTol && code < best.code) {
    best.code = code;
    best.energy = std::min(best.energy, energy);
  }
}

inline int spin_of(std::uint64_t code, int i, int n) { return ((code >> (n - 1 - i)) & 1U) ? -1 : 1; }

SpinConfig decode(std::uint64_t code, int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = spin_of(code, i, n);
  return SpinConfig(std::move(s));
}

void check_size(const CouplingMatrix& J) {
  require(J.n() <= kMaxBruteForceSpins, "exhaustive search refused for n = " + std::to_string(J.n()) +
                                            " (limit " + std::to_string(kMaxBruteForceSpins) + ")");
}

// With zero field the energy is flip-symmetric, so s_0 = +1 (top bit clear) suffices.
std::uint64_t search_space(const CouplingMatrix& J) {
  return J.has_field() ? (std::uint64_t{1} << J.n()) : (std::uint64_t{1} << (J.n() - 1));
}

GroundState finish(const CouplingMatrix& J, const Candidate& best) {
  SpinConfig s = decode(best.code, J.n());
  const double e = ising_energy(J, s);
  return {std::move(s), e};
}

}  // namespace

GroundState brute_force_ground_serial(const CouplingMatrix& J) {
  check_size(J);
  const int n = J.n();
  const std::uint64_t total = search_space(J);
  Candidate best;
  Eigen::VectorXd s(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    for (int i = 0; i < n; ++i) s(i) = spin_of(code, i, n);
    offer(best, ising_energy(J, s), code);
  }
  return finish(J, best);
}

GroundState brute_force_ground(const CouplingMatrix& J) {
  check_size(J);
  const int n = J.n();
  const std::uint64_t total = search_space(J);
  const std::uint64_t block = std::min<std::uint64_t>(total, 1U << 12);
  const auto n_blocks = static_cast<std::int64_t>((total + block - 1) / block);

  // Row-major copy for the O(n) local-field updates.
  std::vector<double> w(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(i * n + j)] = J(i, j);
  const Eigen::VectorXd& h = J.field();

  std::vector<Candidate> per_block(static_cast<std::size_t>(n_blocks));

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t b = 0; b < n_blocks; ++b) {
    const std::uint64_t k0 = static_cast<std::uint64_t>(b) * block;
    const std::uint64_t k1 = std::min(total, k0 + block);
    std::uint64_t gray = k0 ^ (k0 >> 1);

    std::vector<int> s(static_cast<std::size_t>(n));
    std::vector<double> field(static_cast<std::size_t>(n), 0.0);  // sum_j J_ij s_j
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = spin_of(gray, i, n);
    double energy = 0.0;
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j = 0; j < n; ++j) f += w[static_cast<std::size_t>(i * n + j)] * s[static_cast<std::size_t>(j)];
      field[static_cast<std::size_t>(i)] = f;
      energy -= 0.5 * f * s[static_cast<std::size_t>(i)] + h(i) * s[static_cast<std::size_t>(i)];
    }

    Candidate best;
    offer(best, energy, gray);
    for (std::uint64_t k = k0 + 1; k < k1; ++k) {
      const int bit = std::countr_zero(k);
      const int i = n - 1 - bit;
      const auto ui = static_cast<std::size_t>(i);
      // Flipping s_i changes H by 2 s_i (f_i + h_i).
      energy += 2.0 * s[ui] * (field[ui] + h(i));
      s[ui] = -s[ui];
      const double ds = 2.0 * s[ui];
      for (int j = 0; j < n; ++j) field[static_cast<std::size_t>(j)] += w[static_cast<std::size_t>(j * n + i)] * ds;
      gray ^= std::uint64_t{1} << bit;
      offer(best, energy, gray);
    }
    per_block[static_cast<std::size_t>(b)] = best;
  }

  Candidate best;
  for (const auto& c : per_block) offer(best, c.energy, c.code);
  return finish(J, best);
}

}  // namespace visa
