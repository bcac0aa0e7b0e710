#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace visa {

/// Symmetric interaction matrix J with zero diagonal and an optional field h.
/// The constructor enforces both invariants exactly.
class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  explicit CouplingMatrix(Eigen::MatrixXd weights);
  CouplingMatrix(Eigen::MatrixXd weights, Eigen::VectorXd field);

  static CouplingMatrix zeros(int n);

  int n() const { return static_cast<int>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& field() const { return field_; }
  double operator()(int i, int j) const { return weights_(i, j); }
  bool has_field() const { return field_.size() > 0 && field_.cwiseAbs().maxCoeff() > 0.0; }

  /// Sets J_ij = J_ji = w. i != j.
  void set_edge(int i, int j, double w);
  void set_field(int i, double v);

  /// Number of nonzero upper-triangle entries.
  int edge_count() const;
  /// Largest eigenvalue of J.
  double lambda_max() const;

  bool operator==(const CouplingMatrix& other) const;

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd field_;
};

/// Ising spin configuration; entries strictly +1 or -1.
class SpinConfig {
 public:
  SpinConfig() = default;
  explicit SpinConfig(std::vector<int> spins);

  int n() const { return static_cast<int>(spins_.size()); }
  int operator[](int i) const { return spins_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return spins_; }
  Eigen::VectorXd as_vector() const;
  SpinConfig flipped() const;

  bool operator==(const SpinConfig&) const = default;

 private:
  std::vector<int> spins_;
};

/// N soft-spin 3-vectors, row i is x_i.
using VectorState = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

}  // namespace visa
