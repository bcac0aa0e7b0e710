#include "visa/coupling.hpp"

#include <string>

#include "visa/errors.hpp"

namespace visa {

namespace {

void check_structure(const Eigen::MatrixXd& w, const Eigen::VectorXd& h) {
  require(w.rows() == w.cols(), "coupling matrix must be square");
  require(w.rows() >= 1, "coupling matrix must have at least one spin");
  require(h.size() == w.rows(), "field vector length must equal spin count");
  require(w.allFinite() && h.allFinite(), "coupling matrix entries must be finite");
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    require(w(i, i) == 0.0, "coupling matrix diagonal must be zero (row " + std::to_string(i) + ")");
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
      require(w(i, j) == w(j, i), "coupling matrix must be symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
    }
  }
}

}  // namespace

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd weights)
    : weights_(std::move(weights)), field_(Eigen::VectorXd::Zero(weights_.rows())) {
  check_structure(weights_, field_);
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXd weights, Eigen::VectorXd field)
    : weights_(std::move(weights)), field_(std::move(field)) {
  check_structure(weights_, field_);
}

CouplingMatrix CouplingMatrix::zeros(int n) {
  require(n >= 1, "spin count must be positive");
  return CouplingMatrix(Eigen::MatrixXd::Zero(n, n));
}

void CouplingMatrix::set_edge(int i, int j, double w) {
  require(i != j, "self-coupling is not allowed");
  require(i >= 0 && j >= 0 && i < n() && j < n(), "edge index out of range");
  weights_(i, j) = w;
  weights_(j, i) = w;
}

void CouplingMatrix::set_field(int i, double v) {
  require(i >= 0 && i < n(), "field index out of range");
  field_(i) = v;
}

int CouplingMatrix::edge_count() const {
  int count = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if (weights_(i, j) != 0.0) ++count;
  return count;
}

double CouplingMatrix::lambda_max() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(weights_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool CouplingMatrix::operator==(const CouplingMatrix& other) const {
  return weights_.rows() == other.weights_.rows() && weights_ == other.weights_ && field_ == other.field_;
}

SpinConfig::SpinConfig(std::vector<int> spins) : spins_(std::move(spins)) {
  for (int s : spins_) require(s == 1 || s == -1, "spin entries must be +1 or -1");
}

Eigen::VectorXd SpinConfig::as_vector() const {
  Eigen::VectorXd v(n());
  for (int i = 0; i < n(); ++i) v(i) = spins_[static_cast<std::size_t>(i)];
  return v;
}

SpinConfig SpinConfig::flipped() const {
  std::vector<int> out(spins_);
  for (int& s : out) s = -s;
  return SpinConfig(std::move(out));
}

}  // namespace visa
