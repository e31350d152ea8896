#include "fieldmix/linalg.hpp"

#include <algorithm>

namespace fieldmix {

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return Eigen::VectorXd();
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double max_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  if (a.rows() == 1) return a(0, 0);
  return symmetric_eigenvalues(a).maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  if (a.rows() == 1) return a(0, 0);
  return symmetric_eigenvalues(a).minCoeff();
}

double max_norm(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double eigen_tolerance(const Eigen::MatrixXd& a) { return 1e-9 * std::max(1.0, max_norm(a)); }

}  // namespace fieldmix
