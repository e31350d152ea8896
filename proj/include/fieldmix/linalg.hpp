#pragma once

#include <Eigen/Dense>

namespace fieldmix {

/// Ascending eigenvalues of a symmetric matrix (upper and lower triangles are
/// averaged first). An empty matrix yields an empty vector.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// Extreme eigenvalues of a symmetric matrix; -inf / +inf conventions are not
/// used, an empty matrix yields 0 for both.
double max_eigenvalue(const Eigen::MatrixXd& a);
double min_eigenvalue(const Eigen::MatrixXd& a);

/// Absolute PSD tolerance: 1e-9 relative to the max-norm, never below 1e-9.
double eigen_tolerance(const Eigen::MatrixXd& a);

double max_norm(const Eigen::MatrixXd& a);

}  // namespace fieldmix
